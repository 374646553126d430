#include "pmclab/sphere_grid.hpp"

#include "pmclab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pmclab {

std::shared_ptr<const SphereGrid> SphereGrid::product(int n_polar,
                                                      int n_azimuth) {
  if (n_polar < 4 || n_azimuth < 9 || n_azimuth % 2 != 1) {
    throw std::invalid_argument(
        "SphereGrid: need n_polar >= 4 and odd n_azimuth >= 9");
  }
  auto grid = std::shared_ptr<SphereGrid>(new SphereGrid());
  grid->n_polar_ = n_polar;
  grid->n_azimuth_ = n_azimuth;

  QuadratureRule gl = gauss_legendre(n_polar);
  grid->u_ = Eigen::Map<const Eigen::ArrayXd>(gl.nodes.data(), n_polar);
  grid->phi_.resize(n_azimuth);
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  for (int j = 0; j < n_azimuth; ++j) grid->phi_[j] = j * dphi;

  const int n = n_polar * n_azimuth;
  grid->weights_.resize(n);
  grid->directions_.resize(n, 3);
  grid->beta_.resize(n);
  grid->sin_theta_.resize(n);
  grid->cos_theta_.resize(n);
  grid->one_minus_u2_.resize(n);
  for (int i = 0; i < n_polar; ++i) {
    const double u = gl.nodes[i];
    const double st = std::sqrt(1.0 - u * u);
    for (int j = 0; j < n_azimuth; ++j) {
      const int k = i * n_azimuth + j;
      grid->weights_[k] = gl.weights[i] * dphi;
      grid->directions_(k, 0) = st * std::cos(grid->phi_[j]);
      grid->directions_(k, 1) = st * std::sin(grid->phi_[j]);
      grid->directions_(k, 2) = u;
      grid->beta_[k] = 1.0 / (1.0 - u * u);
      grid->sin_theta_[k] = st;
      grid->cos_theta_[k] = u;
      grid->one_minus_u2_[k] = 1.0 - u * u;
    }
  }

  std::vector<double> du = differentiation_matrix(gl.nodes);
  grid->du_ = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                             Eigen::Dynamic, Eigen::RowMajor>>(
      du.data(), n_polar, n_polar);
  std::vector<double> dp = fourier_differentiation_matrix(n_azimuth);
  grid->dphi_ = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                               Eigen::Dynamic, Eigen::RowMajor>>(
      dp.data(), n_azimuth, n_azimuth);

  // Circulant projector onto the even azimuthal Fourier modes.
  grid->parity_.resize(n_azimuth, n_azimuth);
  const int m_max = (n_azimuth - 1) / 2;
  for (int j = 0; j < n_azimuth; ++j) {
    for (int j2 = 0; j2 < n_azimuth; ++j2) {
      double acc = 1.0;
      for (int m = 2; m <= m_max; m += 2) {
        acc += 2.0 * std::cos(m * (grid->phi_[j] - grid->phi_[j2]));
      }
      grid->parity_(j, j2) = acc / n_azimuth;
    }
  }
  return grid;
}

namespace {
using FieldMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                Eigen::Dynamic, Eigen::RowMajor>>;
}  // namespace

double SphereGrid::integrate(const Eigen::ArrayXd& field) const {
  double sum = 0.0, comp = 0.0;
  for (int k = 0; k < field.size(); ++k) {
    const double x = weights_[k] * field[k];
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

Eigen::ArrayXd SphereGrid::apply_du(const Eigen::ArrayXd& field) const {
  FieldMap m(field.data(), n_polar_, n_azimuth_);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      du_ * m;
  return Eigen::Map<const Eigen::ArrayXd>(out.data(), size());
}

Eigen::ArrayXd SphereGrid::apply_du_t(const Eigen::ArrayXd& field) const {
  FieldMap m(field.data(), n_polar_, n_azimuth_);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      du_.transpose() * m;
  return Eigen::Map<const Eigen::ArrayXd>(out.data(), size());
}

Eigen::ArrayXd SphereGrid::apply_dphi(const Eigen::ArrayXd& field) const {
  FieldMap m(field.data(), n_polar_, n_azimuth_);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      m * dphi_.transpose();
  return Eigen::Map<const Eigen::ArrayXd>(out.data(), size());
}

Eigen::ArrayXd SphereGrid::apply_dphi_t(const Eigen::ArrayXd& field) const {
  FieldMap m(field.data(), n_polar_, n_azimuth_);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      m * dphi_;
  return Eigen::Map<const Eigen::ArrayXd>(out.data(), size());
}

Eigen::ArrayXd SphereGrid::even_parity(const Eigen::ArrayXd& field) const {
  FieldMap m(field.data(), n_polar_, n_azimuth_);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      m * parity_;  // parity_ is symmetric
  return Eigen::Map<const Eigen::ArrayXd>(out.data(), size());
}

// d_theta f = -sin(theta) D_u f_even
//           + [u f_odd / sin(theta) - (1 - u^2) D_u (f_odd / sin(theta))],
// where f_even/f_odd are the azimuthal Fourier parity components. Odd
// azimuthal modes carry a sin(theta) factor, so both pieces differentiate
// polynomials and the operator is exact on band-limited fields.
Eigen::ArrayXd SphereGrid::apply_dtheta(const Eigen::ArrayXd& field) const {
  Eigen::ArrayXd even = even_parity(field);
  Eigen::ArrayXd odd_over_s = (field - even) / sin_theta_;
  return -sin_theta_ * apply_du(even) + cos_theta_ * odd_over_s -
         one_minus_u2_ * apply_du(odd_over_s);
}

Eigen::ArrayXd SphereGrid::apply_dtheta_t(const Eigen::ArrayXd& g) const {
  // Transpose of the composition above; the parity projectors are symmetric.
  Eigen::ArrayXd a = apply_du_t(-sin_theta_ * g);
  Eigen::ArrayXd b = (cos_theta_ * g - apply_du_t(one_minus_u2_ * g)) / sin_theta_;
  return even_parity(a) + b - even_parity(b);
}

Eigen::MatrixXd SphereGrid::dense_dtheta() const {
  Eigen::MatrixXd out(size(), size());
  Eigen::ArrayXd e = Eigen::ArrayXd::Zero(size());
  for (int k = 0; k < size(); ++k) {
    e[k] = 1.0;
    out.col(k) = apply_dtheta(e).matrix();
    e[k] = 0.0;
  }
  return out;
}

Eigen::MatrixXd SphereGrid::dense_dphi() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), size());
  for (int i = 0; i < n_polar_; ++i) {
    for (int j = 0; j < n_azimuth_; ++j) {
      for (int j2 = 0; j2 < n_azimuth_; ++j2) {
        out(index(i, j), index(i, j2)) = dphi_(j, j2);
      }
    }
  }
  return out;
}

double SphereGrid::interpolate(const Eigen::ArrayXd& field,
                               const Eigen::Vector3d& dir) const {
  const double u = std::clamp(dir.z(), -1.0, 1.0);
  double phi = std::atan2(dir.y(), dir.x());
  if (phi < 0) phi += 2.0 * std::numbers::pi;

  // Azimuth cell (periodic).
  const double dphi = 2.0 * std::numbers::pi / n_azimuth_;
  int j0 = static_cast<int>(std::floor(phi / dphi));
  if (j0 >= n_azimuth_) j0 = n_azimuth_ - 1;
  int j1 = (j0 + 1) % n_azimuth_;
  double tj = phi / dphi - j0;

  // Polar cell; clamp beyond the first/last ring.
  int i0 = 0;
  if (u <= u_[0]) {
    i0 = 0;
  } else if (u >= u_[n_polar_ - 1]) {
    i0 = n_polar_ - 2;
  } else {
    while (i0 + 1 < n_polar_ - 1 && u_[i0 + 1] < u) ++i0;
  }
  int i1 = i0 + 1;
  double ti = (u - u_[i0]) / (u_[i1] - u_[i0]);
  ti = std::clamp(ti, 0.0, 1.0);

  const double f00 = field[index(i0, j0)];
  const double f01 = field[index(i0, j1)];
  const double f10 = field[index(i1, j0)];
  const double f11 = field[index(i1, j1)];
  return (1 - ti) * ((1 - tj) * f00 + tj * f01) +
         ti * ((1 - tj) * f10 + tj * f11);
}

}  // namespace pmclab
