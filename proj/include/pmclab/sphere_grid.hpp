#pragma once

#include <Eigen/Dense>

#include <memory>

namespace pmclab {

// Quadrature grid on S^2: product of a Gauss-Legendre rule in the polar
// cosine u = cos(theta) and a uniform periodic rule in azimuth. The azimuth
// count must be odd: an even count carries a Nyquist sawtooth that both
// spectral derivatives annihilate, which puts a spurious descent direction
// into the area functional. Node weights sum to 4*pi. Immutable after
// construction; regions share grids through shared_ptr.
class SphereGrid {
 public:
  static std::shared_ptr<const SphereGrid> product(int n_polar, int n_azimuth);

  int n_polar() const { return n_polar_; }
  int n_azimuth() const { return n_azimuth_; }
  int size() const { return n_polar_ * n_azimuth_; }
  int index(int i, int j) const { return i * n_azimuth_ + j; }

  const Eigen::ArrayXd& weights() const { return weights_; }
  // Unit directions, one row per node.
  const Eigen::Matrix<double, Eigen::Dynamic, 3>& directions() const {
    return directions_;
  }
  const Eigen::ArrayXd& polar_cos() const { return u_; }        // size n_polar
  const Eigen::ArrayXd& azimuth() const { return phi_; }        // size n_azimuth
  // 1 / sin^2(theta) per node: |grad_{S^2} f|^2 = (d_theta f)^2 + beta (d_phi f)^2.
  const Eigen::ArrayXd& beta() const { return beta_; }

  // Compensated reduction; keeps quadrature roundoff at the ulp level so
  // finite-difference checks of the exact gradients stay clean.
  double integrate(const Eigen::ArrayXd& field) const;

  // Tangential differentiation of a nodal field. The azimuthal operator is
  // the spectral periodic stencil. The polar operator splits the field into
  // even and odd azimuthal parities (half-period shift), peels the sin(theta)
  // factor off the odd part, and differentiates the polynomial parts with
  // the Gauss-Legendre differentiation matrix; exact on spherical harmonics
  // up to the grid degrees.
  Eigen::ArrayXd apply_dtheta(const Eigen::ArrayXd& field) const;
  Eigen::ArrayXd apply_dphi(const Eigen::ArrayXd& field) const;
  // Transposed operators, for adjoint accumulation of gradients.
  Eigen::ArrayXd apply_dtheta_t(const Eigen::ArrayXd& field) const;
  Eigen::ArrayXd apply_dphi_t(const Eigen::ArrayXd& field) const;

  // Materialized operators for the Hessian assembly.
  Eigen::MatrixXd dense_dtheta() const;
  Eigen::MatrixXd dense_dphi() const;

  // Bilinear interpolation of a nodal field at an arbitrary unit direction.
  // Clamped at the polar caps; adequate for membership tests and resampling.
  double interpolate(const Eigen::ArrayXd& field, const Eigen::Vector3d& dir) const;

 private:
  SphereGrid() = default;

  Eigen::ArrayXd apply_du(const Eigen::ArrayXd& field) const;
  Eigen::ArrayXd apply_du_t(const Eigen::ArrayXd& field) const;
  Eigen::ArrayXd even_parity(const Eigen::ArrayXd& field) const;

  int n_polar_ = 0;
  int n_azimuth_ = 0;
  Eigen::ArrayXd u_;
  Eigen::ArrayXd phi_;
  Eigen::ArrayXd weights_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> directions_;
  Eigen::ArrayXd beta_;
  Eigen::ArrayXd sin_theta_;      // per node
  Eigen::ArrayXd cos_theta_;      // per node
  Eigen::ArrayXd one_minus_u2_;   // per node
  Eigen::MatrixXd du_;      // n_polar x n_polar, differentiation in u
  Eigen::MatrixXd dphi_;    // n_azimuth x n_azimuth
  Eigen::MatrixXd parity_;  // circulant projector onto even azimuthal modes
};

}  // namespace pmclab
