#include "pmclab/functional.hpp"

#include "pmclab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace pmclab {

namespace {

const QuadratureRule& ray_rule() {
  static const QuadratureRule rule = gauss_legendre_01(16);
  return rule;
}

struct BoundaryState {
  Eigen::ArrayXd rho;
  Eigen::ArrayXd dtheta;  // d_theta rho
  Eigen::ArrayXd dphi;    // d_phi rho
  Eigen::ArrayXd g2;      // dtheta^2 + beta dphi^2
  Eigen::ArrayXd s;       // sqrt(rho^2 + g2)
};

BoundaryState boundary_state(const StarRegion& region) {
  const SphereGrid& g = region.grid();
  BoundaryState st;
  st.rho = region.radius();
  st.dtheta = g.apply_dtheta(st.rho);
  st.dphi = g.apply_dphi(st.rho);
  st.g2 = st.dtheta.square() + g.beta() * st.dphi.square();
  st.s = (st.rho.square() + st.g2).sqrt();
  return st;
}

double weighted_area(const StarRegion& region, const BoundaryState& st,
                     const Metric& metric) {
  const SphereGrid& g = region.grid();
  if (metric.is_flat()) return g.integrate(st.rho * st.s);
  Eigen::ArrayXd w(g.size());
  for (int k = 0; k < g.size(); ++k) {
    w[k] = metric.surface_weight(region.boundary_point(k));
  }
  return g.integrate(w * st.rho * st.s);
}

double weighted_prescription_term(const StarRegion& region,
                                  const Prescription& p, const Metric& metric,
                                  const BoundaryState& st) {
  const SphereGrid& g = region.grid();
  const QuadratureRule& rule = ray_rule();
  const bool flat = metric.is_flat();
  Eigen::ArrayXd ray(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const Eigen::Vector3d d = g.directions().row(k).transpose();
    double acc = 0.0;
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double sq = rule.nodes[q];
      const Eigen::Vector3d x = region.center() + (st.rho[k] * sq) * d;
      double f = p.value(x);
      if (!flat) f *= metric.volume_weight(x);
      acc += rule.weights[q] * sq * sq * f;
    }
    ray[k] = acc * st.rho[k] * st.rho[k] * st.rho[k];
  }
  return g.integrate(ray);
}

}  // namespace

EnergyBreakdown energy(const StarRegion& region, const Prescription& p,
                       const Metric& metric) {
  BoundaryState st = boundary_state(region);
  EnergyBreakdown out;
  out.area = weighted_area(region, st, metric);
  out.prescription_term = weighted_prescription_term(region, p, metric, st);
  return out;
}

ShapeGradient shape_gradient(const StarRegion& region, const Prescription& p,
                             const Metric& metric) {
  const SphereGrid& g = region.grid();
  const QuadratureRule& rule = ray_rule();
  const bool flat = metric.is_flat();
  BoundaryState st = boundary_state(region);
  const Eigen::ArrayXd& w = g.weights();

  // Area term. Surface weight and its gradient at the boundary nodes.
  Eigen::ArrayXd ws = Eigen::ArrayXd::Ones(g.size());
  Eigen::ArrayXd ws_radial = Eigen::ArrayXd::Zero(g.size());  // grad W_S . d
  Eigen::Matrix<double, Eigen::Dynamic, 3> wsg;
  if (!flat) {
    wsg.resize(g.size(), 3);
    for (int k = 0; k < g.size(); ++k) {
      const Eigen::Vector3d x = region.boundary_point(k);
      ws[k] = metric.surface_weight(x);
      const Eigen::Vector3d gw = metric.surface_weight_gradient(x);
      wsg.row(k) = gw.transpose();
      ws_radial[k] = gw.dot(g.directions().row(k).transpose());
    }
  }

  Eigen::ArrayXd darea_drho =
      w * (ws_radial * st.rho * st.s + ws * (st.s + st.rho.square() / st.s));
  darea_drho += g.apply_dtheta_t(w * ws * st.rho * st.dtheta / st.s);
  darea_drho += g.apply_dphi_t(w * ws * st.rho * g.beta() * st.dphi / st.s);

  Eigen::Vector3d darea_dc = Eigen::Vector3d::Zero();
  if (!flat) {
    const Eigen::ArrayXd elem = w * st.rho * st.s;
    for (int k = 0; k < g.size(); ++k) {
      darea_dc += elem[k] * wsg.row(k).transpose();
    }
  }

  // Prescription term.
  Eigen::ArrayXd dpres_drho(g.size());
  Eigen::Vector3d dpres_dc = Eigen::Vector3d::Zero();
  for (int k = 0; k < g.size(); ++k) {
    const Eigen::Vector3d d = g.directions().row(k).transpose();
    const double rho = st.rho[k];
    double acc_v = 0.0;    // sum v_q g_q^2 F
    double acc_r = 0.0;    // sum v_q g_q^3 (grad F . d)
    Eigen::Vector3d acc_c = Eigen::Vector3d::Zero();
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double sq = rule.nodes[q];
      const double vq = rule.weights[q];
      const Eigen::Vector3d x = region.center() + (rho * sq) * d;
      const double h = p.value(x);
      Eigen::Vector3d gf = p.gradient(x);
      double f = h;
      if (!flat) {
        const double wv = metric.volume_weight(x);
        gf = wv * gf + h * metric.volume_weight_gradient(x);
        f = h * wv;
      }
      acc_v += vq * sq * sq * f;
      acc_r += vq * sq * sq * sq * gf.dot(d);
      acc_c += vq * sq * sq * gf;
    }
    dpres_drho[k] =
        w[k] * (3.0 * rho * rho * acc_v + rho * rho * rho * acc_r);
    dpres_dc += w[k] * rho * rho * rho * acc_c;
  }

  ShapeGradient out;
  out.field = st.rho * (darea_drho - dpres_drho);
  out.center = darea_dc - dpres_dc;
  out.norm = std::sqrt((out.field.square() / w).sum() +
                       out.center.squaredNorm());
  return out;
}

Eigen::ArrayXd mean_curvature_field(const StarRegion& region,
                                    const Metric& metric) {
  const SphereGrid& g = region.grid();
  BoundaryState st = boundary_state(region);
  const Eigen::ArrayXd& w = g.weights();

  Eigen::ArrayXd ws = Eigen::ArrayXd::Ones(g.size());
  Eigen::ArrayXd ws_radial = Eigen::ArrayXd::Zero(g.size());
  Eigen::ArrayXd wv = Eigen::ArrayXd::Ones(g.size());
  if (!metric.is_flat()) {
    for (int k = 0; k < g.size(); ++k) {
      const Eigen::Vector3d x = region.boundary_point(k);
      ws[k] = metric.surface_weight(x);
      ws_radial[k] =
          metric.surface_weight_gradient(x).dot(g.directions().row(k).transpose());
      wv[k] = metric.volume_weight(x);
    }
  }

  Eigen::ArrayXd darea_drho =
      w * (ws_radial * st.rho * st.s + ws * (st.s + st.rho.square() / st.s));
  darea_drho += g.apply_dtheta_t(w * ws * st.rho * st.dtheta / st.s);
  darea_drho += g.apply_dphi_t(w * ws * st.rho * g.beta() * st.dphi / st.s);

  return darea_drho / (w * st.rho.square() * wv);
}

double first_variation(const StarRegion& region, const Prescription& p,
                       const VectorField& X) {
  const SphereGrid& g = region.grid();
  BoundaryState st = boundary_state(region);
  Eigen::ArrayXd h_field = mean_curvature_field(region);

  double acc = 0.0;
  for (int i = 0; i < g.n_polar(); ++i) {
    const double u = g.polar_cos()[i];
    const double sin_t = std::sqrt(1.0 - u * u);
    for (int j = 0; j < g.n_azimuth(); ++j) {
      const int k = g.index(i, j);
      const double phi = g.azimuth()[j];
      const Eigen::Vector3d d = g.directions().row(k).transpose();
      const Eigen::Vector3d e_theta(u * std::cos(phi), u * std::sin(phi), -sin_t);
      const Eigen::Vector3d e_phi(-std::sin(phi), std::cos(phi), 0.0);
      // Tangential gradient of rho in the orthonormal frame.
      const double dth = st.dtheta[k];
      const double dph = st.dphi[k] / sin_t;
      const Eigen::Vector3d normal =
          (st.rho[k] * d - dth * e_theta - dph * e_phi) / st.s[k];
      const Eigen::Vector3d x = region.boundary_point(k);
      const double xn = X(x).dot(normal);
      acc += g.weights()[k] * st.rho[k] * st.s[k] *
             (h_field[k] - p.value(x)) * xn;
    }
  }
  return acc;
}

double homothety_derivative(const StarRegion& region, const Prescription& p) {
  const double n = 2.0;
  const double a = area(region);
  const double div_term = integrate_interior(region, [&](const Eigen::Vector3d& x) {
    return (n + 1.0) * p.value(x) + p.gradient(x).dot(x);
  });
  return n * a - div_term;
}

double translation_derivative(const StarRegion& region, const Prescription& p,
                              const Eigen::Vector3d& direction) {
  return -integrate_interior(region, [&](const Eigen::Vector3d& x) {
    return p.gradient(x).dot(direction);
  });
}

double transition_mass(const StarRegion& region,
                       const TruncatedPrescription& hr) {
  // The integrand lives on the cutoff shell R < |x| < R+1 only, so each ray
  // rule is mapped onto its shell segment instead of the whole ray.
  const Cutoff& zeta = standard_cutoff();
  const double R = hr.truncation_radius();
  const SphereGrid& g = region.grid();
  const QuadratureRule& rule = ray_rule();
  Eigen::ArrayXd rho = region.radius();
  const Eigen::Vector3d c = region.center();

  Eigen::ArrayXd ray = Eigen::ArrayXd::Zero(g.size());
  if (c.norm() == 0.0) {
    const int panels = 8;  // zeta' is flat-plateaued, not analytic, at the ends
    for (int k = 0; k < g.size(); ++k) {
      const double hi = std::min(rho[k], R + 1.0);
      if (hi <= R) continue;
      const Eigen::Vector3d d = g.directions().row(k).transpose();
      double acc = 0.0;
      const double width = (hi - R) / panels;
      for (int pn = 0; pn < panels; ++pn) {
        const double lo = R + pn * width;
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
          const double r = lo + width * rule.nodes[q];
          acc += width * rule.weights[q] * r * r *
                 std::abs(zeta.deriv(r - R)) * hr.base().value(r * d);
        }
      }
      ray[k] = acc;
    }
    return g.integrate(ray);
  }
  // Off-center region: the shell is not radial about the region's center;
  // fall back to the plain interior rule.
  return integrate_interior(region, [&](const Eigen::Vector3d& x) {
    const double zp = zeta.deriv(x.norm() - R);
    return zp == 0.0 ? 0.0 : std::abs(zp) * hr.base().value(x);
  });
}

IsoperimetricCertificate isoperimetric_certificate(int n, double sup_h) {
  if (n != 2) throw Error("isoperimetric_certificate: only n = 2 is supported");
  if (!(sup_h > 0.0)) throw Error("isoperimetric_certificate: sup h must be positive");
  const double c3 = 36.0 * std::numbers::pi;  // C_iso^3
  IsoperimetricCertificate cert;
  cert.volume_threshold = 8.0 * c3 / (27.0 * sup_h * sup_h * sup_h);
  cert.barrier = 4.0 * c3 / (27.0 * sup_h * sup_h);
  return cert;
}

Eigen::MatrixXd field_hessian(const StarRegion& region, const Prescription& p) {
  const SphereGrid& g = region.grid();
  const int n = g.size();
  const QuadratureRule& rule = ray_rule();
  BoundaryState st = boundary_state(region);
  const Eigen::ArrayXd& w = g.weights();

  // Per-node partials of f(rho, y, z) = rho sqrt(rho^2 + y^2 + b z^2),
  // y = d_theta rho, z = d_phi rho, scaled by the node weight.
  Eigen::ArrayXd b11(n), b12(n), b13(n), b22(n), b23(n), b33(n);
  Eigen::ArrayXd frho(n), fy(n), fz(n);
  for (int k = 0; k < n; ++k) {
    const double rho = st.rho[k], y = st.dtheta[k], z = st.dphi[k];
    const double b = g.beta()[k];
    const double s = st.s[k], s3 = s * s * s;
    frho[k] = s + rho * rho / s;
    fy[k] = rho * y / s;
    fz[k] = rho * b * z / s;
    b11[k] = w[k] * (3.0 * rho / s - rho * rho * rho / s3);
    b12[k] = w[k] * (y / s - rho * rho * y / s3);
    b13[k] = w[k] * (b * z / s - rho * rho * b * z / s3);
    b22[k] = w[k] * (rho / s - rho * y * y / s3);
    b23[k] = w[k] * (-rho * y * b * z / s3);
    b33[k] = w[k] * (rho * b / s - rho * b * b * z * z / s3);
  }

  const Eigen::MatrixXd dth = g.dense_dtheta();
  const Eigen::MatrixXd dph = g.dense_dphi();
  Eigen::MatrixXd h_rho = Eigen::MatrixXd(b11.matrix().asDiagonal());
  {
    Eigen::MatrixXd m12 = b12.matrix().asDiagonal() * dth;
    h_rho += m12 + m12.transpose();
    Eigen::MatrixXd m13 = b13.matrix().asDiagonal() * dph;
    h_rho += m13 + m13.transpose();
    h_rho += dth.transpose() * (b22.matrix().asDiagonal() * dth);
    h_rho += dph.transpose() * (b33.matrix().asDiagonal() * dph);
    Eigen::MatrixXd m23 = dth.transpose() * (b23.matrix().asDiagonal() * dph);
    h_rho += m23 + m23.transpose();
  }

  // Prescription part: diagonal in rho.
  Eigen::ArrayXd dpres_drho(n), d2pres_drho2(n);
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector3d d = g.directions().row(k).transpose();
    const double rho = st.rho[k];
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0;
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double sq = rule.nodes[q];
      const double vq = rule.weights[q];
      const Eigen::Vector3d x = region.center() + (rho * sq) * d;
      acc0 += vq * sq * sq * p.value(x);
      acc1 += vq * sq * sq * sq * p.gradient(x).dot(d);
      acc2 += vq * sq * sq * sq * sq * d.dot(p.hessian(x) * d);
    }
    dpres_drho[k] = w[k] * (3.0 * rho * rho * acc0 + rho * rho * rho * acc1);
    d2pres_drho2[k] = w[k] * (6.0 * rho * acc0 + 6.0 * rho * rho * acc1 +
                              rho * rho * rho * acc2);
  }
  h_rho.diagonal().array() -= d2pres_drho2;

  // Chain rule to lambda = log rho: H_l = R H_rho R + diag(g_rho . rho),
  // R = diag(rho).
  Eigen::ArrayXd grad_rho = w * frho - dpres_drho;
  grad_rho += g.apply_dtheta_t(w * fy);
  grad_rho += g.apply_dphi_t(w * fz);
  Eigen::MatrixXd h_lambda =
      st.rho.matrix().asDiagonal() * h_rho * st.rho.matrix().asDiagonal();
  h_lambda.diagonal().array() += grad_rho * st.rho;
  return h_lambda;
}

}  // namespace pmclab
