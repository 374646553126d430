#include "pmclab/saddle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace pmclab {

namespace {

// Packed DOF vector: log-radii then (optionally) the center.
struct Dofs {
  Eigen::VectorXd x;
  bool with_center;
  int n_field;

  static Dofs from(const StarRegion& region, bool with_center) {
    Dofs d;
    d.with_center = with_center;
    d.n_field = static_cast<int>(region.log_radius().size());
    d.x.resize(d.n_field + (with_center ? 3 : 0));
    d.x.head(d.n_field) = region.log_radius().matrix();
    if (with_center) d.x.tail(3) = region.center();
    return d;
  }

  StarRegion to_region(const StarRegion& like) const {
    Eigen::ArrayXd field = x.head(n_field).array();
    Eigen::Vector3d c = with_center ? Eigen::Vector3d(x.tail(3)) : like.center();
    return StarRegion(like.grid_ptr(), c, std::move(field));
  }
};

// Gradient of A^h in packed form, preconditioned by the inverse grid
// weights so the field part is an L2 density.
Eigen::VectorXd packed_gradient(const StarRegion& region, const Prescription& p,
                                const Metric& metric, bool with_center,
                                double* phi_out) {
  ShapeGradient g = shape_gradient(region, p, metric);
  const int n = static_cast<int>(g.field.size());
  Eigen::VectorXd out(n + (with_center ? 3 : 0));
  out.head(n) = g.field.matrix();
  if (with_center) out.tail(3) = g.center;
  if (phi_out) {
    double phi = (g.field.square() / region.grid().weights()).sum();
    if (with_center) phi += g.center.squaredNorm();
    *phi_out = phi;
  }
  return out;
}

Eigen::VectorXd precondition(const StarRegion& region,
                             const Eigen::VectorXd& g) {
  const int n = static_cast<int>(region.log_radius().size());
  Eigen::VectorXd out = g;
  out.head(n).array() /= region.grid().weights();
  return out;
}

}  // namespace

void fill_residual(SaddleCandidate& cand, const Prescription& p,
                   const Metric& metric) {
  const StarRegion& region = cand.region;
  const SphereGrid& grid = region.grid();
  Eigen::ArrayXd h_disc = mean_curvature_field(region, metric);
  Eigen::ArrayXd target(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    target[k] = p.value(region.boundary_point(k));
  }
  Eigen::ArrayXd diff = h_disc - target;
  cand.residual_sup = diff.abs().maxCoeff();

  Eigen::ArrayXd rho = region.radius();
  Eigen::ArrayXd dtheta = grid.apply_dtheta(rho);
  Eigen::ArrayXd dphi = grid.apply_dphi(rho);
  Eigen::ArrayXd g2 = dtheta.square() + grid.beta() * dphi.square();
  Eigen::ArrayXd da = grid.weights() * rho * (rho.square() + g2).sqrt();
  const double total_area = da.sum();
  cand.residual_l2 = std::sqrt((diff.square() * da).sum() / total_area);
  cand.energy = energy(region, p, metric).total();
}

SaddleCandidate refine_saddle(const StarRegion& start, const Prescription& p,
                              const Metric& metric, const SaddleConfig& config) {
  const bool wc = config.optimize_center;
  StarRegion region = start;

  // Center equilibration: the energy is exactly translation-invariant in the
  // area term, so descending it over the center alone drives the translation
  // derivative to zero (drift along the prescription's slope, e.g. into a
  // slab plateau or toward the cutoff shell) before the stationarity solve.
  if (wc) {
    double step = 1.0;
    for (int it = 0; it < config.max_iterations; ++it) {
      ShapeGradient g0 = shape_gradient(region, p, metric);
      if (g0.center.norm() <= 1e-10) break;
      const Eigen::Vector3d dir = -g0.center.normalized();
      double e0 = energy(region, p, metric).total();
      bool moved = false;
      double s = step;
      while (s >= config.min_step) {
        StarRegion trial = region.with_center(region.center() + s * dir);
        if (energy(trial, p, metric).total() <
            e0 - 1e-4 * s * g0.center.norm()) {
          region = std::move(trial);
          moved = true;
          break;
        }
        s *= 0.5;
      }
      if (!moved) break;
      step = std::min(2.0 * s, 1.0);
    }
  }

  Dofs dofs = Dofs::from(region, wc);

  double phi = 0.0;
  Eigen::VectorXd g = packed_gradient(region, p, metric, wc, &phi);

  int iter = 0;
  double step = config.step0;
  for (; iter < config.max_iterations; ++iter) {
    if (std::sqrt(phi) <= config.grad_tol) break;

    // grad Phi = 2 H (P g) by central differences of the exact gradient.
    Eigen::VectorXd pg = precondition(region, g);
    const double scale = pg.norm();
    if (scale == 0.0) break;
    Eigen::VectorXd dir_probe = pg / scale;
    const double eps = config.fd_step;
    Dofs plus = dofs, minus = dofs;
    plus.x += eps * dir_probe;
    minus.x -= eps * dir_probe;
    Eigen::VectorXd gp =
        packed_gradient(plus.to_region(region), p, metric, wc, nullptr);
    Eigen::VectorXd gm =
        packed_gradient(minus.to_region(region), p, metric, wc, nullptr);
    Eigen::VectorXd grad_phi = (gp - gm) * (scale / eps);  // 2 H P g

    const double gp_norm = grad_phi.norm();
    if (gp_norm == 0.0) break;
    Eigen::VectorXd descent = -grad_phi / gp_norm;

    bool moved = false;
    double s = step;
    while (s >= config.min_step) {
      Dofs trial = dofs;
      trial.x += s * descent;
      StarRegion trial_region = trial.to_region(region);
      double trial_phi = 0.0;
      Eigen::VectorXd trial_g =
          packed_gradient(trial_region, p, metric, wc, &trial_phi);
      if (trial_phi < phi - 1e-4 * s * gp_norm) {
        dofs = std::move(trial);
        region = std::move(trial_region);
        g = std::move(trial_g);
        phi = trial_phi;
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;
    step = std::min(s * 2.0, config.step0);
  }

  // Levenberg-Marquardt polish on the stationarity system grad E = 0, with
  // the exact field Hessian and finite-difference center blocks. Handles
  // the near-zero translation modes that make plain squared-gradient
  // descent crawl.
  if (metric.is_flat() && config.lm_iterations > 0 &&
      std::sqrt(phi) > config.grad_tol) {
    const int nf = dofs.n_field;
    const int nd = static_cast<int>(dofs.x.size());
    double mu = 1e-6;
    for (int lm = 0; lm < config.lm_iterations; ++lm) {
      Eigen::VectorXd g_plain = packed_gradient(region, p, metric, wc, nullptr);
      if (g_plain.norm() <= config.grad_tol) break;

      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nd, nd);
      h.topLeftCorner(nf, nf) = field_hessian(region, p);
      if (wc) {
        const double eps = 1e-6;
        for (int a = 0; a < 3; ++a) {
          Eigen::Vector3d e = Eigen::Vector3d::Zero();
          e[a] = eps;
          ShapeGradient gp = shape_gradient(region.with_center(region.center() + e), p, metric);
          ShapeGradient gm = shape_gradient(region.with_center(region.center() - e), p, metric);
          h.col(nf + a).head(nf) = (gp.field - gm.field).matrix() / (2.0 * eps);
          h.col(nf + a).tail(3) = (gp.center - gm.center) / (2.0 * eps);
        }
        h = 0.5 * (h + h.transpose()).eval();
      }

      Eigen::MatrixXd normal = h * h;
      Eigen::VectorXd rhs = -h * g_plain;
      const double scale = normal.diagonal().maxCoeff();
      bool accepted = false;
      for (int attempt = 0; attempt < 10; ++attempt) {
        Eigen::MatrixXd damped = normal;
        damped.diagonal().array() += mu * scale;
        Eigen::VectorXd d = Eigen::LDLT<Eigen::MatrixXd>(damped).solve(rhs);
        Dofs trial = dofs;
        trial.x += d;
        StarRegion trial_region = trial.to_region(region);
        double trial_phi = 0.0;
        Eigen::VectorXd trial_g =
            packed_gradient(trial_region, p, metric, wc, &trial_phi);
        if (trial_phi < phi) {
          dofs = std::move(trial);
          region = std::move(trial_region);
          g = std::move(trial_g);
          phi = trial_phi;
          mu = std::max(mu / 3.0, 1e-14);
          accepted = true;
          break;
        }
        mu *= 10.0;
      }
      ++iter;
      if (!accepted) break;
      if (std::sqrt(phi) <= config.grad_tol) break;
    }
  }

  SaddleCandidate cand{region};
  cand.iterations = iter;
  cand.gradient_norm = std::sqrt(phi);
  fill_residual(cand, p, metric);
  cand.converged = cand.residual_sup <= config.residual_tol;

  if (config.compute_hessian) {
    if (!metric.is_flat()) {
      throw Error("refine_saddle: Hessian diagnostic requires the flat metric");
    }
    Eigen::MatrixXd h = field_hessian(region, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h,
                                                          Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    cand.hessian_negative = 0;
    cand.hessian_zero = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] < -config.zero_mode_threshold) ++cand.hessian_negative;
      else if (ev[i] <= config.zero_mode_threshold) ++cand.hessian_zero;
    }
  }
  return cand;
}

DriftReport drift_diagnostic(const std::vector<SaddleCandidate>& candidates,
                             const std::vector<double>& radii,
                             const Prescription& base) {
  if (candidates.size() != radii.size() || candidates.empty()) {
    throw Error("drift_diagnostic: candidate/radius mismatch");
  }
  DriftReport rep;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const StarRegion& region = candidates[i].region;
    DriftRow row;
    row.R = radii[i];
    row.support_radius = region.support_radius();
    const Eigen::Vector3d bc = barycenter(region);
    row.barycenter_norm = bc.norm();
    row.energy = candidates[i].energy;
    try {
      StarRegion centred = resample_about(region, bc);
      StarRegion unit_ball = StarRegion::ball(region.grid_ptr(), 1.0, bc);
      row.unit_ball_distance = flat_distance(centred, unit_ball).value;
    } catch (const Error&) {
      row.unit_ball_distance = std::numeric_limits<double>::quiet_NaN();
    }
    rep.rows.push_back(row);
  }

  const double ball_level = 4.0 * std::numbers::pi / 3.0;  // A^2(B_1)
  rep.limit_energy_gap = std::abs(rep.rows.back().energy - ball_level);

  if (base.is_constant()) {
    rep.classification = "neutral";
  } else if (rep.rows.size() >= 2) {
    const double db = rep.rows.back().barycenter_norm -
                      rep.rows.front().barycenter_norm;
    const double dr = rep.rows.back().R - rep.rows.front().R;
    rep.classification = (dr > 0.0 && db >= 0.3 * dr) ? "drifting" : "confined";
  } else {
    rep.classification =
        rep.rows.front().barycenter_norm > 2.0 ? "drifting" : "confined";
  }
  return rep;
}

}  // namespace pmclab
