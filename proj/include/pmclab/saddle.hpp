#pragma once

#include "pmclab/functional.hpp"

#include <string>
#include <vector>

namespace pmclab {

struct SaddleConfig {
  int max_iterations = 300;         // squared-gradient descent budget
  int lm_iterations = 40;           // Levenberg-Marquardt polish budget
  double grad_tol = 1e-10;          // gradient-density norm target
  double residual_tol = 1e-4;       // sup |H - h| convergence report
  double fd_step = 1e-6;            // Hessian-vector finite-difference step
  double step0 = 0.5;
  double min_step = 1e-14;
  bool optimize_center = true;
  bool compute_hessian = true;
  double zero_mode_threshold = 1e-8;
};

struct SaddleCandidate {
  StarRegion region;
  double energy = 0.0;
  double gradient_norm = 0.0;
  double residual_sup = 0.0;  // sup |H - h| over boundary nodes
  double residual_l2 = 0.0;   // area-weighted L2 of H - h
  int hessian_negative = -1;  // eigenvalues below -threshold
  int hessian_zero = -1;      // |eigenvalue| <= threshold
  bool converged = false;
  int iterations = 0;
};

// Critical-point refinement from a path argmax: minimizes the squared
// gradient norm of A^h over log-radius and (optionally) center DOFs, with
// Hessian-vector descent directions and a backtracking line search.
SaddleCandidate refine_saddle(const StarRegion& start, const Prescription& p,
                              const Metric& metric, const SaddleConfig& config);

// Recomputes the PMC residual of a stored region; used to re-verify
// serialized candidates.
void fill_residual(SaddleCandidate& cand, const Prescription& p,
                   const Metric& metric);

struct DriftRow {
  double R = 0.0;
  double support_radius = 0.0;
  double barycenter_norm = 0.0;
  double energy = 0.0;
  double unit_ball_distance = 0.0;  // flat distance, recentred, to B_1
};

struct DriftReport {
  std::vector<DriftRow> rows;
  // "drifting", "confined", or "neutral" (constant h: translation symmetry
  // leaves the barycenter free).
  std::string classification;
  // |energy(last) - A^2(B_1)|; the drifting contradiction value.
  double limit_energy_gap = 0.0;
};

DriftReport drift_diagnostic(const std::vector<SaddleCandidate>& candidates,
                             const std::vector<double>& radii,
                             const Prescription& base);

}  // namespace pmclab
