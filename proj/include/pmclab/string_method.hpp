#pragma once

#include "pmclab/functional.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pmclab {

struct NodeDiagnostics {
  double energy = 0.0;
  double transition_mass = 0.0;
  double support_radius = 0.0;
  double barycenter_norm = 0.0;
};

struct SweepLogRow {
  int sweep = 0;
  double max_energy = 0.0;
  double argmax_t = 0.0;
  double mean_step = 0.0;
  bool reparam_accepted = true;
  bool clip_accepted = true;
};

struct WidthEstimate {
  double value = 0.0;
  int argmax_index = 0;  // ties broken toward the smallest index
  bool multi_peak = false;
  bool converged = false;
  int sweeps = 0;
  std::vector<NodeDiagnostics> node_diagnostics;
  std::vector<SweepLogRow> log;
};

struct RelaxSchedule {
  int max_sweeps = 150;
  double step0 = 0.05;
  double min_step = 1e-12;
  double energy_tol = 1e-8;  // stall threshold: max-energy drop per window
  int stall_sweeps = 5;      // window length for the stall test
  double gtol = 1e-6;        // argmax gradient-density norm at convergence
  int jobs = 1;
};

// Path of concentric balls B_{r t_k}(x) with the empty-set proxy at t = 0.
// Errors out unless A^h of the endpoint is negative.
RegionPath sphere_path(std::shared_ptr<const SphereGrid> grid,
                       const Eigen::Vector3d& center, double max_radius,
                       int nodes, const Prescription& p,
                       const Metric& metric = Metric::flat());

struct RelaxResult {
  RegionPath path;
  WidthEstimate width;
};

// String relaxation with pinned endpoints: per sweep, backtracking descent
// on every interior node, optional clip to the barrier ball, then
// argmax-anchored reparameterization to near-uniform flat-distance spacing.
// Accepted sweeps never increase the path maximum.
RelaxResult relax_path(const RegionPath& path, const Prescription& p,
                       const Metric& metric, std::optional<double> clip_radius,
                       const RelaxSchedule& schedule);

struct WidthConfig {
  std::shared_ptr<const SphereGrid> grid;
  std::vector<double> init_radii{2.0, 3.0};
  std::vector<Eigen::Vector3d> centers{Eigen::Vector3d::Zero()};
  int nodes = 101;
  int perturbations = 0;          // extra perturbed copies of each start
  double perturbation_amplitude = 0.0;
  uint64_t seed = 1;
  RelaxSchedule schedule;
};

// Best-of over the configured initializations; keeps the winning path.
RelaxResult estimate_width(const Prescription& p, const Metric& metric,
                           std::optional<double> clip_radius,
                           const WidthConfig& config);

struct WidthTableRow {
  double R = 0.0;
  double omega = 0.0;
  double epsilon_R = 0.0;
  double slope = 0.0;       // centered difference; NaN at the table edges
  bool selected = false;    // monotonicity-trick slope window
  bool monotone_ok = true;  // non-increasing w.r.t. the previous row
  bool converged = false;
};

// omega_hat(R) over the given truncation radii with shared initialization.
// Also returns the relaxed path per R for the nice-class checks.
std::vector<WidthTableRow> width_sweep(const PrescriptionPtr& p,
                                       const std::vector<double>& radii,
                                       const Metric& metric,
                                       const WidthConfig& config,
                                       double monotone_slack,
                                       std::vector<RelaxResult>* paths = nullptr);

// Slope window of the monotonicity trick: centered slopes within
// [-2/R - tol, tol]. Requires at least 3 rows; fills the slope/selected
// columns of the table and returns the selected radii.
std::vector<double> select_monotonicity_radii(std::vector<WidthTableRow>& table,
                                              double tol);

struct NiceClassReport {
  double R = 0.0, C = 0.0, eta = 0.0, theta = 0.0;
  bool support_ok = false;      // (i)  every node inside B_{R+1-eps_R}
  bool energy_ok = false;       // (ii) max energy <= omega(R) + theta
  bool transition_ok = false;   // (iii) transition mass <= C on the
                                //       high-energy part of the path
  double max_support_radius = 0.0;
  double max_energy = 0.0;
  double max_transition_mass_high = 0.0;
  bool pass() const { return support_ok && energy_ok && transition_ok; }
};

NiceClassReport check_nice_class(const RegionPath& path,
                                 const TruncatedPrescription& hr, double C,
                                 double eta, double theta, double omega_R,
                                 const Metric& metric = Metric::flat());

}  // namespace pmclab
