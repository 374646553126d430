#include "pmclab/string_method.hpp"

#include "pmclab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace pmclab {

namespace {

double path_max(const std::vector<double>& energies, int* argmax = nullptr) {
  int best = 0;
  for (size_t i = 1; i < energies.size(); ++i) {
    if (energies[i] > energies[best]) best = static_cast<int>(i);
  }
  if (argmax) *argmax = best;
  return energies[best];
}

std::vector<double> node_energies(const RegionPath& path, const Prescription& p,
                                  const Metric& metric, int jobs) {
  std::vector<double> out(path.nodes.size());
  auto work = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      out[i] = energy(path.nodes[i], p, metric).total();
    }
  };
  if (jobs <= 1 || path.nodes.size() < 8) {
    work(0, path.nodes.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (path.nodes.size() + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
      const size_t lo = t * chunk;
      const size_t hi = std::min(path.nodes.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

// One backtracking descent step on a single node (field DOFs only, center
// pinned). When a path tangent is supplied the step is restricted to the
// transverse directions, so a ridge node relaxes without sliding down the
// path (climbing-string anchor). Returns the accepted step length, 0 if the
// line search failed.
double descend_node(StarRegion& node, const Prescription& p,
                    const Metric& metric, double& energy_io, double step0,
                    double min_step, double* gnorm_out,
                    const Eigen::ArrayXd* tangent = nullptr) {
  ShapeGradient grad = shape_gradient(node, p, metric);
  const Eigen::ArrayXd& w = node.grid().weights();
  Eigen::ArrayXd dir = -(grad.field / w);
  if (tangent) {
    const double t2 = (w * tangent->square()).sum();
    if (t2 > 0.0) {
      const double along = -(w * dir * *tangent).sum() / t2;
      dir += along * *tangent;
    }
  }
  const double slope = (grad.field * dir).sum();
  if (gnorm_out) *gnorm_out = std::sqrt(std::max(0.0, -slope));
  if (!(slope < 0.0)) return 0.0;

  double step = step0;
  while (step >= min_step) {
    StarRegion trial = node.with_log_radius(node.log_radius() + step * dir);
    const double e = energy(trial, p, metric).total();
    if (e <= energy_io + 1e-4 * step * slope) {
      node = std::move(trial);
      energy_io = e;
      return step;
    }
    step *= 0.5;
  }
  return 0.0;
}

// Cumulative flat-distance arclength along the path (shared center; exact
// radial formula).
std::vector<double> arclength(const RegionPath& path) {
  std::vector<double> ell(path.nodes.size(), 0.0);
  for (size_t i = 1; i < path.nodes.size(); ++i) {
    ell[i] = ell[i - 1] +
             flat_distance(path.nodes[i - 1], path.nodes[i]).value;
  }
  return ell;
}

// Linear interpolation of log-radius fields at arclength s.
Eigen::ArrayXd interp_field(const RegionPath& path,
                            const std::vector<double>& ell, double s) {
  size_t p = 0;
  while (p + 2 < ell.size() && ell[p + 1] < s) ++p;
  const double den = ell[p + 1] - ell[p];
  const double tau = den > 0.0 ? std::clamp((s - ell[p]) / den, 0.0, 1.0) : 0.0;
  return (1.0 - tau) * path.nodes[p].log_radius() +
         tau * path.nodes[p + 1].log_radius();
}

// Redistribute interior nodes to near-uniform spacing in flat distance,
// keeping the argmax node exact so the peak never loses resolution.
RegionPath reparameterize(const RegionPath& path, int anchor) {
  const int m = static_cast<int>(path.nodes.size());
  std::vector<double> ell = arclength(path);
  if (ell.back() <= 0.0) return path;

  RegionPath out = path;
  auto place = [&](int from, int to) {
    const double lo = ell[from], hi = ell[to];
    for (int i = from + 1; i < to; ++i) {
      const double s = lo + (hi - lo) * (i - from) / (to - from);
      out.nodes[i] = path.nodes[i].with_log_radius(interp_field(path, ell, s));
    }
  };
  if (anchor <= 0 || anchor >= m - 1) {
    place(0, m - 1);
  } else {
    place(0, anchor);
    place(anchor, m - 1);
  }
  return out;
}

RegionPath clip_path(const RegionPath& path, double radius) {
  RegionPath out = path;
  for (auto& node : out.nodes) {
    if (node.support_radius() > radius) node = clip_to_ball(node, radius);
  }
  return out;
}

}  // namespace

RegionPath sphere_path(std::shared_ptr<const SphereGrid> grid,
                       const Eigen::Vector3d& center, double max_radius,
                       int nodes, const Prescription& p, const Metric& metric) {
  if (nodes < 2) throw Error("sphere_path: need at least 2 nodes");
  if (!(max_radius > kEmptyProxyRadius)) {
    throw Error("sphere_path: max radius too small");
  }
  const StarRegion endpoint = StarRegion::ball(grid, max_radius, center);
  const double end_energy = energy(endpoint, p, metric).total();
  if (!(end_energy < 0.0)) {
    throw Error("sphere_path: not a mountain pass path (endpoint energy " +
                std::to_string(end_energy) + " >= 0)");
  }
  RegionPath path;
  path.nodes.reserve(nodes);
  path.t.reserve(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double t = static_cast<double>(k) / (nodes - 1);
    const double r = std::max(max_radius * t, kEmptyProxyRadius);
    path.nodes.push_back(StarRegion::ball(grid, r, center));
    path.t.push_back(t);
  }
  path.validate(kEmptyProxyRadius + center.norm());
  return path;
}

RelaxResult relax_path(const RegionPath& start, const Prescription& p,
                       const Metric& metric, std::optional<double> clip_radius,
                       const RelaxSchedule& schedule) {
  start.validate(kEmptyProxyRadius + start.nodes.front().center().norm());
  const int m = static_cast<int>(start.nodes.size());
  if (m < 3) throw Error("relax_path: need at least 3 nodes");

  bool degenerate = true;
  for (int i = 1; i + 1 < m; ++i) {
    if (start.nodes[i].max_radius() > 2.0 * kEmptyProxyRadius) degenerate = false;
  }
  if (degenerate) {
    throw Error("relax_path: degenerate path (all interior nodes are proxies)");
  }

  RegionPath path = start;
  if (clip_radius) path = clip_path(path, *clip_radius);
  std::vector<double> energies = node_energies(path, p, metric, schedule.jobs);

  WidthEstimate width;
  std::vector<double> node_step(m, schedule.step0);
  int stall = 0;
  double argmax_gnorm = std::numeric_limits<double>::infinity();

  int sweep = 0;
  for (; sweep < schedule.max_sweeps; ++sweep) {
    const double max_before = path_max(energies);

    // Descent on interior nodes (independent; parallel across jobs). The
    // current argmax node only moves transverse to the path so that the
    // ridge estimate never drains downhill.
    int argmax_start = 0;
    path_max(energies, &argmax_start);
    Eigen::ArrayXd anchor_tangent;
    if (argmax_start > 0 && argmax_start < m - 1) {
      anchor_tangent = path.nodes[argmax_start + 1].log_radius() -
                       path.nodes[argmax_start - 1].log_radius();
    }
    RegionPath descended = path;
    std::vector<double> new_energies = energies;
    std::vector<double> gnorms(m, 0.0);
    std::vector<double> steps(m, 0.0);
    auto work = [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) {
        const bool is_anchor = i == argmax_start && anchor_tangent.size() > 0;
        steps[i] = descend_node(descended.nodes[i], p, metric, new_energies[i],
                                node_step[i], schedule.min_step, &gnorms[i],
                                is_anchor ? &anchor_tangent : nullptr);
      }
    };
    if (schedule.jobs <= 1) {
      work(1, m - 1);
    } else {
      std::vector<std::thread> pool;
      const int interior = m - 2;
      const int chunk = (interior + schedule.jobs - 1) / schedule.jobs;
      for (int t = 0; t < schedule.jobs; ++t) {
        const int lo = 1 + t * chunk;
        const int hi = std::min(m - 1, lo + chunk);
        if (lo < hi) pool.emplace_back(work, lo, hi);
      }
      for (auto& th : pool) th.join();
    }
    double mean_step = 0.0;
    int moved = 0;
    for (int i = 1; i < m - 1; ++i) {
      node_step[i] = steps[i] > 0.0 ? std::min(steps[i] * 2.0, schedule.step0)
                                    : std::max(node_step[i] * 0.5, schedule.min_step);
      mean_step += steps[i];
      if (steps[i] > 0.0) ++moved;
    }
    mean_step /= std::max(1, m - 2);

    // Clip, then reparameterize; fall back stepwise if the path maximum
    // would increase.
    SweepLogRow row;
    row.sweep = sweep;
    row.mean_step = mean_step;

    RegionPath clipped = descended;
    std::vector<double> clipped_e = new_energies;
    if (clip_radius) {
      clipped = clip_path(descended, *clip_radius);
      clipped_e = node_energies(clipped, p, metric, schedule.jobs);
      if (path_max(clipped_e) > max_before + 1e-12) {
        clipped = descended;
        clipped_e = new_energies;
        row.clip_accepted = false;
      }
    }

    int argmax = 0;
    path_max(clipped_e, &argmax);
    RegionPath reparam = reparameterize(clipped, argmax);
    std::vector<double> reparam_e = node_energies(reparam, p, metric, schedule.jobs);
    if (path_max(reparam_e) > max_before + 1e-12) {
      // Interpolation bulge: give the redistributed nodes one descent pass
      // before judging the sweep.
      auto polish = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
          double gn = 0.0;
          descend_node(reparam.nodes[i], p, metric, reparam_e[i],
                       node_step[i], schedule.min_step, &gn);
        }
      };
      if (schedule.jobs <= 1) {
        polish(1, m - 1);
      } else {
        std::vector<std::thread> pool;
        const int interior = m - 2;
        const int chunk = (interior + schedule.jobs - 1) / schedule.jobs;
        for (int t = 0; t < schedule.jobs; ++t) {
          const int lo = 1 + t * chunk;
          const int hi = std::min(m - 1, lo + chunk);
          if (lo < hi) pool.emplace_back(polish, lo, hi);
        }
        for (auto& th : pool) th.join();
      }
    }
    if (path_max(reparam_e) <= max_before + 1e-12) {
      path = std::move(reparam);
      energies = std::move(reparam_e);
    } else {
      path = std::move(clipped);
      energies = std::move(clipped_e);
      row.reparam_accepted = false;
    }

    int argmax_now = 0;
    const double max_now = path_max(energies, &argmax_now);
    argmax_gnorm = gnorms[argmax_now];
    row.max_energy = max_now;
    row.argmax_t = path.t[argmax_now];
    width.log.push_back(row);

    // Converged when a whole window of sweeps no longer lowers the maximum.
    const int window = schedule.stall_sweeps;
    if (static_cast<int>(width.log.size()) > window) {
      const double before_window =
          width.log[width.log.size() - 1 - window].max_energy;
      if (before_window - max_now < schedule.energy_tol) {
        stall = window;
        ++sweep;
        break;
      }
    }
    if (moved == 0 && argmax_gnorm > schedule.gtol) {
      // stagnation: no node can descend but the peak is not critical
      break;
    }
  }

  int argmax_final = 0;
  width.value = path_max(energies, &argmax_final);
  width.argmax_index = argmax_final;
  width.sweeps = sweep;
  width.converged = argmax_gnorm <= schedule.gtol || stall >= schedule.stall_sweeps;
  int peaks = 0;
  for (double e : energies) {
    if (e >= width.value - 1e-9) ++peaks;
  }
  width.multi_peak = peaks > 1;

  const auto* truncated = dynamic_cast<const TruncatedPrescription*>(&p);
  width.node_diagnostics.resize(m);
  for (int i = 0; i < m; ++i) {
    NodeDiagnostics d;
    d.energy = energies[i];
    d.support_radius = path.nodes[i].support_radius();
    d.barycenter_norm = barycenter(path.nodes[i]).norm();
    d.transition_mass =
        truncated ? transition_mass(path.nodes[i], *truncated) : 0.0;
    width.node_diagnostics[i] = d;
  }
  return {std::move(path), std::move(width)};
}

RelaxResult estimate_width(const Prescription& p, const Metric& metric,
                           std::optional<double> clip_radius,
                           const WidthConfig& config) {
  if (config.init_radii.empty()) throw Error("estimate_width: no initializations");
  if (!config.grid) throw Error("estimate_width: config.grid not set");

  if (config.centers.empty()) throw Error("estimate_width: no centers");

  std::optional<RelaxResult> best;
  SplitMix64 rng(config.seed);
  const std::shared_ptr<const SphereGrid>& grid = config.grid;

  for (const Eigen::Vector3d& center : config.centers) {
    for (double r : config.init_radii) {
      std::vector<RegionPath> starts;
      starts.push_back(sphere_path(grid, center, r, config.nodes, p, metric));
      for (int k = 0; k < config.perturbations; ++k) {
        RegionPath perturbed = starts.front();
        for (size_t i = 1; i + 1 < perturbed.nodes.size(); ++i) {
          Eigen::ArrayXd noise(perturbed.nodes[i].log_radius().size());
          for (int q = 0; q < noise.size(); ++q) {
            noise[q] =
                config.perturbation_amplitude * (2.0 * rng.uniform() - 1.0);
          }
          perturbed.nodes[i] = perturbed.nodes[i].with_log_radius(
              perturbed.nodes[i].log_radius() + noise);
        }
        starts.push_back(std::move(perturbed));
      }
      for (const auto& s : starts) {
        RelaxResult result = relax_path(s, p, metric, clip_radius, config.schedule);
        if (!best || result.width.value < best->width.value) {
          best = std::move(result);
        }
      }
    }
  }
  return *best;
}

std::vector<WidthTableRow> width_sweep(const PrescriptionPtr& p,
                                       const std::vector<double>& radii,
                                       const Metric& metric,
                                       const WidthConfig& config,
                                       double monotone_slack,
                                       std::vector<RelaxResult>* paths) {
  std::vector<WidthTableRow> table(radii.size());
  if (paths) paths->resize(radii.size());

  for (size_t i = 0; i < radii.size(); ++i) {
    const double R = radii[i];
    WidthTableRow row;
    row.R = R;
    row.epsilon_R = epsilon_R(standard_cutoff(), R);
    auto hr = std::make_shared<const TruncatedPrescription>(p, R);
    const double barrier = R + 1.0 - 2.0 * row.epsilon_R;
    RelaxResult result = estimate_width(*hr, metric, barrier, config);
    row.omega = result.width.value;
    row.converged = result.width.converged;
    row.slope = std::numeric_limits<double>::quiet_NaN();
    table[i] = row;
    if (paths) (*paths)[i] = std::move(result);
  }
  for (size_t i = 1; i < table.size(); ++i) {
    table[i].monotone_ok = table[i].omega <= table[i - 1].omega + monotone_slack;
  }
  return table;
}

std::vector<double> select_monotonicity_radii(std::vector<WidthTableRow>& table,
                                              double tol) {
  if (table.size() < 3) {
    throw Error("select_monotonicity_radii: need at least 3 table rows");
  }
  std::vector<double> selected;
  for (size_t i = 1; i + 1 < table.size(); ++i) {
    const double slope = (table[i + 1].omega - table[i - 1].omega) /
                         (table[i + 1].R - table[i - 1].R);
    table[i].slope = slope;
    const double lower = -2.0 / table[i].R - tol;
    if (slope >= lower && slope <= tol) {
      table[i].selected = true;
      selected.push_back(table[i].R);
    }
  }
  return selected;
}

NiceClassReport check_nice_class(const RegionPath& path,
                                 const TruncatedPrescription& hr, double C,
                                 double eta, double theta, double omega_R,
                                 const Metric& metric) {
  NiceClassReport rep;
  rep.R = hr.truncation_radius();
  rep.C = C;
  rep.eta = eta;
  rep.theta = theta;
  const double eps = epsilon_R(standard_cutoff(), rep.R);
  const double support_bound = rep.R + 1.0 - eps;

  rep.max_energy = -std::numeric_limits<double>::infinity();
  for (const auto& node : path.nodes) {
    rep.max_support_radius = std::max(rep.max_support_radius, node.support_radius());
  }
  std::vector<double> energies;
  for (const auto& node : path.nodes) {
    energies.push_back(energy(node, hr, metric).total());
    rep.max_energy = std::max(rep.max_energy, energies.back());
  }
  rep.support_ok = rep.max_support_radius <= support_bound + 1e-12;
  rep.energy_ok = rep.max_energy <= omega_R + theta + 1e-12;

  rep.max_transition_mass_high = 0.0;
  for (size_t i = 0; i < path.nodes.size(); ++i) {
    if (energies[i] >= omega_R - eta) {
      rep.max_transition_mass_high = std::max(
          rep.max_transition_mass_high, transition_mass(path.nodes[i], hr));
    }
  }
  rep.transition_ok = rep.max_transition_mass_high <= C + 1e-12;
  return rep;
}

}  // namespace pmclab
