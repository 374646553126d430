#include "pmclab/experiments.hpp"

#include "pmclab/af_conformal.hpp"
#include "pmclab/csv.hpp"
#include "pmclab/hypotheses.hpp"
#include "pmclab/saddle.hpp"
#include "pmclab/string_method.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace pmclab {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

double get_or(const ExperimentConfig& c, const std::string& key, double fb) {
  return c.has(key) ? c.get_double(key) : fb;
}
int get_or_int(const ExperimentConfig& c, const std::string& key, int fb) {
  return c.has(key) ? c.get_int(key) : fb;
}
std::string get_or_str(const ExperimentConfig& c, const std::string& key,
                       const std::string& fb) {
  return c.has(key) ? c.get_string(key) : fb;
}
std::vector<double> get_or_list(const ExperimentConfig& c, const std::string& key,
                                std::vector<double> fb) {
  return c.has(key) ? c.get_list(key) : fb;
}

// A prescription with linear growth, used as the standard (H2)-failing
// demonstration. Not smooth at the origin; only sampled away from it.
class LinearGrowthPrescription final : public Prescription {
 public:
  explicit LinearGrowthPrescription(double c) : c_(c) {}
  double value(const Eigen::Vector3d& x) const override {
    return c_ + x.norm();
  }
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const override {
    const double r = x.norm();
    return r > 0.0 ? Eigen::Vector3d(x / r) : Eigen::Vector3d::Zero();
  }
  Eigen::Matrix3d hessian(const Eigen::Vector3d& x) const override {
    const double r = x.norm();
    if (r == 0.0) return Eigen::Matrix3d::Zero();
    const Eigen::Vector3d rad = x / r;
    return (Eigen::Matrix3d::Identity() - rad * rad.transpose()) / r;
  }
  double asymptotic_constant() const override { return c_; }
  double sup_bound() const override { return 1e9; }
  std::string name() const override { return "linear-growth"; }

 private:
  double c_;
};

PrescriptionPtr build_prescription(const ExperimentConfig& cfg,
                                   const std::string& default_family) {
  const std::string family =
      get_or_str(cfg, "prescription.family", default_family);
  const double c = get_or(cfg, "prescription.c", 2.0);
  if (family == "constant") {
    return std::make_shared<const ConstantPrescription>(c);
  }
  if (family == "gaussian") {
    return std::make_shared<const GaussianBumpPrescription>(
        c, get_or(cfg, "prescription.amplitude", 0.5),
        get_or(cfg, "prescription.scale", 2.0));
  }
  if (family == "radial-drift") {
    return std::make_shared<const GaussianBumpPrescription>(
        c, get_or(cfg, "prescription.amplitude", -0.5),
        get_or(cfg, "prescription.scale", 2.0));
  }
  if (family == "slab") {
    Eigen::Vector3d axis(1, 0, 0);
    if (cfg.has("prescription.axis")) axis = cfg.get_vector("prescription.axis");
    return std::make_shared<const SlabPrescription>(
        axis, get_or(cfg, "prescription.offset", 0.0));
  }
  if (family == "linear-growth") {
    return std::make_shared<const LinearGrowthPrescription>(c);
  }
  throw ConfigError("prescription.family: unknown family " + family);
}

std::shared_ptr<const SphereGrid> build_grid(const ExperimentConfig& cfg,
                                             int def_polar = 64,
                                             int def_azimuth = 127) {
  return SphereGrid::product(get_or_int(cfg, "grid.polar", def_polar),
                             get_or_int(cfg, "grid.azimuth", def_azimuth));
}

WidthConfig build_width_config(const ExperimentConfig& cfg,
                               std::shared_ptr<const SphereGrid> grid,
                               std::vector<double> def_radii) {
  WidthConfig wc;
  wc.grid = std::move(grid);
  wc.init_radii = get_or_list(cfg, "width.radii", std::move(def_radii));
  if (cfg.has("path.center")) wc.centers = {cfg.get_vector("path.center")};
  wc.nodes = get_or_int(cfg, "path.nodes", 101);
  wc.perturbations = get_or_int(cfg, "width.perturbations", 0);
  wc.perturbation_amplitude = get_or(cfg, "width.perturbation_amplitude", 0.0);
  wc.seed = cfg.get_seed();
  wc.schedule.max_sweeps = get_or_int(cfg, "relax.max_sweeps", 120);
  wc.schedule.step0 = get_or(cfg, "relax.step", 0.05);
  wc.schedule.gtol = get_or(cfg, "relax.gtol", 1e-6);
  wc.schedule.energy_tol = get_or(cfg, "relax.energy_tol", 1e-10);
  wc.schedule.stall_sweeps = get_or_int(cfg, "relax.stall_sweeps", 5);
  wc.schedule.jobs = get_or_int(cfg, "jobs", 1);
  return wc;
}

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const std::string& out_dir)
      : cfg_(cfg), out_(out_dir) {
    fs::create_directories(out_);
    manifest_.experiment = cfg.experiment();
    manifest_.version = tool_version();
  }

  std::string path(const std::string& name) {
    manifest_.files.push_back(name);
    return (fs::path(out_) / name).string();
  }

  void assert_that(const std::string& name, bool pass,
                   const std::string& detail = "") {
    manifest_.assertions.push_back({name, pass, detail});
  }

  template <typename F>
  void stage(const std::string& name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    manifest_.stage_seconds.emplace_back(
        name, std::chrono::duration<double>(t1 - t0).count());
  }

  void finish(double wall_seconds) {
    manifest_.wall_seconds = wall_seconds;
    for (const auto& f : manifest_.files) {
      const auto full = fs::path(out_) / f;
      if (!fs::exists(full) || fs::file_size(full) == 0) {
        assert_that("output " + f, false, "missing or empty");
      }
    }
    json j;
    j["experiment"] = manifest_.experiment;
    j["version"] = manifest_.version;
    j["wall_seconds"] = manifest_.wall_seconds;
    j["config"] = json(cfg_.entries());
    json stages = json::array();
    for (const auto& [name, secs] : manifest_.stage_seconds) {
      stages.push_back({{"stage", name}, {"seconds", secs}});
    }
    j["stages"] = stages;
    json files = json::array();
    for (const auto& f : manifest_.files) {
      const auto full = fs::path(out_) / f;
      files.push_back({{"name", f},
                       {"bytes", fs::exists(full) ? fs::file_size(full) : 0}});
    }
    j["files"] = files;
    json asserts = json::array();
    for (const auto& a : manifest_.assertions) {
      asserts.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    }
    j["assertions"] = asserts;
    j["pass"] = manifest_.all_passed();
    std::ofstream os(fs::path(out_) / "manifest.json");
    os << j.dump(2) << "\n";
  }

  RunManifest manifest_;
  const ExperimentConfig& cfg_;
  std::string out_;
};

json hypothesis_json(const HypothesisReport& r) {
  return {{"hypothesis", r.hypothesis}, {"pass", r.pass},
          {"evaluated", r.evaluated},   {"margin", r.margin},
          {"samples", r.samples},       {"seed", r.seed},
          {"note", r.note}};
}

void write_node_rows(Runner& run, const std::string& name,
                     const RegionPath& path, const WidthEstimate& width,
                     const Prescription& p, const Metric& metric) {
  CsvFile csv(run.path(name),
              {"node", "t", "area", "prescription_term", "total",
               "gradient_norm", "transition_mass"});
  for (size_t i = 0; i < path.nodes.size(); ++i) {
    EnergyBreakdown e = energy(path.nodes[i], p, metric);
    ShapeGradient g = shape_gradient(path.nodes[i], p, metric);
    csv.write({std::to_string(i), csv_num(path.t[i]), csv_num(e.area),
               csv_num(e.prescription_term), csv_num(e.total()),
               csv_num(g.norm),
               csv_num(width.node_diagnostics[i].transition_mass)});
  }
}

void write_sweep_log(Runner& run, const std::string& name,
                     const WidthEstimate& width) {
  CsvFile csv(run.path(name), {"sweep", "max_energy", "argmax_t", "mean_step",
                               "reparam_accepted", "clip_accepted"});
  for (const auto& row : width.log) {
    csv.write({std::to_string(row.sweep), csv_num(row.max_energy),
               csv_num(row.argmax_t), csv_num(row.mean_step),
               row.reparam_accepted ? "1" : "0", row.clip_accepted ? "1" : "0"});
  }
}

void run_width_sweep(Runner& run) {
  const ExperimentConfig& cfg = run.cfg_;
  auto grid = build_grid(cfg, 32, 63);
  auto p = build_prescription(cfg, "gaussian");
  auto wc = build_width_config(cfg, grid, {2.0, 3.0});
  const auto radii = get_or_list(cfg, "sweep.R", {5.0, 7.5, 10.0, 15.0, 20.0});
  const double slack = get_or(cfg, "sweep.monotone_slack", 1e-3);
  const double slope_tol = get_or(cfg, "sweep.slope_tol", 1e-3);

  std::vector<WidthTableRow> table;
  std::vector<RelaxResult> paths;
  run.stage("width-sweep", [&] {
    table = width_sweep(p, radii, Metric::flat(), wc, slack, &paths);
  });
  std::vector<double> selected;
  if (table.size() >= 3) selected = select_monotonicity_radii(table, slope_tol);

  std::vector<NiceClassReport> nice;
  run.stage("nice-class", [&] {
    for (size_t i = 0; i < table.size(); ++i) {
      if (!table[i].selected) continue;
      const double R = table[i].R;
      TruncatedPrescription hr(p, R);
      nice.push_back(check_nice_class(
          paths[i].path, hr, get_or(cfg, "nice.C_over_R", 10.0) / R,
          get_or(cfg, "nice.eta", 0.1), get_or(cfg, "nice.theta", 1e-6),
          table[i].omega));
    }
  });

  {
    CsvFile csv(run.path("width_table.csv"),
                {"R", "omega", "epsilon_R", "slope", "selected", "monotone_ok",
                 "converged"});
    for (const auto& row : table) {
      csv.write({csv_num(row.R), csv_num(row.omega), csv_num(row.epsilon_R),
                 csv_num(row.slope), row.selected ? "1" : "0",
                 row.monotone_ok ? "1" : "0", row.converged ? "1" : "0"});
    }
  }
  for (size_t i = 0; i < table.size(); ++i) {
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%g", table[i].R);
    write_sweep_log(run, std::string("sweep_log_R") + tag + ".csv",
                    paths[i].width);
    const int k = paths[i].width.argmax_index;
    paths[i].path.nodes[k].save_file(
        run.path(std::string("argmax_R") + tag + ".region"));
  }
  {
    TruncatedPrescription hr(p, table.back().R);
    write_node_rows(run, "nodes_last_R.csv", paths.back().path,
                    paths.back().width, hr, Metric::flat());
  }
  {
    json j = json::array();
    for (const auto& n : nice) {
      j.push_back({{"R", n.R},
                   {"C", n.C},
                   {"eta", n.eta},
                   {"theta", n.theta},
                   {"support_ok", n.support_ok},
                   {"energy_ok", n.energy_ok},
                   {"transition_ok", n.transition_ok},
                   {"max_support_radius", n.max_support_radius},
                   {"max_energy", n.max_energy},
                   {"max_transition_mass_high", n.max_transition_mass_high}});
    }
    std::ofstream os(run.path("nice_class.json"));
    os << j.dump(2) << "\n";
  }

  for (const auto& row : table) {
    run.assert_that("monotone R=" + std::to_string(row.R), row.monotone_ok);
    run.assert_that("converged R=" + std::to_string(row.R), row.converged);
  }
  const auto cert = isoperimetric_certificate(2, p->sup_bound());
  for (const auto& row : table) {
    run.assert_that("certificate R=" + std::to_string(row.R),
                    row.omega >= cert.barrier - 5e-3,
                    "omega " + csv_num(row.omega) + " vs certificate " +
                        csv_num(cert.barrier));
  }
  for (const auto& n : nice) {
    run.assert_that("nice-class R=" + std::to_string(n.R), n.pass());
  }
}

void run_pmc_solve(Runner& run) {
  const ExperimentConfig& cfg = run.cfg_;
  auto grid = build_grid(cfg, 24, 47);
  auto p = build_prescription(cfg, "constant");
  const double R = get_or(cfg, "solve.R", 10.0);
  auto hr = std::make_shared<const TruncatedPrescription>(p, R);
  const double eps = epsilon_R(standard_cutoff(), R);
  auto wc = build_width_config(cfg, grid, {2.0});

  RelaxResult width;
  run.stage("width", [&] {
    width = estimate_width(*hr, Metric::flat(), R + 1.0 - 2.0 * eps, wc);
  });

  SaddleConfig sc;
  sc.max_iterations = get_or_int(cfg, "saddle.max_iterations", 2000);
  sc.grad_tol = get_or(cfg, "saddle.grad_tol", 1e-10);
  sc.residual_tol = get_or(cfg, "saddle.residual_tol", 1e-4);
  sc.zero_mode_threshold = get_or(cfg, "saddle.zero_threshold", 1e-8);
  sc.compute_hessian = cfg.has("saddle.hessian") ? cfg.get_bool("saddle.hessian")
                                                  : true;
  SaddleCandidate saddle{width.path.nodes[width.width.argmax_index]};
  run.stage("saddle", [&] {
    saddle = refine_saddle(width.path.nodes[width.width.argmax_index], *hr,
                           Metric::flat(), sc);
  });

  const double homothety = homothety_derivative(saddle.region, *hr);

  saddle.region.save_file(run.path("saddle.region"));
  {
    CsvFile csv(run.path("saddle_report.csv"),
                {"omega", "energy", "gradient_norm", "residual_sup",
                 "residual_l2", "hessian_negative", "hessian_zero",
                 "homothety_derivative", "iterations", "converged"});
    csv.write({csv_num(width.width.value), csv_num(saddle.energy),
               csv_num(saddle.gradient_norm), csv_num(saddle.residual_sup),
               csv_num(saddle.residual_l2),
               std::to_string(saddle.hessian_negative),
               std::to_string(saddle.hessian_zero), csv_num(homothety),
               std::to_string(saddle.iterations), saddle.converged ? "1" : "0"});
  }
  write_sweep_log(run, "relax_log.csv", width.width);
  write_node_rows(run, "nodes.csv", width.path, width.width, *hr,
                  Metric::flat());

  // Offline re-verification of the snapshot.
  StarRegion reloaded = StarRegion::load_file(
      (fs::path(run.out_) / "saddle.region").string(), grid);
  SaddleCandidate recheck{reloaded};
  fill_residual(recheck, *hr, Metric::flat());

  run.assert_that("width converged", width.width.converged);
  run.assert_that("saddle residual", saddle.converged,
                  "sup |H - h| = " + csv_num(saddle.residual_sup));
  run.assert_that("homothety derivative", std::abs(homothety) < 1e-3,
                  csv_num(homothety));
  run.assert_that("snapshot fidelity",
                  std::abs(recheck.energy - saddle.energy) < 1e-12 &&
                      std::abs(recheck.residual_sup - saddle.residual_sup) < 1e-12);

  json j = {{"H4", hypothesis_json(check_H4(width.width.value, *p))},
            {"H3", hypothesis_json(report_H3())}};
  std::ofstream os(run.path("hypotheses.json"));
  os << j.dump(2) << "\n";
}

void run_drift_demo(Runner& run) {
  const ExperimentConfig& cfg = run.cfg_;
  auto grid = build_grid(cfg, 24, 47);
  auto p = build_prescription(cfg, "radial-drift");
  const auto radii = get_or_list(cfg, "sweep.R", {5.0, 7.5, 10.0});
  const double offset = get_or(cfg, "drift.start_offset", 2.0);

  SaddleConfig sc;
  sc.max_iterations = get_or_int(cfg, "saddle.max_iterations", 3000);
  sc.grad_tol = get_or(cfg, "saddle.grad_tol", 1e-9);
  sc.residual_tol = get_or(cfg, "saddle.residual_tol", 1e-3);
  sc.compute_hessian =
      cfg.has("saddle.hessian") ? cfg.get_bool("saddle.hessian") : false;

  std::vector<SaddleCandidate> candidates;
  run.stage("saddles", [&] {
    for (double R : radii) {
      auto hr = std::make_shared<const TruncatedPrescription>(p, R);
      Eigen::Vector3d start_center = Eigen::Vector3d::Zero();
      if (!p->is_constant()) {
        // Start near the energetically favored side for drifting profiles.
        const auto* bump = dynamic_cast<const GaussianBumpPrescription*>(p.get());
        if (bump && bump->amplitude() < 0.0) {
          start_center = Eigen::Vector3d(std::max(0.0, R - offset), 0.0, 0.0);
        }
      }
      StarRegion start = StarRegion::ball(grid, 1.0, start_center);
      candidates.push_back(refine_saddle(start, *hr, Metric::flat(), sc));
      char tag[32];
      std::snprintf(tag, sizeof(tag), "%g", R);
      candidates.back().region.save_file(
          run.path(std::string("saddle_R") + tag + ".region"));
    }
  });

  DriftReport report = drift_diagnostic(candidates, radii, *p);
  {
    CsvFile csv(run.path("drift.csv"),
                {"R", "support_radius", "barycenter_norm", "energy",
                 "unit_ball_distance", "residual_sup"});
    for (size_t i = 0; i < report.rows.size(); ++i) {
      const auto& row = report.rows[i];
      csv.write({csv_num(row.R), csv_num(row.support_radius),
                 csv_num(row.barycenter_norm), csv_num(row.energy),
                 csv_num(row.unit_ball_distance),
                 csv_num(candidates[i].residual_sup)});
    }
  }
  {
    json j = {{"classification", report.classification},
              {"limit_energy_gap", report.limit_energy_gap}};
    std::ofstream os(run.path("drift.json"));
    os << j.dump(2) << "\n";
  }

  const std::string expect = get_or_str(cfg, "drift.expect", "none");
  if (expect != "none") {
    run.assert_that("classification", report.classification == expect,
                    "got " + report.classification);
  }
  for (const auto& c : candidates) {
    run.assert_that("saddle converged", c.converged,
                    "residual " + csv_num(c.residual_sup));
  }
}

void run_conformal_example(Runner& run) {
  const ExperimentConfig& cfg = run.cfg_;
  auto grid = build_grid(cfg, 32, 63);
  const std::string profile_name =
      get_or_str(cfg, "conformal.profile", "inverse-sqrt");
  ConformalFactorPtr v = profile_name == "inverse-sqrt"
                             ? inverse_sqrt_profile()
                             : exact_inverse_r_profile();
  const auto ts = get_or_list(cfg, "conformal.t", {0.02, 0.05});
  const double R = get_or(cfg, "conformal.R", 10.0);
  auto wc = build_width_config(cfg, grid, {2.0});

  const double dt0 = dt_energy_at_zero(*v);

  // phi table and the two ODE routes on a log-spaced grid in (0, 2].
  bool phi_negative = true;
  double worst_mismatch = 0.0;
  {
    CsvFile csv(run.path("phi.csv"),
                {"r", "phi", "ode_lhs", "ode_rhs", "mismatch"});
    const int n = 41;
    for (int i = 0; i < n; ++i) {
      const double r = 0.01 * std::pow(200.0, static_cast<double>(i) / (n - 1));
      const double ph = phi(*v, r);
      const double lhs = phi_ode_lhs(*v, r);
      const double rhs = phi_ode_rhs(*v, r);
      worst_mismatch = std::max(worst_mismatch, std::abs(lhs - rhs));
      if (!(ph < 0.0)) phi_negative = false;
      csv.write({csv_num(r), csv_num(ph), csv_num(lhs), csv_num(rhs),
                 csv_num(std::abs(lhs - rhs))});
    }
  }

  // First-order consistency of the metric energy of B_1.
  auto c2 = std::make_shared<const ConstantPrescription>(2.0);
  StarRegion b1 = StarRegion::ball(grid, 1.0);
  const double e0 = energy(b1, *c2, Metric::flat()).total();
  const double fd_t = 1e-5;
  const double fd_slope =
      (energy(b1, *c2, Metric::conformal(v, fd_t)).total() - e0) / fd_t;
  bool monotone_t = true;
  {
    double prev = e0;
    for (double t : {0.01, 0.02, 0.03, 0.04, 0.05}) {
      const double e = energy(b1, *c2, Metric::conformal(v, t)).total();
      if (!(e < prev)) monotone_t = false;
      prev = e;
    }
  }

  std::vector<HypothesisHRow> rows;
  run.stage("widths", [&] { rows = hypothesis_H_check(v, ts, R, wc); });

  {
    CsvFile csv(run.path("conformal.csv"),
                {"t", "width", "sphere_path_max", "first_order_prediction",
                 "margin", "K_mean_curvature", "K_divergence", "min_lapse",
                 "converged"});
    for (const auto& row : rows) {
      DecayFit fit = row.t == 0.0
                         ? DecayFit{0.0, 0.0, 1.0}
                         : decay_fit(Metric::conformal(v, row.t), 10.0, 100.0, 64);
      csv.write({csv_num(row.t), csv_num(row.width), csv_num(row.sphere_path_max),
                 csv_num(row.first_order_prediction), csv_num(row.margin),
                 csv_num(fit.K_mean_curvature), csv_num(fit.K_divergence),
                 csv_num(fit.min_lapse), row.converged ? "1" : "0"});
    }
  }
  {
    json j = {{"profile", v->name()},
              {"dt_energy_at_zero", dt0},
              {"fd_slope_t1e-5", fd_slope},
              {"phi_1", phi(*v, 1.0)},
              {"worst_ode_mismatch", worst_mismatch}};
    std::ofstream os(run.path("conformal.json"));
    os << j.dump(2) << "\n";
  }

  run.assert_that("phi sign certificate", phi_negative);
  run.assert_that("phi ODE identity", worst_mismatch <= 1e-8,
                  csv_num(worst_mismatch));
  run.assert_that("first-order slope",
                  std::abs(fd_slope - dt0) <= 1e-4 * std::abs(dt0),
                  "fd " + csv_num(fd_slope) + " vs " + csv_num(dt0));
  run.assert_that("metric energy decreasing in t", monotone_t);
  for (const auto& row : rows) {
    if (row.t > 0.0 && row.t <= 0.1) {
      run.assert_that("width margin t=" + csv_num(row.t), row.margin > 0.0,
                      csv_num(row.margin));
    }
  }
}

void run_hypothesis_report(Runner& run) {
  const ExperimentConfig& cfg = run.cfg_;
  auto p = build_prescription(cfg, "gaussian");
  const uint64_t seed = cfg.get_seed();

  std::vector<DecayRow> h1_trace;
  HypothesisReport h1 =
      check_H1(*p, get_or_list(cfg, "hypotheses.radii", {5, 10, 20, 40}),
               get_or(cfg, "hypotheses.tol", 1e-6), 64, seed, &h1_trace);
  HypothesisReport h2 = check_H2(
      *p, get_or(cfg, "hypotheses.rho", 3.0), get_or(cfg, "hypotheses.sigma", 0.5),
      get_or(cfg, "hypotheses.r_max", 30.0), 200, 64, seed + 1);
  HypothesisReport h3 = report_H3();

  double width_estimate = 0.0;
  std::string width_note;
  if (cfg.has("hypotheses.width")) {
    width_estimate = cfg.get_double("hypotheses.width");
    width_note = "width estimate supplied by config";
  } else {
    // Cheap upper bound from unrelaxed sphere paths.
    auto grid = build_grid(cfg, 24, 47);
    auto wc = build_width_config(cfg, grid, {2.0, 3.0});
    double best = std::numeric_limits<double>::infinity();
    for (double r : wc.init_radii) {
      RegionPath sp = sphere_path(grid, wc.centers.front(), r, wc.nodes, *p);
      double mx = -std::numeric_limits<double>::infinity();
      for (const auto& node : sp.nodes) {
        mx = std::max(mx, energy(node, *p).total());
      }
      best = std::min(best, mx);
    }
    width_estimate = best;
    width_note = "sphere-path upper bound";
  }
  HypothesisReport h4 = check_H4(width_estimate, *p);
  h4.note += "; " + width_note;

  {
    CsvFile csv(run.path("h1_trace.csv"),
                {"radius", "value_deviation", "gradient_norm"});
    for (const auto& row : h1_trace) {
      csv.write({csv_num(row.radius), csv_num(row.value_deviation),
                 csv_num(row.gradient_norm)});
    }
  }
  {
    json j = json::array({hypothesis_json(h1), hypothesis_json(h2),
                          hypothesis_json(h3), hypothesis_json(h4)});
    std::ofstream os(run.path("hypotheses.json"));
    os << j.dump(2) << "\n";
  }

  run.assert_that("H1", h1.pass, "margin " + csv_num(h1.margin));
  run.assert_that("H2", h2.pass, "margin " + csv_num(h2.margin));
  run.assert_that("H4", h4.pass,
                  "width " + csv_num(width_estimate) + ", margin " +
                      csv_num(h4.margin));
}

}  // namespace

std::string tool_version() { return "1.0.0"; }

RunManifest run_experiment(const ExperimentConfig& config,
                           const std::string& out_dir) {
  Runner run(config, out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& name = config.experiment();
  if (name == "width-sweep") {
    run_width_sweep(run);
  } else if (name == "pmc-solve") {
    run_pmc_solve(run);
  } else if (name == "drift-demo") {
    run_drift_demo(run);
  } else if (name == "conformal-example") {
    run_conformal_example(run);
  } else if (name == "hypothesis-report") {
    run_hypothesis_report(run);
  } else {
    throw ConfigError("experiment: unknown experiment " + name);
  }
  const auto t1 = std::chrono::steady_clock::now();
  run.finish(std::chrono::duration<double>(t1 - t0).count());
  return run.manifest_;
}

}  // namespace pmclab
