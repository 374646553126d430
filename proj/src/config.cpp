#include "pmclab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pmclab {

namespace {

struct KeySpec {
  enum Kind { String, Enum, Double, Int, Bool, List, Vector3, Seed } kind;
  double lo = 0.0, hi = 0.0;
  bool lo_open = false;
  std::set<std::string> options = {};
};

const std::map<std::string, KeySpec>& schema() {
  static const std::map<std::string, KeySpec> s = {
      {"experiment",
       {KeySpec::Enum, 0, 0, false,
        {"width-sweep", "pmc-solve", "drift-demo", "conformal-example",
         "hypothesis-report"}}},
      {"seed", {KeySpec::Seed}},
      {"out_dir", {KeySpec::String}},
      {"jobs", {KeySpec::Int, 1, 64}},
      {"dimension", {KeySpec::Int, 2, 2}},
      {"grid.polar", {KeySpec::Int, 8, 256}},
      {"grid.azimuth", {KeySpec::Int, 9, 511}},
      {"prescription.family",
       {KeySpec::Enum, 0, 0, false,
        {"constant", "gaussian", "radial-drift", "slab", "linear-growth"}}},
      {"prescription.c", {KeySpec::Double, 0, 100, true}},
      {"prescription.amplitude", {KeySpec::Double, -1, 100, true}},
      {"prescription.scale", {KeySpec::Double, 0, 100, true}},
      {"prescription.axis", {KeySpec::Vector3}},
      {"prescription.offset", {KeySpec::Double, -100, 100}},
      {"path.nodes", {KeySpec::Int, 2, 100000}},
      {"path.radius", {KeySpec::Double, 0, 1000, true}},
      {"path.center", {KeySpec::Vector3}},
      {"relax.max_sweeps", {KeySpec::Int, 0, 100000}},
      {"relax.step", {KeySpec::Double, 0, 10, true}},
      {"relax.gtol", {KeySpec::Double, 0, 1, true}},
      {"relax.energy_tol", {KeySpec::Double, 0, 1, true}},
      {"relax.stall_sweeps", {KeySpec::Int, 1, 1000}},
      {"width.radii", {KeySpec::List, 0, 1000, true}},
      {"width.perturbations", {KeySpec::Int, 0, 100}},
      {"width.perturbation_amplitude", {KeySpec::Double, 0, 1}},
      {"sweep.R", {KeySpec::List, 1, 1000}},
      {"sweep.slope_tol", {KeySpec::Double, 0, 1, true}},
      {"sweep.monotone_slack", {KeySpec::Double, 0, 1}},
      {"nice.C_over_R", {KeySpec::Double, 0, 1000, true}},
      {"nice.eta", {KeySpec::Double, 0, 100, true}},
      {"nice.theta", {KeySpec::Double, 0, 100, true}},
      {"solve.R", {KeySpec::Double, 1, 1000}},
      {"saddle.max_iterations", {KeySpec::Int, 0, 1000000}},
      {"saddle.grad_tol", {KeySpec::Double, 0, 1, true}},
      {"saddle.residual_tol", {KeySpec::Double, 0, 1, true}},
      {"saddle.zero_threshold", {KeySpec::Double, 0, 1, true}},
      {"saddle.hessian", {KeySpec::Bool}},
      {"drift.start_offset", {KeySpec::Double, 0, 100}},
      {"drift.expect",
       {KeySpec::Enum, 0, 0, false, {"none", "drifting", "confined", "neutral"}}},
      {"conformal.profile",
       {KeySpec::Enum, 0, 0, false, {"inverse-sqrt", "exact-inverse-r"}}},
      {"conformal.t", {KeySpec::List, 0, 100}},
      {"conformal.R", {KeySpec::Double, 1, 1000}},
      {"hypotheses.rho", {KeySpec::Double, 0, 1000, true}},
      {"hypotheses.sigma", {KeySpec::Double, 0, 1, true}},
      {"hypotheses.r_max", {KeySpec::Double, 0, 10000, true}},
      {"hypotheses.tol", {KeySpec::Double, 0, 1, true}},
      {"hypotheses.radii", {KeySpec::List, 0, 1000000, true}},
      {"hypotheses.width", {KeySpec::Double, -1e9, 1e9}},
  };
  return s;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> r = {"experiment", "seed"};
  return r;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double* out) {
  try {
    size_t pos = 0;
    *out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(*out);
  } catch (...) {
    return false;
  }
}

bool in_range(const KeySpec& spec, double v) {
  if (spec.lo_open ? !(v > spec.lo) : !(v >= spec.lo)) return false;
  return v <= spec.hi;
}

void check_value(const std::string& key, const KeySpec& spec,
                 const std::string& value, std::vector<std::string>* problems) {
  auto bad = [&](const std::string& why) {
    problems->push_back(key + ": " + why + " (got '" + value + "')");
  };
  switch (spec.kind) {
    case KeySpec::String:
      if (value.empty()) bad("must not be empty");
      break;
    case KeySpec::Enum:
      if (!spec.options.count(value)) {
        std::string opts;
        for (const auto& o : spec.options) opts += (opts.empty() ? "" : "|") + o;
        bad("must be one of " + opts);
      }
      break;
    case KeySpec::Seed: {
      try {
        size_t pos = 0;
        (void)std::stoull(value, &pos);
        if (pos != value.size()) bad("must be an unsigned integer");
      } catch (...) {
        bad("must be an unsigned integer");
      }
      break;
    }
    case KeySpec::Int: {
      double v = 0;
      if (!parse_double(value, &v) || v != std::floor(v)) {
        bad("must be an integer");
      } else if (!in_range(spec, v)) {
        bad("out of range [" + std::to_string(static_cast<long long>(spec.lo)) +
            ", " + std::to_string(static_cast<long long>(spec.hi)) + "]");
      }
      break;
    }
    case KeySpec::Double: {
      double v = 0;
      if (!parse_double(value, &v)) {
        bad("must be a number");
      } else if (!in_range(spec, v)) {
        bad("out of range");
      }
      break;
    }
    case KeySpec::Bool:
      if (value != "true" && value != "false") bad("must be true or false");
      break;
    case KeySpec::List: {
      std::stringstream ss(value);
      std::string item;
      int count = 0;
      while (std::getline(ss, item, ',')) {
        double v = 0;
        if (!parse_double(trim(item), &v) || !in_range(spec, v)) {
          bad("list entries must be numbers in range");
          return;
        }
        ++count;
      }
      if (count == 0) bad("must be a non-empty comma-separated list");
      break;
    }
    case KeySpec::Vector3: {
      std::stringstream ss(value);
      std::string item;
      int count = 0;
      while (std::getline(ss, item, ',')) {
        double v = 0;
        if (!parse_double(trim(item), &v)) {
          bad("components must be numbers");
          return;
        }
        ++count;
      }
      if (count != 3) bad("must have exactly 3 components");
      break;
    }
  }
}

std::map<std::string, std::string> parse_pairs(const std::string& text,
                                               std::vector<std::string>* problems) {
  std::map<std::string, std::string> values;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      problems->push_back("line " + std::to_string(lineno) +
                          ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (values.count(key)) {
      problems->push_back(key + ": duplicate key");
      continue;
    }
    values[key] = value;
  }
  return values;
}

}  // namespace

std::vector<std::string> ExperimentConfig::check(
    const std::map<std::string, std::string>& values) {
  std::vector<std::string> problems;
  for (const auto& [key, value] : values) {
    auto it = schema().find(key);
    if (it == schema().end()) {
      problems.push_back(key + ": unknown key");
      continue;
    }
    check_value(key, it->second, value, &problems);
  }
  for (const auto& key : required_keys()) {
    if (!values.count(key)) problems.push_back(key + ": required key missing");
  }
  if (auto it = values.find("grid.azimuth"); it != values.end()) {
    double v = 0;
    if (parse_double(it->second, &v) && static_cast<int>(v) % 2 == 0) {
      problems.push_back("grid.azimuth: must be odd (even counts alias the "
                         "azimuthal Nyquist mode)");
    }
  }
  return problems;
}

std::vector<std::string> ExperimentConfig::validate_text(const std::string& text) {
  std::vector<std::string> problems;
  auto values = parse_pairs(text, &problems);
  auto more = check(values);
  problems.insert(problems.end(), more.begin(), more.end());
  return problems;
}

std::vector<std::string> ExperimentConfig::validate_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) return {"cannot open config file: " + path};
  std::stringstream buf;
  buf << is.rdbuf();
  return validate_text(buf.str());
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  std::vector<std::string> problems;
  auto values = parse_pairs(text, &problems);
  auto more = check(values);
  problems.insert(problems.end(), more.begin(), more.end());
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  ExperimentConfig cfg;
  cfg.values_ = std::move(values);
  cfg.experiment_ = cfg.values_.at("experiment");
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_text(buf.str());
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key + ": missing");
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  return std::stod(get_string(key));
}

int ExperimentConfig::get_int(const std::string& key) const {
  return std::stoi(get_string(key));
}

bool ExperimentConfig::get_bool(const std::string& key) const {
  return get_string(key) == "true";
}

uint64_t ExperimentConfig::get_seed() const {
  return std::stoull(get_string("seed"));
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
  std::stringstream ss(get_string(key));
  std::string item;
  std::vector<double> out;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(trim(item)));
  return out;
}

Eigen::Vector3d ExperimentConfig::get_vector(const std::string& key) const {
  auto list = get_list(key);
  if (list.size() != 3) throw ConfigError(key + ": expected 3 components");
  return Eigen::Vector3d(list[0], list[1], list[2]);
}

void ExperimentConfig::override_value(const std::string& key,
                                      const std::string& value) {
  auto it = schema().find(key);
  if (it == schema().end()) throw ConfigError(key + ": unknown key");
  std::vector<std::string> problems;
  check_value(key, it->second, value, &problems);
  if (!problems.empty()) throw ConfigError(problems.front());
  values_[key] = value;
  if (key == "experiment") experiment_ = value;
}

}  // namespace pmclab
