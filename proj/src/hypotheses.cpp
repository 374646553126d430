#include "pmclab/hypotheses.hpp"

#include "pmclab/rng.hpp"
#include "pmclab/star_region.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pmclab {

namespace {

Eigen::Vector3d random_direction(SplitMix64& rng) {
  // Marsaglia rejection on the cube; deterministic across platforms.
  while (true) {
    Eigen::Vector3d v(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0,
                      2.0 * rng.uniform() - 1.0);
    const double n2 = v.squaredNorm();
    if (n2 > 1e-12 && n2 <= 1.0) return v / std::sqrt(n2);
  }
}

}  // namespace

HypothesisReport check_H1(const Prescription& p,
                          const std::vector<double>& radii, double tol,
                          int directions_per_sphere, uint64_t seed,
                          std::vector<DecayRow>* trace) {
  HypothesisReport rep;
  rep.hypothesis = "H1";
  rep.seed = seed;
  SplitMix64 rng(seed);
  const double c = p.asymptotic_constant();

  std::vector<DecayRow> rows;
  for (double r : radii) {
    DecayRow row{r, 0.0, 0.0};
    for (int i = 0; i < directions_per_sphere; ++i) {
      const Eigen::Vector3d x = r * random_direction(rng);
      row.value_deviation = std::max(row.value_deviation, std::abs(p.value(x) - c));
      row.gradient_norm = std::max(row.gradient_norm, p.gradient(x).norm());
      rep.samples += 1;
    }
    rows.push_back(row);
  }

  bool monotone = true;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].value_deviation > rows[i - 1].value_deviation + 1e-12 ||
        rows[i].gradient_norm > rows[i - 1].gradient_norm + 1e-12) {
      monotone = false;
    }
  }
  const double final_dev =
      std::max(rows.back().value_deviation, rows.back().gradient_norm);
  rep.pass = monotone && final_dev < tol;
  rep.margin = tol - final_dev;
  if (!monotone) rep.note = "deviation not monotonically decaying";
  if (trace) *trace = rows;
  return rep;
}

HypothesisReport check_H2(const Prescription& p, double rho, double sigma,
                          double r_max, int n_radii, int n_directions,
                          uint64_t seed) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw Error("check_H2: sigma must be in (0,1)");
  if (!(r_max > rho)) throw Error("check_H2: r_max must exceed rho");
  HypothesisReport rep;
  rep.hypothesis = "H2";
  rep.seed = seed;
  SplitMix64 rng(seed);

  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_radii; ++i) {
    const double r = rho + (r_max - rho) * i / std::max(1, n_radii - 1);
    for (int j = 0; j < n_directions; ++j) {
      const Eigen::Vector3d x = r * random_direction(rng);
      const double lhs = std::abs(p.gradient(x).dot(x));
      const double rhs = sigma * p.value(x);
      worst = std::max(worst, lhs - rhs);
      rep.samples += 1;
    }
  }
  rep.pass = worst < 0.0;
  rep.margin = -worst;
  return rep;
}

HypothesisReport report_H3() {
  HypothesisReport rep;
  rep.hypothesis = "H3";
  rep.evaluated = false;
  rep.pass = false;
  rep.note = "not evaluated (external reference)";
  return rep;
}

double spheres_at_infinity_level(double c) {
  const double n = 2.0;
  const double omega_n = 4.0 * std::numbers::pi;
  return omega_n * std::pow(n / c, n) / (n + 1.0);
}

HypothesisReport check_H4(double width_estimate, const Prescription& p) {
  HypothesisReport rep;
  rep.hypothesis = "H4";
  const double level = spheres_at_infinity_level(p.asymptotic_constant());
  rep.margin = level - width_estimate;
  rep.pass = rep.margin > 0.0;
  std::ostringstream os;
  os << "threshold A^c(B_{n/c}) = " << level;
  rep.note = os.str();
  return rep;
}

}  // namespace pmclab
