#include "pmclab/af_conformal.hpp"

#include "pmclab/quadrature.hpp"
#include "pmclab/star_region.hpp"

#include <cmath>
#include <numbers>

namespace pmclab {

namespace {
constexpr double kPi = std::numbers::pi;

double moment_integral(const ConformalFactor& v, double r) {
  return integrate_adaptive([&](double s) { return v.value(s) * s * s; }, 0.0,
                            r);
}
}  // namespace

double dt_energy_at_zero(const ConformalFactor& v) {
  return 16.0 * kPi * v.value(1.0) - 48.0 * kPi * moment_integral(v, 1.0);
}

double phi(const ConformalFactor& v, double r) {
  if (!(r > 0.0)) throw Error("phi: r must be positive");
  return v.value(r) - 3.0 * moment_integral(v, r) / (r * r * r);
}

double phi_ode_lhs(const ConformalFactor& v, double r) {
  if (!(r > 0.0)) throw Error("phi_ode_lhs: r must be positive");
  const double moment = moment_integral(v, r);
  const double phi_r = v.value(r) - 3.0 * moment / (r * r * r);
  const double dphi = v.deriv(r) + 9.0 * moment / (r * r * r * r) -
                      3.0 * v.value(r) / r;
  return r * r * r * dphi + 3.0 * r * r * phi_r;
}

double phi_ode_rhs(const ConformalFactor& v, double r) {
  if (!(r > 0.0)) throw Error("phi_ode_rhs: r must be positive");
  const double lap_moment = integrate_adaptive(
      [&](double s) { return v.laplacian(s) * s * s; }, 0.0, r);
  return r * lap_moment;
}

double sphere_mean_curvature(const Metric& metric, double r) {
  if (!(r > 0.0)) throw Error("sphere_mean_curvature: r must be positive");
  if (metric.is_flat()) return 2.0 / r;
  const double t = metric.parameter();
  const ConformalFactor& v = *metric.profile();
  const double u = 1.0 + t * v.value(r);
  const double up = t * v.deriv(r);
  return (2.0 / r + 4.0 * up / u) / (u * u);
}

double normal_divergence(const Metric& metric, double r) {
  // div_g N = (1 / (u^6 r^2)) d/dr (u^4 r^2); equal to H since the normal
  // flow lines are geodesics.
  return sphere_mean_curvature(metric, r);
}

double lapse(const Metric& metric, double r) {
  if (!(r > 0.0)) throw Error("lapse: r must be positive");
  if (metric.is_flat()) return 1.0;
  const double u = 1.0 + metric.parameter() * metric.profile()->value(r);
  return u * u;
}

DecayFit decay_fit(const Metric& metric, double r_lo, double r_hi, int samples) {
  if (!(r_hi > r_lo && r_lo > 0.0)) throw Error("decay_fit: bad window");
  DecayFit fit;
  fit.min_lapse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) /
                                                      (samples - 1));
    fit.K_mean_curvature = std::max(
        fit.K_mean_curvature, r * std::abs(r * sphere_mean_curvature(metric, r) - 2.0));
    fit.K_divergence = std::max(
        fit.K_divergence, r * std::abs(r * normal_divergence(metric, r) - 2.0));
    fit.min_lapse = std::min(fit.min_lapse, lapse(metric, r));
  }
  return fit;
}

std::vector<HypothesisHRow> hypothesis_H_check(const ConformalFactorPtr& v,
                                               const std::vector<double>& ts,
                                               double truncation_radius,
                                               const WidthConfig& config) {
  std::vector<HypothesisHRow> rows;
  const double flat_level = 4.0 * kPi / 3.0;
  const double slope = dt_energy_at_zero(*v);
  auto c2 = std::make_shared<const ConstantPrescription>(2.0);
  auto hr = std::make_shared<const TruncatedPrescription>(c2, truncation_radius);
  const double eps = epsilon_R(standard_cutoff(), truncation_radius);
  const double barrier = truncation_radius + 1.0 - 2.0 * eps;

  for (double t : ts) {
    HypothesisHRow row;
    row.t = t;
    row.first_order_prediction = flat_level + t * slope;
    const Metric metric = t == 0.0 ? Metric::flat() : Metric::conformal(v, t);

    RegionPath spath = sphere_path(config.grid, config.centers.front(),
                                   config.init_radii.front(), config.nodes,
                                   *hr, metric);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& node : spath.nodes) {
      best = std::max(best, energy(node, *hr, metric).total());
    }
    row.sphere_path_max = best;

    RelaxResult width = estimate_width(*hr, metric, barrier, config);
    row.width = width.width.value;
    row.converged = width.width.converged;
    row.margin = flat_level - row.width;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pmclab
