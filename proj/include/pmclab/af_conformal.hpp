#pragma once

#include "pmclab/metric.hpp"
#include "pmclab/string_method.hpp"

#include <vector>

namespace pmclab {

// d/dt at t = 0 of Area_{g_t}(dB_1) - 2 Vol_{g_t}(B_1) for g_t = (1+tv)^4 g_euc:
// 16 pi v(1) - 48 pi int_0^1 v(r) r^2 dr.
double dt_energy_at_zero(const ConformalFactor& v);

// phi(r) = v(r) - (3 / r^3) int_0^r v(s) s^2 ds. This is the paper's
// auxiliary average divided by 4 pi. Requires r > 0.
double phi(const ConformalFactor& v, double r);

// Two independent routes to the same quantity (both equal r^3 v'(r) for a
// radial profile): the ODE combination r^3 phi' + 3 r^2 phi, and
// r * int_0^r (Lap v) s^2 ds computed from the Laplacian evaluator.
double phi_ode_lhs(const ConformalFactor& v, double r);
double phi_ode_rhs(const ConformalFactor& v, double r);

// Coordinate-sphere diagnostics for the conformal metric. H and div(N)
// coincide for the sphere foliation (N has geodesic flow lines); both come
// from the radial derivative of the u^4-weighted area over the u^6-volume
// element.
double sphere_mean_curvature(const Metric& metric, double r);
double normal_divergence(const Metric& metric, double r);
double lapse(const Metric& metric, double r);

struct DecayFit {
  double K_mean_curvature = 0.0;  // sup of r |r H - 2| over the window
  double K_divergence = 0.0;
  double min_lapse = 0.0;
};

DecayFit decay_fit(const Metric& metric, double r_lo, double r_hi, int samples);

struct HypothesisHRow {
  double t = 0.0;
  double sphere_path_max = 0.0;
  double width = 0.0;
  double first_order_prediction = 0.0;  // 4 pi / 3 + t * dt_energy_at_zero
  double margin = 0.0;                  // 4 pi / 3 - width
  bool converged = false;
};

// Evaluates hypothesis (H) along a t grid: widths of A^2 under g_t with the
// truncated prescription 2 zeta_R, compared against the flat level 4 pi / 3.
std::vector<HypothesisHRow> hypothesis_H_check(const ConformalFactorPtr& v,
                                               const std::vector<double>& ts,
                                               double truncation_radius,
                                               const WidthConfig& config);

}  // namespace pmclab
