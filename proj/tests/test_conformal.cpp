#include "pmclab/af_conformal.hpp"
#include "pmclab/functional.hpp"
#include "pmclab/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pmclab;

namespace {
constexpr double kPi = std::numbers::pi;

class ConstantProfile final : public ConformalFactor {
 public:
  explicit ConstantProfile(double k) : k_(k) {}
  double value(double) const override { return k_; }
  double deriv(double) const override { return 0.0; }
  double laplacian(double) const override { return 0.0; }
  std::string name() const override { return "constant"; }

 private:
  double k_;
};

}  // namespace

TEST_CASE("built-in profiles") {
  auto v = inverse_sqrt_profile();
  CHECK(v->value(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (double r : {0.3, 1.0, 2.5, 10.0}) {
    const double h = 1e-6;
    const double fd = (v->value(r + h) - v->value(r - h)) / (2.0 * h);
    CHECK(v->deriv(r) == doctest::Approx(fd).epsilon(1e-8));
    CHECK(v->laplacian(r) ==
          doctest::Approx(-3.0 * std::pow(1.0 + r * r, -2.5)).epsilon(1e-12));
    CHECK(r * v->value(r) <= 1.0);
  }
  CHECK(100.0 * v->value(100.0) == doctest::Approx(1.0).epsilon(1e-4));

  auto ve = exact_inverse_r_profile(2.0);
  CHECK(ve->value(4.0) == 0.25);                  // exactly 1/r outside
  CHECK(ve->deriv(4.0) == doctest::Approx(-1.0 / 16.0).epsilon(1e-15));
  CHECK(ve->laplacian(4.0) == 0.0);               // 1/r is harmonic
  CHECK(ve->value(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (double r : {0.2, 0.8, 1.5, 1.99}) {
    CHECK(ve->laplacian(r) < 0.0);                // negative on B_2
  }
  for (double r : {2.1, 2.5, 2.9}) {
    const double h = 1e-6;
    const double fd = (ve->value(r + h) - ve->value(r - h)) / (2.0 * h);
    CHECK(ve->deriv(r) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("dt energy at zero") {
  auto v = inverse_sqrt_profile();
  // Closed-form antiderivative: int_0^1 r^2 (1+r^2)^{-1/2} dr
  //   = (sqrt(2) - asinh 1) / 2.
  const double moment = (std::sqrt(2.0) - std::asinh(1.0)) / 2.0;
  CHECK(moment == doctest::Approx(0.2664200).epsilon(1e-6));
  const double exact = 16.0 * kPi * (1.0 / std::sqrt(2.0) - 3.0 * moment);
  const double got = dt_energy_at_zero(*v);
  CHECK(got == doctest::Approx(exact).epsilon(1e-12));
  CHECK(got == doctest::Approx(-4.6321).epsilon(1e-3 / 4.6321));

  ConstantProfile constant(0.7);
  CHECK(std::abs(dt_energy_at_zero(constant)) < 1e-12);

  // Finite differences of the metric energy of B_1.
  auto grid = SphereGrid::product(32, 63);
  ConstantPrescription c2(2.0);
  StarRegion b1 = StarRegion::ball(grid, 1.0);
  const double e0 = energy(b1, c2, Metric::flat()).total();
  const double t = 1e-5;
  const double fd = (energy(b1, c2, Metric::conformal(v, t)).total() - e0) / t;
  CHECK(fd == doctest::Approx(got).epsilon(1e-4));
}

TEST_CASE("phi and the ODE identity") {
  auto v = inverse_sqrt_profile();
  const double moment = (std::sqrt(2.0) - std::asinh(1.0)) / 2.0;
  CHECK(phi(*v, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0) - 3.0 * moment).epsilon(1e-12));
  CHECK(phi(*v, 1.0) == doctest::Approx(-0.0921533).epsilon(1e-6 / 0.09));

  ConstantProfile constant(1.3);
  CHECK(std::abs(phi(constant, 0.7)) < 1e-13);
  CHECK(std::abs(phi_ode_lhs(constant, 0.7)) < 1e-12);

  // Both routes agree (they equal r^3 v'(r)) and are strictly negative on
  // (0, 2].
  for (int i = 0; i <= 40; ++i) {
    const double r = 0.01 * std::pow(200.0, i / 40.0);
    const double lhs = phi_ode_lhs(*v, r);
    const double rhs = phi_ode_rhs(*v, r);
    CHECK(std::abs(lhs - rhs) <= 1e-8);
    CHECK(lhs == doctest::Approx(r * r * r * v->deriv(r)).epsilon(1e-8));
    CHECK(lhs < 0.0);
    CHECK(phi(*v, r) < 0.0);
  }
  CHECK_THROWS_AS(phi(*v, 0.0), Error);
}

TEST_CASE("metric energies") {
  auto grid = SphereGrid::product(32, 63);
  auto v = inverse_sqrt_profile();
  ConstantPrescription c2(2.0);
  StarRegion b1 = StarRegion::ball(grid, 1.0);

  // t = 0 equals flat bit-exactly.
  EnergyBreakdown flat = energy(b1, c2, Metric::flat());
  EnergyBreakdown zero = energy(b1, c2, Metric::conformal(v, 0.0));
  CHECK(flat.area == zero.area);
  CHECK(flat.prescription_term == zero.prescription_term);
  CHECK(flat.total() == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));

  // t = 0.1: both terms against 1-D radial oracles.
  const double t = 0.1;
  EnergyBreakdown e = energy(b1, c2, Metric::conformal(v, t));
  const double u1 = 1.0 + t * v->value(1.0);
  CHECK(e.area == doctest::Approx(4.0 * kPi * std::pow(u1, 4)).epsilon(1e-12));
  const double vol_oracle =
      8.0 * kPi * integrate_adaptive(
                      [&](double r) {
                        const double u = 1.0 + t * v->value(r);
                        return std::pow(u, 6) * r * r;
                      },
                      0.0, 1.0);
  CHECK(e.prescription_term == doctest::Approx(vol_oracle).epsilon(1e-8));

  // Strictly decreasing in t on a small grid, slope matching dt_energy.
  double prev = flat.total();
  for (double tt : {0.01, 0.02, 0.03, 0.04, 0.05}) {
    const double et = energy(b1, c2, Metric::conformal(v, tt)).total();
    CHECK(et < prev);
    prev = et;
  }
}

TEST_CASE("coordinate sphere diagnostics") {
  auto v = inverse_sqrt_profile();
  Metric flat = Metric::flat();
  for (double r : {0.5, 1.0, 7.0}) {
    CHECK(sphere_mean_curvature(flat, r) == 2.0 / r);
    CHECK(normal_divergence(flat, r) == 2.0 / r);
    CHECK(lapse(flat, r) == 1.0);
  }

  const double t = 0.2;
  Metric g = Metric::conformal(v, t);
  // Finite-difference cross-check: H = (dA_g/dr) / (lapse * A_g).
  auto area_g = [&](double r) {
    const double u = 1.0 + t * v->value(r);
    return 4.0 * kPi * r * r * std::pow(u, 4);
  };
  for (double r : {1.0, 3.0, 10.0}) {
    const double h = 1e-6 * r;
    const double fd = (area_g(r + h) - area_g(r - h)) / (2.0 * h);
    CHECK(sphere_mean_curvature(g, r) ==
          doctest::Approx(fd / (lapse(g, r) * area_g(r))).epsilon(1e-9));
  }
  // Lapse formula and bound.
  const double u10 = 1.0 + t * v->value(10.0);
  CHECK(lapse(g, 10.0) == doctest::Approx(u10 * u10).epsilon(1e-15));
  CHECK(lapse(g, 10.0) >= 3.0 / 5.0);

  // Decay window: r |r H - 2| and r |r div N - 2| stay bounded; the lapse
  // stays above 3/5 on the window.
  DecayFit fit = decay_fit(g, 10.0, 100.0, 64);
  CHECK(fit.K_mean_curvature > 0.0);
  CHECK(fit.K_mean_curvature < 20.0);
  CHECK(fit.K_divergence == fit.K_mean_curvature);
  CHECK(fit.min_lapse >= 3.0 / 5.0);
  for (double r : {10.0, 31.6, 100.0}) {
    CHECK(std::abs(r * sphere_mean_curvature(g, r) - 2.0) <=
          fit.K_mean_curvature / r + 1e-12);
  }
}

TEST_CASE("hypothesis H along a t grid") {
  auto v = inverse_sqrt_profile();
  WidthConfig wc;
  wc.grid = SphereGrid::product(16, 31);
  wc.init_radii = {2.0};
  wc.nodes = 61;
  wc.schedule.jobs = 2;

  auto rows = hypothesis_H_check(v, {0.0, 0.05}, 8.0, wc);
  REQUIRE(rows.size() == 2);

  const double level = 4.0 * kPi / 3.0;
  CHECK(rows[0].width == doctest::Approx(level).epsilon(5e-3 / level));
  CHECK(std::abs(rows[0].margin) < 5e-3);
  CHECK(rows[0].first_order_prediction == doctest::Approx(level).epsilon(1e-12));

  CHECK(rows[1].converged);
  CHECK(rows[1].margin > 0.15);
  CHECK(rows[1].width < level);
  // The sphere path is an upper bound for the width.
  CHECK(rows[1].width <= rows[1].sphere_path_max + 1e-12);
  // First-order prediction is accurate to O(t^2).
  CHECK(rows[1].width ==
        doctest::Approx(rows[1].first_order_prediction).epsilon(0.02));
}
