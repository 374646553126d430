#include "pmclab/hypotheses.hpp"
#include "pmclab/prescription.hpp"
#include "pmclab/rng.hpp"
#include "pmclab/star_region.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pmclab;

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::Vector3d fd_gradient(const Prescription& p, const Eigen::Vector3d& x,
                            double h = 1e-6) {
  Eigen::Vector3d g;
  for (int c = 0; c < 3; ++c) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[c] = h;
    g[c] = (p.value(x + e) - p.value(x - e)) / (2.0 * h);
  }
  return g;
}

Eigen::Matrix3d fd_hessian(const Prescription& p, const Eigen::Vector3d& x,
                           double h = 1e-5) {
  Eigen::Matrix3d m;
  for (int c = 0; c < 3; ++c) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[c] = h;
    m.col(c) = (p.gradient(x + e) - p.gradient(x - e)) / (2.0 * h);
  }
  return m;
}

}  // namespace

TEST_CASE("cutoff plateau, symmetry and monotonicity") {
  const Cutoff& z = standard_cutoff();
  CHECK(z.value(-1.0) == 1.0);
  CHECK(z.value(0.0) == 1.0);
  CHECK(z.value(1.0) == 0.0);
  CHECK(z.value(2.0) == 0.0);
  CHECK(z.value(0.5) == doctest::Approx(0.5).epsilon(1e-15));

  // Direct-formula oracle at r = 0.9.
  const double a = std::exp(-1.0 / 0.1);
  const double b = std::exp(-1.0 / 0.9);
  CHECK(z.value(0.9) == doctest::Approx(a / (a + b)).epsilon(1e-15));

  double prev = 1.0;
  for (int i = 1; i <= 200; ++i) {
    const double v = z.value(static_cast<double>(i) / 200.0);
    CHECK(v <= prev + 1e-15);
    CHECK(z.deriv(static_cast<double>(i) / 200.0) <= 0.0);
    prev = v;
  }
}

TEST_CASE("cutoff derivatives match finite differences") {
  const Cutoff& z = standard_cutoff();
  for (double r : {0.1, 0.25, 0.5, 0.7, 0.9}) {
    const double h = 1e-6;
    const double fd1 = (z.value(r + h) - z.value(r - h)) / (2.0 * h);
    CHECK(z.deriv(r) == doctest::Approx(fd1).epsilon(1e-7));
    const double fd2 = (z.deriv(r + h) - z.deriv(r - h)) / (2.0 * h);
    CHECK(z.second_deriv(r) == doctest::Approx(fd2).epsilon(1e-6));
  }
}

TEST_CASE("prescription gradients and hessians vs finite differences") {
  auto gaussian = GaussianBumpPrescription(2.0, 0.5, 2.0);
  auto drift = GaussianBumpPrescription(2.0, -0.5, 2.0);
  auto slab = SlabPrescription(Eigen::Vector3d(1, 0, 0), 0.0);
  auto base = std::make_shared<const GaussianBumpPrescription>(2.0, 0.5, 2.0);
  auto truncated = TruncatedPrescription(base, 3.0);

  SplitMix64 rng(5);
  std::vector<const Prescription*> all = {&gaussian, &drift, &slab, &truncated};
  for (const Prescription* p : all) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Vector3d x(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0),
                        rng.uniform(-4.0, 4.0));
      if (x.norm() < 0.3) continue;
      const Eigen::Vector3d g = p->gradient(x);
      const Eigen::Vector3d fd = fd_gradient(*p, x);
      CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
      const Eigen::Matrix3d h = p->hessian(x);
      const Eigen::Matrix3d fdh = fd_hessian(*p, x);
      CHECK((h - fdh).norm() <= 1e-5 * std::max(1.0, fdh.norm()));
    }
  }
}

TEST_CASE("truncation plateau and sandwich") {
  auto base = std::make_shared<const GaussianBumpPrescription>(2.0, 0.5, 2.0);
  TruncatedPrescription h5(base, 5.0);
  TruncatedPrescription h8(base, 8.0);

  SplitMix64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = rng.uniform(0.0, 12.0);
    Eigen::Vector3d x(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                      rng.uniform(-1.0, 1.0));
    if (x.norm() < 1e-6) continue;
    x *= r / x.norm();
    if (r <= 5.0) CHECK(h5.value(x) == base->value(x));
    if (r >= 6.0) CHECK(h5.value(x) == 0.0);
    // h_{R'} >= h_R pointwise for R' > R when h >= 0.
    CHECK(h8.value(x) >= h5.value(x) - 1e-15);
  }
}

TEST_CASE("epsilon_R bisection and guarantees") {
  const Cutoff& z = standard_cutoff();
  const double eps10 = epsilon_R(z, 10.0);
  CHECK(eps10 > 0.0);
  CHECK(eps10 < 0.5);

  // Root characterization: zeta(1 - 2 eps) = 1 / (4 (1 - 2 eps + 10)) at the
  // crossing; our eps sits just inside, so the gap is <= 0 at the left edge
  // and < 0 beyond.
  const double r_left = 1.0 - 2.0 * eps10;
  CHECK(z.value(r_left) <= 0.25 / (r_left + 10.0));
  for (int i = 0; i <= 10000; ++i) {
    const double r = r_left + (2.0 - r_left) * i / 10000.0;
    CHECK(z.value(r) < 0.25 / (r + 10.0));
  }

  // zeta(1) = 0 < 1/(4(1+R)) for every R.
  CHECK(z.value(1.0) == 0.0);

  // Monotonicity on an evaluated grid.
  const double eps20 = epsilon_R(z, 20.0);
  const double eps40 = epsilon_R(z, 40.0);
  CHECK(eps20 <= eps10);
  CHECK(eps40 <= eps20);

  // Barrier inequality of Definition "epsr": h_R < n / |x| outside the
  // barrier ball when sup h stays below the plateau bound.
  auto base = std::make_shared<const GaussianBumpPrescription>(2.0, 0.5, 2.0);
  TruncatedPrescription h10(base, 10.0);
  SplitMix64 rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    const double r = rng.uniform(11.0 - 2.0 * eps10, 12.5);
    Eigen::Vector3d x(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                      rng.uniform(-1.0, 1.0));
    if (x.norm() < 1e-6) continue;
    x *= r / x.norm();
    CHECK(h10.value(x) < 2.0 / r);
  }
}

TEST_CASE("H1 check") {
  ConstantPrescription c2(2.0);
  auto rep = check_H1(c2, {5, 10, 20}, 1e-6, 32, 7);
  CHECK(rep.pass);
  CHECK(rep.margin == doctest::Approx(1e-6));

  // Gaussian bump deviation matches the closed form 2 exp(-R^2) (c=2, A=1,
  // s=1): max over the sphere is attained everywhere (radial).
  GaussianBumpPrescription bump(2.0, 1.0, 1.0);
  std::vector<DecayRow> trace;
  auto rep2 = check_H1(bump, {2, 3, 4}, 1e-2, 16, 7, &trace);
  for (const auto& row : trace) {
    CHECK(row.value_deviation ==
          doctest::Approx(2.0 * std::exp(-row.radius * row.radius))
              .epsilon(1e-12));
  }
  CHECK(rep2.pass);

  // The slab is not asymptotic to a constant: deviations stay order one.
  SlabPrescription slab(Eigen::Vector3d(0, 0, 1), 0.0);
  auto rep3 = check_H1(slab, {5, 10, 20}, 1e-6, 64, 7);
  CHECK_FALSE(rep3.pass);
}

TEST_CASE("H2 check") {
  ConstantPrescription c2(2.0);
  CHECK(check_H2(c2, 1.0, 0.5, 30.0, 50, 16, 3).pass);

  // h = 2 (1 + e^{-r^2}): |grad h . x| = 4 r^2 e^{-r^2}, sigma h >= 1;
  // passes from rho = 3. 1-D oracle for the sampled maximum.
  GaussianBumpPrescription bump(2.0, 1.0, 1.0);
  auto rep = check_H2(bump, 3.0, 0.5, 30.0, 100, 32, 3);
  CHECK(rep.pass);
  double oracle = -1e9;
  for (int i = 0; i <= 100000; ++i) {
    const double r = 3.0 + (30.0 - 3.0) * i / 100000.0;
    const double lhs = 4.0 * r * r * std::exp(-r * r);
    const double rhs = 0.5 * 2.0 * (1.0 + std::exp(-r * r));
    oracle = std::max(oracle, lhs - rhs);
  }
  CHECK(rep.margin >= -oracle);

  // Linear growth fails for every sigma < 1 at large radii; realized by the
  // gaussian family with amplitude far below and the slab? Use the
  // radially increasing counterexample with the gradient dominating:
  // h = 2 + |x| has |grad h . x| / h = r / (2 + r) -> 1.
  class Linear final : public Prescription {
   public:
    double value(const Eigen::Vector3d& x) const override {
      return 2.0 + x.norm();
    }
    Eigen::Vector3d gradient(const Eigen::Vector3d& x) const override {
      return x / x.norm();
    }
    Eigen::Matrix3d hessian(const Eigen::Vector3d&) const override {
      return Eigen::Matrix3d::Zero();
    }
    double asymptotic_constant() const override { return 2.0; }
    double sup_bound() const override { return 1e9; }
    std::string name() const override { return "linear"; }
  } linear;
  CHECK_FALSE(check_H2(linear, 3.0, 0.5, 100.0, 100, 16, 3).pass);
}

TEST_CASE("H4 check and threshold") {
  ConstantPrescription c2(2.0);
  CHECK(spheres_at_infinity_level(2.0) ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-15));

  auto pass_rep = check_H4(4.0, c2);
  CHECK(pass_rep.pass);
  CHECK(pass_rep.margin == doctest::Approx(4.0 * kPi / 3.0 - 4.0).epsilon(1e-12));

  auto fail_rep = check_H4(4.0 * kPi / 3.0, c2);
  CHECK_FALSE(fail_rep.pass);  // not strict
}

TEST_CASE("H3 is reported, not evaluated") {
  auto rep = report_H3();
  CHECK_FALSE(rep.evaluated);
  CHECK(rep.note.find("not evaluated") != std::string::npos);
}

TEST_CASE("slab monotonicity along the normal") {
  SlabPrescription slab(Eigen::Vector3d(0, 1, 0), 0.25);
  SplitMix64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Vector3d x(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
                      rng.uniform(-3.0, 3.0));
    Eigen::Vector3d y = x;
    y.y() -= rng.uniform(0.0, 2.0);  // move against the normal
    CHECK(slab.value(x) <= slab.value(y) + 1e-15);
    CHECK(slab.value(x) >= 0.0);
    CHECK(slab.value(x) <= 2.0);
  }
}
