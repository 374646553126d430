#include "pmclab/geometry.hpp"
#include "pmclab/quadrature.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace pmclab;
using pmclab::testing::ellipsoid_region;
using pmclab::testing::random_region;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent oracle: surface of revolution and solid of revolution for an
// axisymmetric radial graph rho(u), u = cos(theta).
double axisymmetric_area(const std::function<double(double)>& rho,
                         const std::function<double(double)>& drho_du) {
  return 2.0 * kPi *
         integrate_adaptive(
             [&](double u) {
               const double r = rho(u);
               const double grad2 = (1.0 - u * u) * drho_du(u) * drho_du(u);
               return r * std::sqrt(r * r + grad2);
             },
             -1.0, 1.0);
}

double axisymmetric_volume(const std::function<double(double)>& rho) {
  return 2.0 * kPi *
         integrate_adaptive(
             [&](double u) { return std::pow(rho(u), 3) / 3.0; }, -1.0, 1.0);
}

}  // namespace

TEST_CASE("ball area and volume") {
  auto grid = SphereGrid::product(64, 127);
  StarRegion b1 = StarRegion::ball(grid, 1.0);
  CHECK(area(b1) == doctest::Approx(4.0 * kPi).epsilon(1e-10));
  CHECK(volume(b1) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));

  StarRegion b2 = StarRegion::ball(grid, 2.0);
  CHECK(area(b2) == doctest::Approx(16.0 * kPi).epsilon(1e-10));
  // Discrete homogeneity: exact scaling of the volume formula.
  CHECK(volume(b2) == doctest::Approx(8.0 * volume(b1)).epsilon(1e-14));
}

TEST_CASE("ellipsoid against the axisymmetric oracle") {
  const double c_axis = 2.0;
  const double k2 = 1.0 - 1.0 / (c_axis * c_axis);
  auto rho = [&](double u) { return 1.0 / std::sqrt(1.0 - k2 * u * u); };
  auto drho = [&](double u) {
    return k2 * u * std::pow(1.0 - k2 * u * u, -1.5);
  };
  const double oracle_area = axisymmetric_area(rho, drho);
  const double oracle_volume = axisymmetric_volume(rho);

  // Cross-check the oracle itself against the prolate spheroid closed form.
  const double e = std::sqrt(1.0 - 1.0 / (c_axis * c_axis));
  const double closed_form =
      2.0 * kPi * (1.0 + c_axis / e * std::asin(e));
  CHECK(oracle_area == doctest::Approx(closed_form).epsilon(1e-12));
  CHECK(oracle_volume == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-12));

  auto grid = SphereGrid::product(64, 127);
  StarRegion ell = ellipsoid_region(grid, c_axis);
  CHECK(area(ell) == doctest::Approx(oracle_area).epsilon(1e-8));
  CHECK(volume(ell) == doctest::Approx(oracle_volume).epsilon(1e-10));
}

TEST_CASE("grid refinement converges on the ellipsoid") {
  const double c_axis = 2.0;
  const double k2 = 1.0 - 1.0 / (c_axis * c_axis);
  auto rho = [&](double u) { return 1.0 / std::sqrt(1.0 - k2 * u * u); };
  auto drho = [&](double u) {
    return k2 * u * std::pow(1.0 - k2 * u * u, -1.5);
  };
  const double exact = axisymmetric_area(rho, drho);
  double prev_err = 1e9;
  for (int n : {8, 16, 32, 48}) {
    StarRegion ell = ellipsoid_region(SphereGrid::product(n, 2 * n - 1), c_axis);
    const double err = std::abs(area(ell) - exact);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-10);
}

TEST_CASE("interior integrals") {
  auto grid = SphereGrid::product(48, 95);
  StarRegion b1 = StarRegion::ball(grid, 1.0);
  CHECK(integrate_interior(b1, [](const Eigen::Vector3d&) { return 1.0; }) ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));

  StarRegion b3 = StarRegion::ball(grid, 3.0);
  CHECK(integrate_interior(b3, [](const Eigen::Vector3d&) { return 2.5; }) ==
        doctest::Approx(2.5 * volume(b3)).epsilon(1e-13));

  const double oracle = 4.0 * kPi *
                        integrate_adaptive(
                            [](double r) { return std::exp(-r * r) * r * r; },
                            0.0, 1.0);
  const double got = integrate_interior(
      b1, [](const Eigen::Vector3d& x) { return std::exp(-x.squaredNorm()); });
  CHECK(got == doctest::Approx(oracle).epsilon(1e-9));

  CHECK_THROWS_AS(integrate_interior(b1,
                                     [](const Eigen::Vector3d& x) {
                                       return 1.0 / x.norm() / 0.0 * 0.0;
                                     }),
                  Error);
}

TEST_CASE("boundary integrals") {
  auto grid = SphereGrid::product(48, 95);
  StarRegion b1 = StarRegion::ball(grid, 1.0);
  CHECK(integrate_boundary(b1, [](const Eigen::Vector3d&) { return 1.0; }) ==
        doctest::Approx(area(b1)).epsilon(1e-13));
  // x . nu = 1 on the unit sphere; the divergence theorem gives 3 Vol = 4 pi.
  CHECK(integrate_boundary(b1, [](const Eigen::Vector3d& x) {
          return x.squaredNorm();
        }) == doctest::Approx(4.0 * kPi).epsilon(1e-12));

  StarRegion b2 = StarRegion::ball(grid, 2.0);
  const double oracle = 16.0 * kPi * std::exp(-4.0);
  CHECK(integrate_boundary(b2, [](const Eigen::Vector3d& x) {
          return std::exp(-x.squaredNorm());
        }) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("flat distance") {
  auto grid = SphereGrid::product(32, 63);
  StarRegion b1 = StarRegion::ball(grid, 1.0);
  StarRegion b2 = StarRegion::ball(grid, 2.0);
  StarRegion bump = random_region(grid, 11);

  CHECK(flat_distance(bump, bump).value == 0.0);
  CHECK(flat_distance(b1, b2).value ==
        doctest::Approx(28.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(flat_distance(b1, b2).value ==
        doctest::Approx(flat_distance(b2, b1).value).epsilon(1e-14));

  // Triangle inequality on a same-center triple.
  StarRegion bump2 = random_region(grid, 12);
  const double ab = flat_distance(b1, bump).value;
  const double bc = flat_distance(bump, bump2).value;
  const double ac = flat_distance(b1, bump2).value;
  CHECK(ac <= ab + bc + 1e-12);

  // Offset unit balls: 0 sits on the boundary of the shifted ball, so the
  // resampling falls back to Monte Carlo; the lens closed form gives the
  // exact value 11 pi / 6.
  StarRegion shifted = StarRegion::ball(grid, 1.0, Eigen::Vector3d(1, 0, 0));
  FlatDistance fd = flat_distance(b1, shifted, 7u, 400000);
  CHECK(fd.method == FlatDistance::Method::MonteCarlo);
  REQUIRE(fd.standard_error.has_value());
  CHECK(std::abs(fd.value - 11.0 * kPi / 6.0) < 5.0 * *fd.standard_error);

  // A small offset keeps the shifted ball star-shaped about the origin and
  // the resampled path stays exact.
  StarRegion nudged = StarRegion::ball(grid, 1.0, Eigen::Vector3d(0.2, 0, 0));
  FlatDistance fd2 = flat_distance(b1, nudged);
  CHECK(fd2.method == FlatDistance::Method::Resampled);
  const double d = 0.2;
  const double lens = kPi * (4.0 + d) * (2.0 - d) * (2.0 - d) / 12.0;
  const double exact = 2.0 * (4.0 * kPi / 3.0 - lens);
  CHECK(fd2.value == doctest::Approx(exact).epsilon(2e-3));
}

TEST_CASE("clip to ball") {
  auto grid = SphereGrid::product(32, 63);
  const double R = 8.0;
  StarRegion big = StarRegion::ball(grid, R + 2.0);
  StarRegion clipped = clip_to_ball(big, R + 1.0);
  CHECK(flat_distance(clipped, StarRegion::ball(grid, R + 1.0)).value == 0.0);

  StarRegion inside = random_region(grid, 21, 1.0, 0.15);
  StarRegion same = clip_to_ball(inside, 5.0);
  CHECK((same.log_radius() - inside.log_radius()).abs().maxCoeff() == 0.0);

  StarRegion bumpy = random_region(grid, 22, 6.0, 0.3);
  StarRegion cut = clip_to_ball(bumpy, 6.0);
  CHECK(volume(cut) <= volume(bumpy));
  CHECK(cut.support_radius() <= 6.0 + 1e-12);
  // Idempotence.
  StarRegion cut2 = clip_to_ball(cut, 6.0);
  CHECK((cut2.log_radius() - cut.log_radius()).abs().maxCoeff() == 0.0);
}

TEST_CASE("scale and translate exactness") {
  auto grid = SphereGrid::product(32, 63);
  StarRegion bumpy = random_region(grid, 31, 1.0, 0.25);
  const double a0 = area(bumpy), v0 = volume(bumpy);

  StarRegion same = scale(bumpy, 1.0);
  CHECK(area(same) == a0);

  for (double s : {0.5, 2.0, 3.7}) {
    StarRegion scaled = scale(bumpy, s);
    CHECK(area(scaled) == doctest::Approx(s * s * a0).epsilon(1e-14));
    CHECK(volume(scaled) == doctest::Approx(s * s * s * v0).epsilon(1e-14));
  }

  StarRegion moved = translate(bumpy, Eigen::Vector3d(5, 0, 0));
  CHECK(area(moved) == a0);
  CHECK(volume(moved) == v0);
}

TEST_CASE("snapshot round trip is bit exact") {
  auto grid = SphereGrid::product(16, 31);
  StarRegion region =
      random_region(grid, 41, 1.3, 0.2, Eigen::Vector3d(0.1, -2.0 / 3.0, 1e-7));
  std::stringstream ss;
  region.save(ss);
  StarRegion back = StarRegion::load(ss, grid);
  CHECK((back.log_radius() == region.log_radius()).all());
  CHECK(back.center() == region.center());

  // Re-serialization is byte-identical.
  std::stringstream ss2, ss3;
  back.save(ss2);
  region.save(ss3);
  CHECK(ss2.str() == ss3.str());
}

TEST_CASE("resample about a new center") {
  auto grid = SphereGrid::product(32, 63);
  StarRegion ball = StarRegion::ball(grid, 2.0, Eigen::Vector3d(0.5, 0, 0));
  StarRegion origin_view = resample_about(ball, Eigen::Vector3d::Zero());
  // Per-ray exact answer: |t d - c| = 2 with c = (0.5, 0, 0).
  for (int k = 0; k < grid->size(); k += 97) {
    const Eigen::Vector3d d = grid->directions().row(k).transpose();
    const double b = d.x() * 0.5;
    const double exact = b + std::sqrt(b * b + 4.0 - 0.25);
    CHECK(std::exp(origin_view.log_radius()[k]) ==
          doctest::Approx(exact).epsilon(1e-6));
  }

  CHECK_THROWS_AS(resample_about(ball, Eigen::Vector3d(10, 0, 0)), Error);
}

TEST_CASE("region path validation") {
  auto grid = SphereGrid::product(16, 31);
  RegionPath path;
  path.nodes.push_back(StarRegion::ball(grid, kEmptyProxyRadius));
  path.nodes.push_back(StarRegion::ball(grid, 2.0));
  path.t = {0.0, 1.0};
  CHECK_NOTHROW(path.validate(kEmptyProxyRadius));

  RegionPath bad = path;
  bad.nodes.front() = StarRegion::ball(grid, 1.0);
  CHECK_THROWS_AS(bad.validate(kEmptyProxyRadius), Error);
}
