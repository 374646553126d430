#include "pmclab/geometry.hpp"

#include "pmclab/quadrature.hpp"
#include "pmclab/rng.hpp"

#include <cmath>
#include <sstream>

namespace pmclab {

namespace {

const QuadratureRule& ray_rule() {
  static const QuadratureRule rule = gauss_legendre_01(16);
  return rule;
}

Eigen::ArrayXd gradient_square(const StarRegion& region,
                               const Eigen::ArrayXd& rho) {
  const SphereGrid& g = region.grid();
  Eigen::ArrayXd dtheta = g.apply_dtheta(rho);
  Eigen::ArrayXd dphi = g.apply_dphi(rho);
  return dtheta.square() + g.beta() * dphi.square();
}

[[noreturn]] void throw_nonfinite(const Eigen::Vector3d& x) {
  std::ostringstream os;
  os << "integrand non-finite at (" << x.x() << ", " << x.y() << ", " << x.z()
     << ")";
  throw Error(os.str());
}

}  // namespace

double area(const StarRegion& region) {
  Eigen::ArrayXd rho = region.radius();
  Eigen::ArrayXd g2 = gradient_square(region, rho);
  return region.grid().integrate(rho * (rho.square() + g2).sqrt());
}

double volume(const StarRegion& region) {
  Eigen::ArrayXd rho = region.radius();
  return region.grid().integrate(rho.cube()) / 3.0;
}

double integrate_interior(const StarRegion& region, const ScalarField& f) {
  const SphereGrid& g = region.grid();
  const QuadratureRule& rule = ray_rule();
  Eigen::ArrayXd rho = region.radius();
  Eigen::ArrayXd ray(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const Eigen::Vector3d d = g.directions().row(k).transpose();
    double acc = 0.0;
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = rule.nodes[q];
      const Eigen::Vector3d x = region.center() + (rho[k] * s) * d;
      const double v = f(x);
      if (!std::isfinite(v)) throw_nonfinite(x);
      acc += rule.weights[q] * s * s * v;
    }
    ray[k] = acc * rho[k] * rho[k] * rho[k];
  }
  return g.integrate(ray);
}

double integrate_boundary(const StarRegion& region, const ScalarField& f) {
  const SphereGrid& g = region.grid();
  Eigen::ArrayXd rho = region.radius();
  Eigen::ArrayXd g2 = gradient_square(region, rho);
  Eigen::ArrayXd vals(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const Eigen::Vector3d x = region.boundary_point(k);
    const double v = f(x);
    if (!std::isfinite(v)) throw_nonfinite(x);
    vals[k] = v;
  }
  return g.integrate(vals * rho * (rho.square() + g2).sqrt());
}

Eigen::Vector3d barycenter(const StarRegion& region) {
  const double vol = volume(region);
  Eigen::Vector3d first;
  for (int c = 0; c < 3; ++c) {
    first[c] = integrate_interior(
        region, [c](const Eigen::Vector3d& x) { return x[c]; });
  }
  return first / vol;
}

bool contains(const StarRegion& region, const Eigen::Vector3d& point) {
  const Eigen::Vector3d rel = point - region.center();
  const double r = rel.norm();
  if (r == 0.0) return true;
  const double rho =
      std::exp(region.grid().interpolate(region.log_radius(), rel / r));
  return r <= rho;
}

StarRegion resample_about(const StarRegion& region,
                          const Eigen::Vector3d& new_center) {
  if ((new_center - region.center()).norm() == 0.0) return region;
  if (!contains(region, new_center)) {
    throw Error("resample_about: new center lies outside the region");
  }
  const SphereGrid& g = region.grid();
  const Eigen::ArrayXd& field = region.log_radius();
  const Eigen::Vector3d off = new_center - region.center();

  // Signed distance to the boundary along the ray new_center + t*dir,
  // measured in the original center's radial coordinates.
  auto excess = [&](const Eigen::Vector3d& dir, double t) {
    const Eigen::Vector3d rel = off + t * dir;
    const double r = rel.norm();
    if (r == 0.0) return -std::exp(g.interpolate(field, dir));
    return r - std::exp(g.interpolate(field, rel / r));
  };

  Eigen::ArrayXd out(g.size());
  const double t_max = 2.0 * (off.norm() + region.max_radius());
  for (int k = 0; k < g.size(); ++k) {
    const Eigen::Vector3d d = g.directions().row(k).transpose();
    double lo = 0.0, hi = t_max;
    if (excess(d, lo) >= 0.0 || excess(d, hi) <= 0.0) {
      throw Error("resample_about: ray does not bracket the boundary");
    }
    // Reject rays that cross the boundary more than once: scan for a
    // re-entry after the first exit.
    bool outside = false;
    const int scan = 64;
    double first_cross_lo = 0.0, first_cross_hi = hi;
    for (int s = 1; s <= scan; ++s) {
      const double t = t_max * s / scan;
      const bool out_here = excess(d, t) > 0.0;
      if (out_here && !outside) {
        outside = true;
        first_cross_lo = t_max * (s - 1) / scan;
        first_cross_hi = t;
      } else if (!out_here && outside) {
        throw Error("resample_about: ray meets the boundary more than once");
      }
    }
    lo = first_cross_lo;
    hi = first_cross_hi;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(d, mid) > 0.0 ? hi : lo) = mid;
    }
    out[k] = std::log(0.5 * (lo + hi));
  }
  return StarRegion(region.grid_ptr(), new_center, std::move(out));
}

FlatDistance flat_distance(const StarRegion& a, const StarRegion& b,
                           uint64_t mc_seed, int mc_samples) {
  FlatDistance result;
  if (&a.grid() != &b.grid()) throw Error("flat_distance: grids differ");

  auto same_center_value = [](const StarRegion& x, const StarRegion& y) {
    Eigen::ArrayXd ra = x.radius().cube();
    Eigen::ArrayXd rb = y.radius().cube();
    return x.grid().integrate((ra - rb).abs()) / 3.0;
  };

  if ((a.center() - b.center()).norm() == 0.0) {
    result.value = same_center_value(a, b);
    result.method = FlatDistance::Method::SharedCenter;
    return result;
  }

  try {
    StarRegion rb = resample_about(b, a.center());
    result.value = same_center_value(a, rb);
    result.method = FlatDistance::Method::Resampled;
    return result;
  } catch (const Error&) {
    // fall through to Monte Carlo
  }

  const Eigen::Vector3d mid = 0.5 * (a.center() + b.center());
  const double radius = std::max((a.center() - mid).norm() + a.max_radius(),
                                 (b.center() - mid).norm() + b.max_radius());
  const double box_volume = 4.0 / 3.0 * std::numbers::pi * std::pow(radius, 3);
  SplitMix64 rng(mc_seed);
  int hits = 0;
  for (int s = 0; s < mc_samples; ++s) {
    Eigen::Vector3d p;
    do {
      p = Eigen::Vector3d(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0,
                          2.0 * rng.uniform() - 1.0);
    } while (p.squaredNorm() > 1.0);
    p = mid + radius * p;
    if (contains(a, p) != contains(b, p)) ++hits;
  }
  const double p_hat = static_cast<double>(hits) / mc_samples;
  result.value = box_volume * p_hat;
  result.standard_error =
      box_volume * std::sqrt(p_hat * (1.0 - p_hat) / mc_samples);
  result.method = FlatDistance::Method::MonteCarlo;
  return result;
}

StarRegion clip_to_ball(const StarRegion& region, double barrier_radius) {
  if (!(barrier_radius > 0.0)) throw Error("clip_to_ball: radius must be positive");
  const StarRegion* src = &region;
  std::optional<StarRegion> recentred;
  if (region.center().norm() != 0.0) {
    recentred = resample_about(region, Eigen::Vector3d::Zero());
    src = &*recentred;
  }
  const double cap = std::log(barrier_radius);
  return src->with_log_radius(src->log_radius().min(cap));
}

StarRegion scale(const StarRegion& region, double s) {
  if (!(s > 0.0)) throw Error("scale: factor must be positive");
  return StarRegion(region.grid_ptr(), s * region.center(),
                    region.log_radius() + std::log(s));
}

StarRegion translate(const StarRegion& region, const Eigen::Vector3d& shift) {
  return region.with_center(region.center() + shift);
}

}  // namespace pmclab
