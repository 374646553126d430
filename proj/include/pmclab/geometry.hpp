#pragma once

#include "pmclab/star_region.hpp"

#include <functional>
#include <optional>
#include <string>

namespace pmclab {

using ScalarField = std::function<double(const Eigen::Vector3d&)>;

// Surface area of the radial graph: integral of rho * sqrt(rho^2 + |grad rho|^2)
// over S^2 with the grid weights.
double area(const StarRegion& region);

// Enclosed volume: integral of rho^3 / 3.
double volume(const StarRegion& region);

// Interior integral by a fixed 16-point Gauss rule along every ray.
// Throws Error naming the point if f evaluates non-finite.
double integrate_interior(const StarRegion& region, const ScalarField& f);

// Boundary integral with the star-shaped area element.
double integrate_boundary(const StarRegion& region, const ScalarField& f);

// Volume barycenter, from interior integrals of the coordinate functions.
Eigen::Vector3d barycenter(const StarRegion& region);

struct FlatDistance {
  double value = 0.0;
  // Monte Carlo standard error when the fallback path was used.
  std::optional<double> standard_error;
  enum class Method { SharedCenter, Resampled, MonteCarlo } method =
      Method::SharedCenter;
};

// Volume of the symmetric difference. Exact radial formula when centers
// match; otherwise resamples b about a's center, falling back to seeded
// Monte Carlo over the common bounding ball if b is not star-shaped there.
FlatDistance flat_distance(const StarRegion& a, const StarRegion& b,
                           uint64_t mc_seed = 7u, int mc_samples = 2'000'000);

// min(rho, barrier_radius) on the radial field. Requires an origin-centered
// region (resampled about the origin first if not).
StarRegion clip_to_ball(const StarRegion& region, double barrier_radius);

// Homothety about the origin: center and radii scale by s. Exactly
// homogeneous at the discrete level.
StarRegion scale(const StarRegion& region, double s);

StarRegion translate(const StarRegion& region, const Eigen::Vector3d& shift);

// Re-express the region as a radial graph about a new center by per-ray
// root finding. Throws Error if some ray does not cross the boundary
// exactly once (region not star-shaped about the new center).
StarRegion resample_about(const StarRegion& region,
                          const Eigen::Vector3d& new_center);

bool contains(const StarRegion& region, const Eigen::Vector3d& point);

}  // namespace pmclab
