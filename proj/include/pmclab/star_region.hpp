#pragma once

#include "pmclab/sphere_grid.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmclab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compact region given by a center and a positive radial graph over a
// sphere grid. The field stores log-radii, so radii stay positive under
// any perturbation of the degrees of freedom.
class StarRegion {
 public:
  StarRegion(std::shared_ptr<const SphereGrid> grid, Eigen::Vector3d center,
             Eigen::ArrayXd log_radius);

  static StarRegion ball(std::shared_ptr<const SphereGrid> grid, double radius,
                         const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

  const SphereGrid& grid() const { return *grid_; }
  const std::shared_ptr<const SphereGrid>& grid_ptr() const { return grid_; }
  const Eigen::Vector3d& center() const { return center_; }
  const Eigen::ArrayXd& log_radius() const { return log_radius_; }
  Eigen::ArrayXd radius() const { return log_radius_.exp(); }

  StarRegion with_log_radius(Eigen::ArrayXd log_radius) const {
    return StarRegion(grid_, center_, std::move(log_radius));
  }
  StarRegion with_center(const Eigen::Vector3d& center) const {
    return StarRegion(grid_, center, log_radius_);
  }

  Eigen::Vector3d boundary_point(int node) const {
    return center_ + std::exp(log_radius_[node]) *
                         grid_->directions().row(node).transpose();
  }

  double max_radius() const { return std::exp(log_radius_.maxCoeff()); }
  // ||center|| + max radius; finite by construction.
  double support_radius() const { return center_.norm() + max_radius(); }

  void save(std::ostream& os) const;
  void save_file(const std::string& path) const;
  static StarRegion load(std::istream& is,
                         std::shared_ptr<const SphereGrid> grid = nullptr);
  static StarRegion load_file(const std::string& path,
                              std::shared_ptr<const SphereGrid> grid = nullptr);

 private:
  std::shared_ptr<const SphereGrid> grid_;
  Eigen::Vector3d center_;
  Eigen::ArrayXd log_radius_;
};

// Discrete mountain pass path: ordered regions on one grid with strictly
// increasing parameter values, t_0 = 0 and t_m = 1.
struct RegionPath {
  std::vector<StarRegion> nodes;
  std::vector<double> t;

  void validate(double proxy_radius) const;
};

// Radius of the near-empty proxy region standing in for the empty set.
inline constexpr double kEmptyProxyRadius = 1e-3;

}  // namespace pmclab
