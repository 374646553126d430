#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>

namespace pmclab {

// Radial conformal profile v(r) with derivative and 3-D radial Laplacian
// v'' + 2 v'/r. Profiles behave like 1/r near infinity.
class ConformalFactor {
 public:
  virtual ~ConformalFactor() = default;
  virtual double value(double r) const = 0;
  virtual double deriv(double r) const = 0;
  virtual double laplacian(double r) const = 0;
  virtual std::string name() const = 0;
};

using ConformalFactorPtr = std::shared_ptr<const ConformalFactor>;

// v(r) = (1 + r^2)^{-1/2}: smooth at the origin, v ~ 1/r at infinity, and
// Laplacian -3 (1 + r^2)^{-5/2} < 0 everywhere.
ConformalFactorPtr inverse_sqrt_profile();

// v(r) that equals (1 + r^2)^{-1/2} on r <= r0 and exactly 1/r beyond
// r0 + 1, glued with the standard cutoff.
ConformalFactorPtr exact_inverse_r_profile(double r0 = 2.0);

// Metric used by the energy quadratures: flat, or conformal
// g_t = (1 + t v)^4 g_euc with surface weight (1+tv)^4 and volume weight
// (1+tv)^6. Weight evaluators include gradients for exact shape gradients.
class Metric {
 public:
  static Metric flat() { return Metric(); }
  static Metric conformal(ConformalFactorPtr profile, double t);

  bool is_flat() const { return profile_ == nullptr || t_ == 0.0; }
  double parameter() const { return t_; }
  const ConformalFactorPtr& profile() const { return profile_; }

  double surface_weight(const Eigen::Vector3d& x) const {
    if (is_flat()) return 1.0;
    const double u = 1.0 + t_ * profile_->value(x.norm());
    const double u2 = u * u;
    return u2 * u2;
  }
  Eigen::Vector3d surface_weight_gradient(const Eigen::Vector3d& x) const {
    if (is_flat()) return Eigen::Vector3d::Zero();
    const double r = x.norm();
    if (r == 0.0) return Eigen::Vector3d::Zero();
    const double u = 1.0 + t_ * profile_->value(r);
    return (4.0 * u * u * u * t_ * profile_->deriv(r) / r) * x;
  }
  double volume_weight(const Eigen::Vector3d& x) const {
    if (is_flat()) return 1.0;
    const double u = 1.0 + t_ * profile_->value(x.norm());
    const double u2 = u * u;
    return u2 * u2 * u2;
  }
  Eigen::Vector3d volume_weight_gradient(const Eigen::Vector3d& x) const {
    if (is_flat()) return Eigen::Vector3d::Zero();
    const double r = x.norm();
    if (r == 0.0) return Eigen::Vector3d::Zero();
    const double u = 1.0 + t_ * profile_->value(r);
    const double u2 = u * u;
    return (6.0 * u2 * u2 * u * t_ * profile_->deriv(r) / r) * x;
  }

  std::string name() const;

 private:
  Metric() = default;
  ConformalFactorPtr profile_;
  double t_ = 0.0;
};

}  // namespace pmclab
