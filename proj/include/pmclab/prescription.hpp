#pragma once

#include "pmclab/cutoff.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace pmclab {

// A prescribed mean curvature function h with enough derivatives for exact
// shape gradients and Hessians. Evaluators are pure and safe to share
// across threads.
class Prescription {
 public:
  virtual ~Prescription() = default;

  virtual double value(const Eigen::Vector3d& x) const = 0;
  virtual Eigen::Vector3d gradient(const Eigen::Vector3d& x) const = 0;
  virtual Eigen::Matrix3d hessian(const Eigen::Vector3d& x) const = 0;

  // The constant the function approaches at infinity (the plateau value
  // for the slab family, which is not asymptotically constant).
  virtual double asymptotic_constant() const = 0;
  virtual double sup_bound() const = 0;
  virtual std::string name() const = 0;
  virtual bool is_constant() const { return false; }
};

using PrescriptionPtr = std::shared_ptr<const Prescription>;

class ConstantPrescription final : public Prescription {
 public:
  explicit ConstantPrescription(double c);
  double value(const Eigen::Vector3d&) const override { return c_; }
  Eigen::Vector3d gradient(const Eigen::Vector3d&) const override {
    return Eigen::Vector3d::Zero();
  }
  Eigen::Matrix3d hessian(const Eigen::Vector3d&) const override {
    return Eigen::Matrix3d::Zero();
  }
  double asymptotic_constant() const override { return c_; }
  double sup_bound() const override { return c_; }
  std::string name() const override;
  bool is_constant() const override { return true; }

 private:
  double c_;
};

// h(x) = c (1 + A exp(-|x|^2 / s^2)). Positive A raises the prescription
// near the origin (the width-lowering family); negative A gives the
// radially increasing profile used by the drift demonstrations.
class GaussianBumpPrescription final : public Prescription {
 public:
  GaussianBumpPrescription(double c, double amplitude, double scale);
  double value(const Eigen::Vector3d& x) const override;
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const override;
  Eigen::Matrix3d hessian(const Eigen::Vector3d& x) const override;
  double asymptotic_constant() const override { return c_; }
  double sup_bound() const override;
  std::string name() const override;

  double amplitude() const { return amplitude_; }
  double scale() const { return scale_; }

 private:
  double c_;
  double amplitude_;
  double scale_;
};

// Blow-up limit of the truncations: h(x) = 2 zeta(x . nu + tau), constant 2
// on one side of a unit slab and 0 on the other.
class SlabPrescription final : public Prescription {
 public:
  SlabPrescription(const Eigen::Vector3d& normal, double offset);
  double value(const Eigen::Vector3d& x) const override;
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const override;
  Eigen::Matrix3d hessian(const Eigen::Vector3d& x) const override;
  double asymptotic_constant() const override { return 2.0; }
  double sup_bound() const override { return 2.0; }
  std::string name() const override;

  const Eigen::Vector3d& normal() const { return normal_; }
  double offset() const { return offset_; }

 private:
  Eigen::Vector3d normal_;
  double offset_;
};

// h_R = zeta(|x| - R) h: agrees with h on B_R, vanishes outside B_{R+1}.
class TruncatedPrescription final : public Prescription {
 public:
  TruncatedPrescription(PrescriptionPtr base, double truncation_radius);
  double value(const Eigen::Vector3d& x) const override;
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const override;
  Eigen::Matrix3d hessian(const Eigen::Vector3d& x) const override;
  double asymptotic_constant() const override {
    return base_->asymptotic_constant();
  }
  double sup_bound() const override { return base_->sup_bound(); }
  std::string name() const override;

  const Prescription& base() const { return *base_; }
  double truncation_radius() const { return radius_; }

 private:
  PrescriptionPtr base_;
  double radius_;
};

// Barrier margin of Definition "epsr": the largest safe eps in (0, 1/2)
// with zeta(r) < 1 / (4 (r + R)) for every r >= 1 - 2 eps, found by
// bisection on the crossing and confirmed by a dense sweep. Throws Error
// ("R too small") when no admissible eps exists.
double epsilon_R(const Cutoff& zeta, double R);

}  // namespace pmclab
