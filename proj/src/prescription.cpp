#include "pmclab/prescription.hpp"

#include "pmclab/star_region.hpp"

#include <cmath>
#include <sstream>

namespace pmclab {

ConstantPrescription::ConstantPrescription(double c) : c_(c) {
  if (!(c > 0.0)) throw Error("ConstantPrescription: c must be positive");
}

std::string ConstantPrescription::name() const {
  std::ostringstream os;
  os << "constant(c=" << c_ << ")";
  return os.str();
}

GaussianBumpPrescription::GaussianBumpPrescription(double c, double amplitude,
                                                   double scale)
    : c_(c), amplitude_(amplitude), scale_(scale) {
  if (!(c > 0.0)) throw Error("GaussianBumpPrescription: c must be positive");
  if (!(amplitude > -1.0)) {
    throw Error("GaussianBumpPrescription: amplitude must exceed -1");
  }
  if (!(scale > 0.0)) throw Error("GaussianBumpPrescription: scale must be positive");
}

double GaussianBumpPrescription::value(const Eigen::Vector3d& x) const {
  const double e = std::exp(-x.squaredNorm() / (scale_ * scale_));
  return c_ * (1.0 + amplitude_ * e);
}

Eigen::Vector3d GaussianBumpPrescription::gradient(const Eigen::Vector3d& x) const {
  const double s2 = scale_ * scale_;
  const double e = std::exp(-x.squaredNorm() / s2);
  return (-2.0 * c_ * amplitude_ * e / s2) * x;
}

Eigen::Matrix3d GaussianBumpPrescription::hessian(const Eigen::Vector3d& x) const {
  const double s2 = scale_ * scale_;
  const double e = std::exp(-x.squaredNorm() / s2);
  const double k = c_ * amplitude_ * e;
  return k * (4.0 / (s2 * s2) * (x * x.transpose()) -
              2.0 / s2 * Eigen::Matrix3d::Identity());
}

double GaussianBumpPrescription::sup_bound() const {
  return c_ * (1.0 + std::max(amplitude_, 0.0));
}

std::string GaussianBumpPrescription::name() const {
  std::ostringstream os;
  os << "gaussian(c=" << c_ << ",A=" << amplitude_ << ",s=" << scale_ << ")";
  return os.str();
}

SlabPrescription::SlabPrescription(const Eigen::Vector3d& normal, double offset)
    : normal_(normal.normalized()), offset_(offset) {
  if (normal.norm() == 0.0) throw Error("SlabPrescription: zero normal");
}

double SlabPrescription::value(const Eigen::Vector3d& x) const {
  return 2.0 * standard_cutoff().value(x.dot(normal_) + offset_);
}

Eigen::Vector3d SlabPrescription::gradient(const Eigen::Vector3d& x) const {
  return 2.0 * standard_cutoff().deriv(x.dot(normal_) + offset_) * normal_;
}

Eigen::Matrix3d SlabPrescription::hessian(const Eigen::Vector3d& x) const {
  return 2.0 * standard_cutoff().second_deriv(x.dot(normal_) + offset_) *
         (normal_ * normal_.transpose());
}

std::string SlabPrescription::name() const {
  std::ostringstream os;
  os << "slab(nu=[" << normal_.x() << "," << normal_.y() << "," << normal_.z()
     << "],tau=" << offset_ << ")";
  return os.str();
}

TruncatedPrescription::TruncatedPrescription(PrescriptionPtr base,
                                             double truncation_radius)
    : base_(std::move(base)), radius_(truncation_radius) {
  if (!base_) throw Error("TruncatedPrescription: null base");
  if (!(radius_ >= 1.0)) {
    throw Error("TruncatedPrescription: truncation radius must be >= 1");
  }
}

double TruncatedPrescription::value(const Eigen::Vector3d& x) const {
  const double r = x.norm();
  if (r <= radius_) return base_->value(x);
  const double z = standard_cutoff().value(r - radius_);
  return z == 0.0 ? 0.0 : z * base_->value(x);
}

Eigen::Vector3d TruncatedPrescription::gradient(const Eigen::Vector3d& x) const {
  const double r = x.norm();
  if (r <= radius_) return base_->gradient(x);
  const Cutoff& zeta = standard_cutoff();
  const double z = zeta.value(r - radius_);
  const double zp = zeta.deriv(r - radius_);
  if (z == 0.0 && zp == 0.0) return Eigen::Vector3d::Zero();
  const Eigen::Vector3d rad = x / r;
  return z * base_->gradient(x) + base_->value(x) * zp * rad;
}

Eigen::Matrix3d TruncatedPrescription::hessian(const Eigen::Vector3d& x) const {
  const double r = x.norm();
  if (r <= radius_) return base_->hessian(x);
  const Cutoff& zeta = standard_cutoff();
  const double z = zeta.value(r - radius_);
  const double zp = zeta.deriv(r - radius_);
  const double zpp = zeta.second_deriv(r - radius_);
  if (z == 0.0 && zp == 0.0 && zpp == 0.0) return Eigen::Matrix3d::Zero();
  const Eigen::Vector3d rad = x / r;
  const Eigen::Matrix3d rr = rad * rad.transpose();
  const Eigen::Vector3d gh = base_->gradient(x);
  const double h = base_->value(x);
  return z * base_->hessian(x) + zp * (rad * gh.transpose() + gh * rad.transpose()) +
         h * zpp * rr + h * zp * (Eigen::Matrix3d::Identity() - rr) / r;
}

std::string TruncatedPrescription::name() const {
  std::ostringstream os;
  os << "truncated(R=" << radius_ << "," << base_->name() << ")";
  return os.str();
}

double epsilon_R(const Cutoff& zeta, double R) {
  if (!(R > 0.0)) throw Error("epsilon_R: R must be positive");
  auto gap = [&](double r) { return zeta.value(r) - 0.25 / (r + R); };

  // Largest r in [0, 1] where zeta still dominates, by dense scan.
  const int n_scan = 20000;
  int last_above = -1;
  for (int i = 0; i <= n_scan; ++i) {
    const double r = static_cast<double>(i) / n_scan;
    if (gap(r) >= 0.0) last_above = i;
  }
  if (last_above < 0) {
    // zeta is below the barrier curve on all of [0, 1]: any eps < 1/2 works.
    return 0.5 * (1.0 - 1e-6);
  }
  if (last_above >= n_scan) throw Error("epsilon_R: R too small");

  double lo = static_cast<double>(last_above) / n_scan;
  double hi = static_cast<double>(last_above + 1) / n_scan;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) >= 0.0 ? lo : hi) = mid;
  }
  const double crossing = hi;
  double eps = 0.5 * (1.0 - crossing);
  eps *= 1.0 - 1e-9;  // keep the inequality strict at the left endpoint
  if (!(eps > 0.0 && eps < 0.5)) throw Error("epsilon_R: R too small");

  // Confirm on a dense sweep over [1 - 2 eps, 2].
  const int n_check = 10000;
  for (int i = 0; i <= n_check; ++i) {
    const double r = (1.0 - 2.0 * eps) + (2.0 - (1.0 - 2.0 * eps)) * i / n_check;
    if (!(gap(r) < 0.0)) throw Error("epsilon_R: verification sweep failed");
  }
  return eps;
}

}  // namespace pmclab
