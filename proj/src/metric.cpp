#include "pmclab/metric.hpp"

#include "pmclab/cutoff.hpp"
#include "pmclab/star_region.hpp"

#include <cmath>
#include <sstream>

namespace pmclab {

namespace {

class InverseSqrtProfile final : public ConformalFactor {
 public:
  double value(double r) const override { return 1.0 / std::sqrt(1.0 + r * r); }
  double deriv(double r) const override {
    return -r * std::pow(1.0 + r * r, -1.5);
  }
  double laplacian(double r) const override {
    return -3.0 * std::pow(1.0 + r * r, -2.5);
  }
  std::string name() const override { return "inverse-sqrt"; }
};

// (r^2 + zeta(r - r0)^2)^{-1/2}: the inverse-sqrt profile inside B_{r0},
// exactly 1/r beyond r0 + 1.
class ExactInverseRProfile final : public ConformalFactor {
 public:
  explicit ExactInverseRProfile(double r0) : r0_(r0) {}

  double value(double r) const override {
    const double z = standard_cutoff().value(r - r0_);
    return 1.0 / std::sqrt(r * r + z * z);
  }
  double deriv(double r) const override {
    const Cutoff& zeta = standard_cutoff();
    const double z = zeta.value(r - r0_);
    const double zp = zeta.deriv(r - r0_);
    const double w = r * r + z * z;
    return -(r + z * zp) * std::pow(w, -1.5);
  }
  double laplacian(double r) const override {
    if (r <= r0_) return -3.0 * std::pow(1.0 + r * r, -2.5);
    const Cutoff& zeta = standard_cutoff();
    const double z = zeta.value(r - r0_);
    const double zp = zeta.deriv(r - r0_);
    const double zpp = zeta.second_deriv(r - r0_);
    const double w = r * r + z * z;
    const double wp = 2.0 * (r + z * zp);
    const double wpp = 2.0 * (1.0 + zp * zp + z * zpp);
    const double vpp =
        -0.5 * wpp * std::pow(w, -1.5) + 0.75 * wp * wp * std::pow(w, -2.5);
    const double vp = -0.5 * wp * std::pow(w, -1.5);
    return vpp + 2.0 * vp / r;
  }
  std::string name() const override { return "exact-inverse-r"; }

 private:
  double r0_;
};

}  // namespace

ConformalFactorPtr inverse_sqrt_profile() {
  static const auto profile = std::make_shared<const InverseSqrtProfile>();
  return profile;
}

ConformalFactorPtr exact_inverse_r_profile(double r0) {
  if (!(r0 >= 1.0)) throw Error("exact_inverse_r_profile: r0 must be >= 1");
  return std::make_shared<const ExactInverseRProfile>(r0);
}

Metric Metric::conformal(ConformalFactorPtr profile, double t) {
  if (!profile) throw Error("Metric::conformal: null profile");
  if (!(t >= 0.0)) throw Error("Metric::conformal: t must be non-negative");
  Metric m;
  m.profile_ = std::move(profile);
  m.t_ = t;
  return m;
}

std::string Metric::name() const {
  if (is_flat()) return "flat";
  std::ostringstream os;
  os << "conformal(" << profile_->name() << ",t=" << t_ << ")";
  return os.str();
}

}  // namespace pmclab
