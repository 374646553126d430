#include "pmclab/cutoff.hpp"

#include <cmath>

namespace pmclab {

namespace {
// Guard band: inside it the plateau values are exact anyway, and it keeps
// exp(-1/s) * s^-k away from 0 * inf.
constexpr double kEdge = 1e-12;
}  // namespace

double Cutoff::value(double r) const {
  if (r <= kEdge) return 1.0;
  if (r >= 1.0 - kEdge) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - r));
  const double b = std::exp(-1.0 / r);
  return a / (a + b);
}

double Cutoff::deriv(double r) const {
  if (r <= kEdge || r >= 1.0 - kEdge) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - r));
  const double b = std::exp(-1.0 / r);
  const double p = 1.0 / ((1.0 - r) * (1.0 - r));
  const double q = 1.0 / (r * r);
  const double s = a + b;
  return -a * b * (p + q) / (s * s);
}

double Cutoff::second_deriv(double r) const {
  if (r <= kEdge || r >= 1.0 - kEdge) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - r));
  const double b = std::exp(-1.0 / r);
  const double p = 1.0 / ((1.0 - r) * (1.0 - r));
  const double q = 1.0 / (r * r);
  const double w = p + q;
  const double wp = 2.0 / std::pow(1.0 - r, 3) - 2.0 / std::pow(r, 3);
  const double s = a + b;
  // d/dr [ -a b w / s^2 ] with a' = -a p, b' = b q.
  const double term1 = a * b * ((p - q) * w - wp) / (s * s);
  const double term2 = 2.0 * a * b * w * (-a * p + b * q) / (s * s * s);
  return term1 + term2;
}

const Cutoff& standard_cutoff() {
  static const Cutoff zeta;
  return zeta;
}

}  // namespace pmclab
