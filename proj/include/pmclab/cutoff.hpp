#pragma once

namespace pmclab {

// Smooth decreasing profile with exact plateaus: 1 for r <= 0, 0 for r >= 1.
// Built from the exponential partition sigma(s) = exp(-1/s).
class Cutoff {
 public:
  double value(double r) const;
  double deriv(double r) const;
  double second_deriv(double r) const;
};

const Cutoff& standard_cutoff();

}  // namespace pmclab
