#pragma once

#include "pmclab/prescription.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pmclab {

// Sampling-based hypothesis check. margin > 0 means the hypothesis holds
// with that much room on the sampled set; these are evidence, not proofs.
struct HypothesisReport {
  std::string hypothesis;
  bool pass = false;
  bool evaluated = true;
  double margin = 0.0;
  int samples = 0;
  uint64_t seed = 0;
  std::string note;
};

struct DecayRow {
  double radius;
  double value_deviation;  // max |h - c| on the sampled sphere
  double gradient_norm;    // max |grad h|
};

// (H1): smooth convergence to the constant c. Samples spheres at the given
// radii; passes when both deviations decay monotonically (within slack)
// and end below tol.
HypothesisReport check_H1(const Prescription& p,
                          const std::vector<double>& radii, double tol,
                          int directions_per_sphere, uint64_t seed,
                          std::vector<DecayRow>* trace = nullptr);

// (H2): |grad h(x) . x| < sigma h(x) for |x| >= rho. Reports the largest
// violation of the strict inequality over the sampled annulus.
HypothesisReport check_H2(const Prescription& p, double rho, double sigma,
                          double r_max, int n_radii, int n_directions,
                          uint64_t seed);

// (H3) lives in an external reference and is not machine-checked.
HypothesisReport report_H3();

// (H4): a width estimate must be strictly below A^c(B_{n/c}).
HypothesisReport check_H4(double width_estimate, const Prescription& p);

// The threshold A^c(B_{n/c}) = omega_n (n/c)^n / (n+1), n = 2.
double spheres_at_infinity_level(double c);

}  // namespace pmclab
