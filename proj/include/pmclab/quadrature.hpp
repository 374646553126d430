#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace pmclab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], nodes ascending. Exact for polynomials
// of degree <= 2n-1.
QuadratureRule gauss_legendre(int n);

// The same rule mapped to [0, 1].
QuadratureRule gauss_legendre_01(int n);

// Adaptive quadrature of a smooth 1-D integrand (Gauss-Kronrod based).
// Used for radial oracles and the conformal-profile integrals.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12);

// Barycentric differentiation matrix for an arbitrary node set, row-major
// n x n: (Df)_i = sum_j D[i*n+j] f_j differentiates the interpolating
// polynomial.
std::vector<double> differentiation_matrix(const std::vector<double>& nodes);

// Spectral differentiation matrix for a uniform periodic grid of n points
// on [0, 2pi), n even.
std::vector<double> fourier_differentiation_matrix(int n);

}  // namespace pmclab
