#include "pmclab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pmclab {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre_01(int n) {
  QuadratureRule rule = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
    rule.weights[i] *= 0.5;
  }
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol);
}

std::vector<double> differentiation_matrix(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  // Barycentric weights via log-magnitudes to avoid under/overflow.
  std::vector<double> logw(n, 0.0);
  std::vector<int> sign(n, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = nodes[i] - nodes[j];
      logw[i] -= std::log(std::abs(d));
      if (d < 0) sign[i] = -sign[i];
    }
  }
  std::vector<double> D(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double ratio = sign[j] * sign[i] * std::exp(logw[j] - logw[i]);
      double dij = ratio / (nodes[i] - nodes[j]);
      D[static_cast<size_t>(i) * n + j] = dij;
      diag -= dij;
    }
    D[static_cast<size_t>(i) * n + i] = diag;
  }
  return D;
}

std::vector<double> fourier_differentiation_matrix(int n) {
  std::vector<double> D(static_cast<size_t>(n) * n, 0.0);
  const double h = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int k = i - j;
      double s = (k % 2 == 0) ? 1.0 : -1.0;
      // Even n: cot stencil (Nyquist mode maps to zero). Odd n: csc stencil,
      // exact on every representable mode with no spurious null space.
      D[static_cast<size_t>(i) * n + j] =
          n % 2 == 0 ? 0.5 * s / std::tan(0.5 * k * h)
                     : 0.5 * s / std::sin(0.5 * k * h);
    }
  }
  return D;
}

}  // namespace pmclab
