#include "zfr/fr/polynomial.hpp"

#include <cmath>
#include <numbers>

#include "zfr/common/error.hpp"

namespace zfr::fr {

double legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return p0;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int n, double x) {
  // d/dx P_n = n (x P_n - P_{n-1}) / (x^2 - 1) off the endpoints; recurrence everywhere.
  double d0 = 0.0, d1 = 1.0;
  if (n == 0) return d0;
  for (int k = 2; k <= n; ++k) {
    const double d2 = d0 + (2.0 * k - 1.0) * legendre(k - 1, x);
    d0 = d1;
    d1 = d2;
  }
  return d1;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 12) throw DomainError("Gauss-Legendre rule size must be in [1, 12], got " + std::to_string(n));
  QuadratureRule q;
  q.points.assign(n, 0.0);
  q.weights.assign(n, 0.0);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = -std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    if (2 * k + 1 == n) {
      x = 0.0;
    } else {
      for (int it = 0; it < 100; ++it) {
        const double dx = legendre(n, x) / legendre_derivative(n, x);
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
    }
    const double d = legendre_derivative(n, x);
    const double w = 2.0 / ((1.0 - x * x) * d * d);
    q.points[k] = x;
    q.points[n - 1 - k] = -x;
    q.weights[k] = w;
    q.weights[n - 1 - k] = w;
  }
  return q;
}

double lagrange(std::span<const double> nodes, int j, double x) {
  double v = 1.0;
  for (int m = 0; m < static_cast<int>(nodes.size()); ++m) {
    if (m != j) v *= (x - nodes[m]) / (nodes[j] - nodes[m]);
  }
  return v;
}

double lagrange_derivative(std::span<const double> nodes, int j, double x) {
  const int n = static_cast<int>(nodes.size());
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k == j) continue;
    double term = 1.0 / (nodes[j] - nodes[k]);
    for (int m = 0; m < n; ++m) {
      if (m != j && m != k) term *= (x - nodes[m]) / (nodes[j] - nodes[m]);
    }
    sum += term;
  }
  return sum;
}

}  // namespace zfr::fr
