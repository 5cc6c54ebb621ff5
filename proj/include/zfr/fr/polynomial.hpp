#pragma once

#include <span>
#include <vector>

namespace zfr::fr {

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1,1], 1 <= n <= 12. Points ascend and are exactly
/// antisymmetric (x[n-1-k] == -x[k]); the middle point of an odd rule is 0.
QuadratureRule gauss_legendre(int n);

/// Legendre polynomial P_n(x) and its derivative.
double legendre(int n, double x);
double legendre_derivative(int n, double x);

/// Lagrange basis through `nodes`: l_j(x) and l_j'(x).
double lagrange(std::span<const double> nodes, int j, double x);
double lagrange_derivative(std::span<const double> nodes, int j, double x);

}  // namespace zfr::fr
