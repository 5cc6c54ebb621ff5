#include "zfr/perf/flops.hpp"

#include <cmath>

#include "zfr/common/error.hpp"

namespace zfr::perf {

double flops_gemm(std::int64_t m, std::int64_t n, std::int64_t k) {
  if (m <= 0 || n <= 0 || k <= 0) throw DomainError("gemm dimensions must be positive");
  return 2.0 * static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(k);
}

double dof_count(double elements, int p, int nvars, int dim) {
  if (elements < 0 || p < 0 || nvars < 1 || dim < 1) throw DomainError("invalid dof_count arguments");
  return elements * std::pow(p + 1.0, dim) * nvars;
}

namespace {

// Tallies of the implemented formulas (adds, multiplies, divides and square
// roots count one each; negation, abs and comparisons are free).
double to_primitive_ops(int d) { return 4 + 3 * d; }               // 1/rho, d (mul, mul, add), 3 for p
double inviscid_flux_ops(int d) { return 1 + d * (d + 2); }        // H, d(d mul + add p + mul H)
double normal_flux_ops(int d) { return (d + 2) * (2 * d - 1); }    // per variable: d mul, d-1 add
double wave_speed_ops(int d) { return (2 * d - 1) + 3 + 1; }       // u.n, gamma p / rho with sqrt, sum
double viscous_flux_ops(int d) {
  // primitive; 1/rho; E/rho; per axis 5 per velocity component + 5 for dT;
  // temperature 2; k 1; div u d-1; lambda 2; per axis 4 per component + 1 + 2.
  return to_primitive_ops(d) + 1 + 1 + d * (5.0 * d + 5) + 2 + 1 + (d - 1) + 2 + d * (4.0 * d + 3);
}
double rusanov_ops(int d) {
  return 2 * to_primitive_ops(d) + 2 * inviscid_flux_ops(d) + 2 * normal_flux_ops(d) + 2 * wave_speed_ops(d) +
         6.0 * (d + 2);
}
double hllc_ops(int d) {
  // Star-region branch: primitives, normal velocities, sound speeds, Davis
  // bounds, masses, S*, p*, both physical fluxes, scale, rho*, star momentum,
  // star energy, output.
  const double nv = d + 2;
  return 2 * to_primitive_ops(d) + 2 * (2 * d - 1) + 6 + 4 + 4 + 1 + 6 + 3 + 2 * inviscid_flux_ops(d) +
         2 * normal_flux_ops(d) + 3 + 1 + 4 * d + 8 + 3 * nv;
}

double cost(const std::string& kernel, const PointwiseVariant& v) {
  const int d = v.dim;
  if (d != 2 && d != 3) throw DomainError("point-wise costs are tabulated for 2-D and 3-D only");
  const double nv = d + 2;
  if (kernel == "evaluate_flux") {
    const double inviscid = to_primitive_ops(d) + inviscid_flux_ops(d) + nv * d * (2 * d - 1);
    return v.viscous ? inviscid + viscous_flux_ops(d) + nv * d : inviscid;
  }
  if (kernel == "common_flux") {
    double c = (v.hllc ? hllc_ops(d) : rusanov_ops(d)) + nv;  // + scaling by the area
    if (v.viscous) c += 2 * viscous_flux_ops(d) + 2 * normal_flux_ops(d) + 8 * nv + nv;
    return c;
  }
  if (kernel == "common_solution") return 7 * nv;
  if (kernel == "transform_gradient") return nv * d * 2.0 * d;
  if (kernel == "flux_jump") return nv;
  if (kernel == "sum_divergence") return nv;
  if (kernel == "inverse_jacobian") return nv;
  if (kernel == "add_source") return 3 * nv;
  if (kernel == "rk_euler") return 2 * nv;
  if (kernel == "rk_lerp") return 5 * nv;
  throw DomainError("unregistered point-wise kernel '" + kernel + "'");
}

}  // namespace

double pointwise_cost(const std::string& kernel, const PointwiseVariant& variant) { return cost(kernel, variant); }

double flops_pointwise(const std::string& kernel, std::int64_t npoints, const PointwiseVariant& variant) {
  const double c = cost(kernel, variant);
  if (npoints < 0) throw DomainError("negative point count");
  return c * static_cast<double>(npoints);
}

}  // namespace zfr::perf
