#pragma once

#include <cstdint>
#include <string>

namespace zfr::perf {

/// 2 m n k; throws DomainError for non-positive dimensions.
double flops_gemm(std::int64_t m, std::int64_t n, std::int64_t k);

/// elements * (p+1)^dim * nvars.
double dof_count(double elements, int p, int nvars, int dim = 3);

/// Variant of the point-wise kernels whose cost is tabulated.
struct PointwiseVariant {
  int dim = 3;
  bool viscous = false;
  bool hllc = false;
};

/// Hand-tallied operations per point of a registered point-wise kernel times
/// `npoints`. A point is a solution point for element kernels, a face point
/// pair for interface kernels and an element flux point for flux_jump.
/// Throws DomainError for an unregistered kernel or a negative count.
double flops_pointwise(const std::string& kernel, std::int64_t npoints, const PointwiseVariant& variant);

/// Per-point cost from the table (flops_pointwise with npoints = 1).
double pointwise_cost(const std::string& kernel, const PointwiseVariant& variant);

}  // namespace zfr::perf
