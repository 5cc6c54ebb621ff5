#pragma once

#include <array>
#include <cstdint>

#include "zfr/fr/geometry.hpp"
#include "zfr/physics/boundary.hpp"
#include "zfr/physics/flux.hpp"
#include "zfr/physics/ldg.hpp"
#include "zfr/physics/riemann.hpp"

// Point-wise kernel bodies, templated on the scalar so that the production
// passes (double) and the operation census (perf::Counted) run the same code.

namespace zfr::solver {

struct FluxSetup {
  int dim = 2;
  physics::GasModel gas;
  physics::RiemannSolver riemann = physics::RiemannSolver::Rusanov;
  physics::LdgParameters ldg;
  bool viscous = false;
};

/// Transformed total flux adj(J) (F + G) at one solution point; `grad` (physical
/// gradient, grad[a][v]) is null for inviscid runs.
template <class T>
physics::Flux<T> evaluate_flux_point(const physics::State<T>& q, const physics::Flux<T>* grad, const fr::Mat3& adj,
                                     const FluxSetup& s) {
  const int dim = s.dim;
  const auto w = physics::to_primitive(q, dim, s.gas);
  auto F = physics::inviscid_flux(w, q, dim);
  if (grad) {
    const auto G = physics::viscous_flux(q, *grad, dim, s.gas);
    for (int a = 0; a < dim; ++a)
      for (int v = 0; v < physics::nvars(dim); ++v) F[a][v] = F[a][v] + G[a][v];
  }
  physics::Flux<T> out{};
  for (int v = 0; v < physics::nvars(dim); ++v) {
    const auto t = fr::transform_flux<T>(adj, {F[0][v], F[1][v], F[2][v]}, dim);
    for (int a = 0; a < dim; ++a) out[a][v] = t[a];
  }
  return out;
}

/// Common normal flux times the surface scaling, oriented along the left
/// normal `n`. Gradients are null for inviscid runs.
template <class T>
physics::State<T> common_flux_point(const physics::State<T>& qL, const physics::State<T>& qR,
                                    const physics::Flux<T>* gL, const physics::Flux<T>* gR,
                                    const std::array<double, 3>& n, double area, const FluxSetup& s,
                                    std::uint64_t* fallbacks) {
  const int dim = s.dim;
  auto f = physics::riemann_flux(s.riemann, qL, qR, n, dim, s.gas, fallbacks);
  if (gL) {
    const auto gnL = physics::normal_flux(physics::viscous_flux(qL, *gL, dim, s.gas), n, dim);
    const auto gnR = physics::normal_flux(physics::viscous_flux(qR, *gR, dim, s.gas), n, dim);
    const auto vis = physics::ldg_common_flux(qL, qR, gnL, gnR, dim, s.ldg);
    for (int v = 0; v < physics::nvars(dim); ++v) f[v] = f[v] + vis[v];
  }
  for (int v = 0; v < physics::nvars(dim); ++v) f[v] = f[v] * area;
  return f;
}

/// Common solution minus each side's trace: (u_hat - qL, u_hat - qR).
template <class T>
std::array<physics::State<T>, 2> common_solution_point(const physics::State<T>& qL, const physics::State<T>& qR,
                                                       const FluxSetup& s) {
  const auto u = physics::ldg_common_solution(qL, qR, s.dim, s.ldg.beta);
  std::array<physics::State<T>, 2> out{};
  for (int v = 0; v < physics::nvars(s.dim); ++v) {
    out[0][v] = u[v] - qL[v];
    out[1][v] = u[v] - qR[v];
  }
  return out;
}

/// Physical gradient (1/|J|) adj^T grad_ref of one variable.
template <class T>
std::array<T, 3> transform_gradient_point(const std::array<T, 3>& gref, const fr::Mat3& adj, double inv_det, int dim) {
  std::array<T, 3> out{};
  for (int a = 0; a < dim; ++a) {
    T s = adj[0][a] * gref[0];
    for (int b = 1; b < dim; ++b) s = s + adj[b][a] * gref[b];
    out[a] = s * inv_det;
  }
  return out;
}

// Entry-wise bodies of the element update chain. Fused and unfused passes
// compose the same calls, so both produce identical bits.
template <class T>
T flux_jump_entry(const T& common, const T& interior) {
  return common - interior;
}
template <class T>
T sum_divergence_entry(const T& div, const T& corr) {
  return div + corr;
}
template <class T>
T inverse_jacobian_entry(const T& r, double neg_inv_det) {
  return r * neg_inv_det;
}
/// r + (b - sigma q): the sponge source written as -sigma (q - q_ref) with
/// b = sigma q_ref accumulated over zones.
template <class T>
T add_source_entry(const T& r, const T& q, double sigma, double b) {
  return r + (b - sigma * q);
}

// SSP-RK stages in lerp form; a zero residual leaves q bitwise unchanged.
template <class T>
T rk_euler_entry(const T& q, const T& r, double dt) {
  return q + dt * r;
}
template <class T>
T rk_lerp_entry(const T& q0, const T& qs, const T& r, double dt, double b) {
  const T v = qs + dt * r;
  return q0 + b * (v - q0);
}

}  // namespace zfr::solver
