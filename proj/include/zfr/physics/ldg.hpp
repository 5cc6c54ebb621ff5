#pragma once

#include "zfr/physics/flux.hpp"

namespace zfr::physics {

/// LDG parameters. With beta = +1/2 the common solution is taken from the left
/// side and the common viscous flux from the right side; the left side of an
/// interior face is the owner with the smaller (cell id, local face).
struct LdgParameters {
  double beta = 0.5;
  double tau = 0.0;
};

/// Default penalty 0.1 (p+1)^2 / h.
inline double default_ldg_penalty(int p, double h) { return 0.1 * (p + 1) * (p + 1) / h; }

/// Common solution 1/2 (qL + qR) - beta (qR - qL).
template <class T>
State<T> ldg_common_solution(const State<T>& qL, const State<T>& qR, int dim, double beta) {
  State<T> out{};
  for (int v = 0; v < nvars(dim); ++v) out[v] = 0.5 * (qL[v] + qR[v]) - beta * (qR[v] - qL[v]);
  return out;
}

/// Common normal viscous flux [1/2 (GL + GR) + beta (GR - GL)].n + tau (qL - qR),
/// with n the left side's outward unit normal.
template <class T>
State<T> ldg_common_flux(const State<T>& qL, const State<T>& qR, const State<T>& gnL, const State<T>& gnR, int dim,
                         const LdgParameters& prm) {
  State<T> out{};
  for (int v = 0; v < nvars(dim); ++v) {
    out[v] = 0.5 * (gnL[v] + gnR[v]) + prm.beta * (gnR[v] - gnL[v]) + prm.tau * (qL[v] - qR[v]);
  }
  return out;
}

}  // namespace zfr::physics
