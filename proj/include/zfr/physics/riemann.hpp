#pragma once

#include <cmath>
#include <cstdint>

#include "zfr/physics/flux.hpp"

namespace zfr::physics {

enum class RiemannSolver { Rusanov, Hllc };

/// Local Lax-Friedrichs flux: average normal flux minus half the largest wave
/// speed of the two states times the jump.
template <class T>
State<T> rusanov_flux(const State<T>& qL, const State<T>& qR, const std::array<double, 3>& n, int dim,
                      const GasModel& gas) {
  const auto wL = to_primitive(qL, dim, gas);
  const auto wR = to_primitive(qR, dim, gas);
  const auto fL = normal_flux(inviscid_flux(wL, qL, dim), n, dim);
  const auto fR = normal_flux(inviscid_flux(wR, qR, dim), n, dim);
  const T sL = max_wave_speed(wL, n, dim, gas);
  const T sR = max_wave_speed(wR, n, dim, gas);
  const T lam = sL < sR ? sR : sL;
  State<T> out{};
  for (int v = 0; v < nvars(dim); ++v) out[v] = 0.5 * (fL[v] + fR[v]) - 0.5 * lam * (qR[v] - qL[v]);
  return out;
}

/// HLLC with Davis wave-speed bounds. Falls back to Rusanov (and bumps
/// `fallbacks` when given) if the star-region estimate breaks down.
template <class T>
State<T> hllc_flux(const State<T>& qL, const State<T>& qR, const std::array<double, 3>& n, int dim,
                   const GasModel& gas, std::uint64_t* fallbacks = nullptr) {
  const auto wL = to_primitive(qL, dim, gas);
  const auto wR = to_primitive(qR, dim, gas);
  T unL = wL.u[0] * n[0], unR = wR.u[0] * n[0];
  for (int a = 1; a < dim; ++a) {
    unL = unL + wL.u[a] * n[a];
    unR = unR + wR.u[a] * n[a];
  }
  const T cL = sound_speed(wL, gas), cR = sound_speed(wR, gas);
  const T aL = unL - cL, aR = unR - cR;
  const T bL = unL + cL, bR = unR + cR;
  const T SL = aL < aR ? aL : aR;
  const T SR = bL < bR ? bR : bL;
  const T mL = wL.rho * (SL - unL);
  const T mR = wR.rho * (SR - unR);
  const T denom = mL - mR;
  const T Sstar = (wR.p - wL.p + mL * unL - mR * unR) / denom;
  const T p_star = wL.p + mL * (Sstar - unL);
  const bool ok = !(denom == 0.0) && std::isfinite(static_cast<double>(Sstar)) && SL < Sstar && Sstar < SR &&
                  p_star > 0.0;
  if (!ok) {
    if (fallbacks) ++*fallbacks;
    return rusanov_flux(qL, qR, n, dim, gas);
  }
  const auto fL = normal_flux(inviscid_flux(wL, qL, dim), n, dim);
  const auto fR = normal_flux(inviscid_flux(wR, qR, dim), n, dim);
  if (!(SL < 0.0)) return fL;
  if (!(SR > 0.0)) return fR;

  const bool left = Sstar > 0.0 || Sstar == 0.0;
  const auto& q = left ? qL : qR;
  const auto& w = left ? wL : wR;
  const auto& f = left ? fL : fR;
  const T S = left ? SL : SR;
  const T un = left ? unL : unR;
  const T scale = (S - un) / (S - Sstar);
  const T rho_star = w.rho * scale;
  if (!(rho_star > 0.0)) {
    if (fallbacks) ++*fallbacks;
    return rusanov_flux(qL, qR, n, dim, gas);
  }
  State<T> qs{};
  qs[0] = rho_star;
  for (int a = 0; a < dim; ++a) qs[1 + a] = rho_star * (w.u[a] + (Sstar - un) * n[a]);
  qs[dim + 1] = scale * (q[dim + 1] + (Sstar - un) * (w.rho * Sstar + w.p / (S - un)));
  State<T> out{};
  for (int v = 0; v < nvars(dim); ++v) out[v] = f[v] + S * (qs[v] - q[v]);
  return out;
}

template <class T>
State<T> riemann_flux(RiemannSolver solver, const State<T>& qL, const State<T>& qR, const std::array<double, 3>& n,
                      int dim, const GasModel& gas, std::uint64_t* fallbacks = nullptr) {
  return solver == RiemannSolver::Hllc ? hllc_flux(qL, qR, n, dim, gas, fallbacks) : rusanov_flux(qL, qR, n, dim, gas);
}

}  // namespace zfr::physics
