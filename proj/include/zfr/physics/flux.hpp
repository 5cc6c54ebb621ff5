#pragma once

#include <algorithm>
#include <cmath>

#include "zfr/physics/state.hpp"

namespace zfr::physics {

template <class T>
Flux<T> inviscid_flux(const Primitive<T>& w, const State<T>& q, int dim) {
  Flux<T> F{};
  const T H = q[dim + 1] + w.p;  // rho * total enthalpy
  for (int a = 0; a < dim; ++a) {
    F[a][0] = q[1 + a];
    for (int b = 0; b < dim; ++b) F[a][1 + b] = q[1 + b] * w.u[a];
    F[a][1 + a] = F[a][1 + a] + w.p;
    F[a][dim + 1] = H * w.u[a];
  }
  return F;
}

template <class T>
Flux<T> inviscid_flux(const State<T>& q, int dim, const GasModel& gas) {
  return inviscid_flux(to_primitive(q, dim, gas), q, dim);
}

/// Viscous part of the flux, signed so that the total flux is F + G:
/// G = -(0, tau, tau.u + k grad T) with Stokes' hypothesis and k = mu cp / Pr.
/// `grad[v][a]` is the gradient of conserved variable v along x_a.
template <class T>
Flux<T> viscous_flux(const State<T>& q, const Flux<T>& grad_t, int dim, const GasModel& gas) {
  // grad_t[a][v] holds d q_v / d x_a.
  const auto w = to_primitive(q, dim, gas);
  const T inv = 1.0 / w.rho;
  // Velocity and temperature gradients from conserved-variable gradients.
  std::array<std::array<T, 3>, 3> du{};  // du[i][a] = d u_i / d x_a
  std::array<T, 3> dT{};
  const T e_over_rho = q[dim + 1] * inv;
  const double c = (gas.gamma - 1.0) / gas.R;
  for (int a = 0; a < dim; ++a) {
    T u_du = T(0.0);
    for (int i = 0; i < dim; ++i) {
      du[i][a] = (grad_t[a][1 + i] - w.u[i] * grad_t[a][0]) * inv;
      u_du = u_du + w.u[i] * du[i][a];
    }
    dT[a] = c * ((grad_t[a][dim + 1] - e_over_rho * grad_t[a][0]) * inv - u_du);
  }
  const T temp = w.p * inv / gas.R;
  const T mu = gas.viscosity(temp);
  const T k = mu * (gas.cp() / gas.prandtl);
  T divu = du[0][0];
  for (int a = 1; a < dim; ++a) divu = divu + du[a][a];
  const T lambda_div = (-2.0 / 3.0) * mu * divu;

  Flux<T> G{};
  for (int a = 0; a < dim; ++a) {
    G[a][0] = T(0.0);
    T work = T(0.0);
    for (int i = 0; i < dim; ++i) {
      T tau = mu * (du[i][a] + du[a][i]);
      if (i == a) tau = tau + lambda_div;
      G[a][1 + i] = -tau;
      work = work + tau * w.u[i];
    }
    G[a][dim + 1] = -(work + k * dT[a]);
  }
  return G;
}

/// Normal component sum_a F[a][v] n_a for every variable.
template <class T>
State<T> normal_flux(const Flux<T>& F, const std::array<double, 3>& n, int dim) {
  State<T> out{};
  for (int v = 0; v < nvars(dim); ++v) {
    T s = F[0][v] * n[0];
    for (int a = 1; a < dim; ++a) s = s + F[a][v] * n[a];
    out[v] = s;
  }
  return out;
}

/// Largest characteristic speed |u.n| + c.
template <class T>
T max_wave_speed(const Primitive<T>& w, const std::array<double, 3>& n, int dim, const GasModel& gas) {
  using std::abs;
  T un = w.u[0] * n[0];
  for (int a = 1; a < dim; ++a) un = un + w.u[a] * n[a];
  return abs(un) + sound_speed(w, gas);
}

}  // namespace zfr::physics
