#pragma once

#include <array>
#include <cmath>
#include <string>

#include "zfr/common/error.hpp"
#include "zfr/physics/gas.hpp"

namespace zfr::physics {

constexpr int kMaxVars = 5;

/// Conserved variables (rho, rho u_1..rho u_d, E); entries past d+2 unused.
template <class T>
using State = std::array<T, kMaxVars>;

/// Per-variable vectors: Flux[a][v] is component a of the flux of variable v.
template <class T>
using Flux = std::array<std::array<T, kMaxVars>, 3>;

constexpr int nvars(int dim) { return dim + 2; }

template <class T>
struct Primitive {
  T rho;
  std::array<T, 3> u;
  T p;
};

/// Recovers (rho, u, p); throws StateError if density or pressure is not positive.
template <class T>
Primitive<T> to_primitive(const State<T>& q, int dim, const GasModel& gas) {
  Primitive<T> w{};
  w.rho = q[0];
  if (!(w.rho > 0.0)) throw StateError("non-positive density");
  const T inv = 1.0 / w.rho;
  T ke = T(0.0);
  for (int a = 0; a < dim; ++a) {
    w.u[a] = q[1 + a] * inv;
    ke = ke + q[1 + a] * w.u[a];
  }
  w.p = (gas.gamma - 1.0) * (q[dim + 1] - 0.5 * ke);
  if (!(w.p > 0.0)) throw StateError("non-positive pressure");
  return w;
}

template <class T>
State<T> to_conserved(const Primitive<T>& w, int dim, const GasModel& gas) {
  State<T> q{};
  q[0] = w.rho;
  T ke = T(0.0);
  for (int a = 0; a < dim; ++a) {
    q[1 + a] = w.rho * w.u[a];
    ke = ke + w.u[a] * w.u[a];
  }
  q[dim + 1] = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * ke;
  return q;
}

template <class T>
T sound_speed(const Primitive<T>& w, const GasModel& gas) {
  using std::sqrt;
  return sqrt(gas.gamma * w.p / w.rho);
}

inline double temperature(const Primitive<double>& w, const GasModel& gas) { return w.p / (w.rho * gas.R); }

/// Positivity check for a conserved state.
inline bool admissible(const State<double>& q, int dim, const GasModel& gas) {
  if (!(q[0] > 0.0)) return false;
  double ke = 0.0;
  for (int a = 0; a < dim; ++a) ke += q[1 + a] * q[1 + a];
  return (gas.gamma - 1.0) * (q[dim + 1] - 0.5 * ke / q[0]) > 0.0;
}

}  // namespace zfr::physics
