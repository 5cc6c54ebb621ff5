#pragma once

#include <array>

#include "zfr/physics/state.hpp"

namespace zfr::physics {

/// Isentropic vortex convected by a uniform stream, on a periodic box.
struct IsentropicVortex {
  double beta = 5.0;  ///< strength
  double radius = 1.0;
  std::array<double, 2> center{0.0, 0.0};
  std::array<double, 2> velocity{1.0, 0.0};
  double rho_inf = 1.0;
  double p_inf = 1.0;
  /// Periodic box [lo, hi]^2 for image wrapping; zero extent means unbounded.
  std::array<double, 2> lo{-10.0, -10.0};
  std::array<double, 2> hi{10.0, 10.0};

  State<double> operator()(const std::array<double, 3>& x, double t, const GasModel& gas) const;
};

/// Smooth triply periodic Taylor-Green field on [0, 2 pi L)^3.
struct TaylorGreen {
  double length = 1.0;
  double velocity = 1.0;
  double rho = 1.0;
  double mach = 0.1;

  State<double> operator()(const std::array<double, 3>& x, const GasModel& gas) const;
};

/// Two constant states split at x = x0 along the first axis.
struct ShockTube {
  double x0 = 0.5;
  double rho_l = 1.0, u_l = 0.0, p_l = 1.0;
  double rho_r = 0.125, u_r = 0.0, p_r = 0.1;

  State<double> operator()(const std::array<double, 3>& x, int dim, const GasModel& gas) const;
};

State<double> uniform_state(double rho, const std::array<double, 3>& u, double p, int dim, const GasModel& gas);

}  // namespace zfr::physics
