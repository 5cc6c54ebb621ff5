#include "zfr/physics/initial.hpp"

#include <cmath>
#include <numbers>

namespace zfr::physics {

State<double> uniform_state(double rho, const std::array<double, 3>& u, double p, int dim, const GasModel& gas) {
  Primitive<double> w{rho, u, p};
  return to_conserved(w, dim, gas);
}

State<double> IsentropicVortex::operator()(const std::array<double, 3>& x, double t, const GasModel& gas) const {
  std::array<double, 2> r{};
  for (int a = 0; a < 2; ++a) {
    r[a] = x[a] - center[a] - velocity[a] * t;
    const double L = hi[a] - lo[a];
    if (L > 0.0) r[a] -= L * std::floor(r[a] / L + 0.5);
    r[a] /= radius;
  }
  const double r2 = r[0] * r[0] + r[1] * r[1];
  const double g = gas.gamma;
  const double pi = std::numbers::pi;
  const double scale = std::sqrt(p_inf / rho_inf);
  const double du = beta / (2.0 * pi) * std::exp(0.5 * (1.0 - r2)) * scale;
  const double T = 1.0 - (g - 1.0) * beta * beta / (8.0 * g * pi * pi) * std::exp(1.0 - r2);
  Primitive<double> w{};
  w.rho = rho_inf * std::pow(T, 1.0 / (g - 1.0));
  w.p = p_inf * std::pow(T, g / (g - 1.0));
  w.u = {velocity[0] - du * r[1], velocity[1] + du * r[0], 0.0};
  return to_conserved(w, 2, gas);
}

State<double> TaylorGreen::operator()(const std::array<double, 3>& x, const GasModel& gas) const {
  const double X = x[0] / length, Y = x[1] / length, Z = x[2] / length;
  Primitive<double> w{};
  w.rho = rho;
  w.u = {velocity * std::sin(X) * std::cos(Y) * std::cos(Z), -velocity * std::cos(X) * std::sin(Y) * std::cos(Z), 0.0};
  const double p0 = rho * velocity * velocity / (gas.gamma * mach * mach);
  w.p = p0 + rho * velocity * velocity / 16.0 * (std::cos(2 * X) + std::cos(2 * Y)) * (std::cos(2 * Z) + 2.0);
  return to_conserved(w, 3, gas);
}

State<double> ShockTube::operator()(const std::array<double, 3>& x, int dim, const GasModel& gas) const {
  const bool left = x[0] < x0;
  Primitive<double> w{};
  w.rho = left ? rho_l : rho_r;
  w.u = {left ? u_l : u_r, 0.0, 0.0};
  w.p = left ? p_l : p_r;
  return to_conserved(w, dim, gas);
}

}  // namespace zfr::physics
