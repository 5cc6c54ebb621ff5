#include "zfr/physics/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "zfr/common/error.hpp"

namespace zfr::physics {

namespace {

struct KindName {
  BoundaryKind kind;
  const char* name;
};
constexpr KindName kNames[] = {
    {BoundaryKind::RiemannInflow, "riemann-inflow"}, {BoundaryKind::PressureOutflow, "pressure-outflow"},
    {BoundaryKind::IsothermalWall, "isothermal-wall"}, {BoundaryKind::AdiabaticWall, "adiabatic-wall"},
    {BoundaryKind::SlipWall, "slip-wall"},           {BoundaryKind::Periodic, "periodic"},
    {BoundaryKind::Reference, "reference"},
};

double normal_velocity(const Primitive<double>& w, const std::array<double, 3>& n, int dim) {
  double un = 0.0;
  for (int a = 0; a < dim; ++a) un += w.u[a] * n[a];
  return un;
}

}  // namespace

BoundaryKind boundary_kind_from_string(const std::string& name) {
  for (const auto& k : kNames) {
    if (name == k.name) return k.kind;
  }
  throw ConfigError("unknown boundary kind '" + name + "'");
}

std::string to_string(BoundaryKind kind) {
  for (const auto& k : kNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

void BoundarySpec::validate(int dim) const {
  const std::string where = "boundary patch " + std::to_string(patch) + " (" + to_string(kind) + "): ";
  switch (kind) {
    case BoundaryKind::RiemannInflow: {
      if (!(total_temperature > 0.0 && total_pressure > 0.0)) throw ConfigError(where + "total conditions must be > 0");
      double len = 0.0;
      for (int a = 0; a < dim; ++a) len += direction[a] * direction[a];
      if (std::abs(len - 1.0) > 1e-10) throw ConfigError(where + "flow direction must be a unit vector");
      break;
    }
    case BoundaryKind::PressureOutflow:
      if (!(static_pressure > 0.0)) throw ConfigError(where + "static pressure must be > 0");
      break;
    case BoundaryKind::IsothermalWall:
      if (!(wall_temperature > 0.0)) throw ConfigError(where + "wall temperature must be > 0");
      break;
    case BoundaryKind::Reference:
      if (!(reference[0] > 0.0)) throw ConfigError(where + "reference density must be > 0");
      break;
    default:
      break;
  }
}

GhostState apply_boundary(const BoundarySpec& spec, const State<double>& qi, const std::array<double, 3>& n, int dim,
                          const GasModel& gas, BoundaryDiagnostics* diag, const std::optional<State<double>>& partner) {
  const auto w = to_primitive(qi, dim, gas);
  const double un = normal_velocity(w, n, dim);
  GhostState g;
  switch (spec.kind) {
    case BoundaryKind::RiemannInflow: {
      // Outgoing invariant u.n + 2c/(gamma-1) from the interior; the rest from total conditions.
      const double gm1 = gas.gamma - 1.0;
      const double c_in = sound_speed(w, gas);
      if (diag && (un > 0.0 || std::abs(un) > c_in)) ++diag->reversed_inflow;
      const double Rplus = un + 2.0 * c_in / gm1;
      double dn = 0.0;
      for (int a = 0; a < dim; ++a) dn += spec.direction[a] * n[a];
      const double c0sq = gas.gamma * gas.R * spec.total_temperature;
      const double half = 0.5 * gm1;
      // (half^2 dn^2 + half) V^2 - 2 half^2 Rplus dn V + half^2 Rplus^2 - c0^2 = 0
      const double A = half * half * dn * dn + half;
      const double B = -2.0 * half * half * Rplus * dn;
      const double C = half * half * Rplus * Rplus - c0sq;
      const double disc = B * B - 4.0 * A * C;
      double V = disc > 0.0 ? (-B + std::sqrt(disc)) / (2.0 * A) : -B / (2.0 * A);
      const double Vmax = std::sqrt(c0sq / half);
      V = std::clamp(V, 0.0, 0.999 * Vmax);
      const double T = spec.total_temperature - V * V / (2.0 * gas.cp());
      Primitive<double> b{};
      b.p = spec.total_pressure * std::pow(T / spec.total_temperature, gas.gamma / gm1);
      b.rho = b.p / (gas.R * T);
      for (int a = 0; a < dim; ++a) b.u[a] = V * spec.direction[a];
      g.inviscid = to_conserved(b, dim, gas);
      g.viscous = g.inviscid;
      break;
    }
    case BoundaryKind::PressureOutflow: {
      Primitive<double> b = w;
      if (std::abs(un) < sound_speed(w, gas)) b.p = spec.static_pressure;
      g.inviscid = to_conserved(b, dim, gas);
      g.viscous = g.inviscid;
      break;
    }
    case BoundaryKind::IsothermalWall:
    case BoundaryKind::AdiabaticWall: {
      Primitive<double> r = w;
      for (int a = 0; a < dim; ++a) r.u[a] = -w.u[a];
      g.inviscid = to_conserved(r, dim, gas);
      Primitive<double> b = w;
      for (int a = 0; a < dim; ++a) b.u[a] = 0.0;
      if (spec.kind == BoundaryKind::IsothermalWall) {
        b.rho = w.p / (gas.R * spec.wall_temperature);
      } else {
        g.adiabatic = true;
      }
      g.viscous = to_conserved(b, dim, gas);
      break;
    }
    case BoundaryKind::SlipWall: {
      Primitive<double> r = w, b = w;
      for (int a = 0; a < dim; ++a) {
        r.u[a] = w.u[a] - 2.0 * un * n[a];
        b.u[a] = w.u[a] - un * n[a];
      }
      g.inviscid = to_conserved(r, dim, gas);
      g.viscous = to_conserved(b, dim, gas);
      g.adiabatic = true;
      break;
    }
    case BoundaryKind::Periodic:
      if (!partner) throw StateError("periodic boundary needs the partner state");
      g.inviscid = *partner;
      g.viscous = *partner;
      break;
    case BoundaryKind::Reference:
      g.inviscid = spec.reference;
      g.viscous = spec.reference;
      break;
  }
  return g;
}

}  // namespace zfr::physics
