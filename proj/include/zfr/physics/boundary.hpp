#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "zfr/physics/state.hpp"

namespace zfr::physics {

enum class BoundaryKind {
  RiemannInflow,
  PressureOutflow,
  IsothermalWall,
  AdiabaticWall,
  SlipWall,
  Periodic,
  Reference,
};

BoundaryKind boundary_kind_from_string(const std::string& name);
std::string to_string(BoundaryKind kind);

struct BoundarySpec {
  int patch = 0;
  BoundaryKind kind = BoundaryKind::SlipWall;
  double total_temperature = 0.0;  ///< riemann-inflow
  double total_pressure = 0.0;     ///< riemann-inflow
  std::array<double, 3> direction{1.0, 0.0, 0.0};  ///< riemann-inflow, unit, into the domain
  double static_pressure = 0.0;    ///< pressure outflow
  double wall_temperature = 0.0;   ///< isothermal wall
  std::array<double, 3> translation{0.0, 0.0, 0.0};  ///< periodic
  State<double> reference{};       ///< reference (farfield) state

  /// Throws ConfigError when dimensional parameters are missing or not positive.
  void validate(int dim) const;
};

/// Ghost states seen by the interface schemes: `inviscid` feeds the Riemann
/// solver; `viscous` is the boundary value used for the common solution and
/// the boundary viscous flux.
struct GhostState {
  State<double> inviscid{};
  State<double> viscous{};
  bool adiabatic = false;  ///< heat flux through the face is zero
};

struct BoundaryDiagnostics {
  std::uint64_t reversed_inflow = 0;  ///< inflow faces where the interior flows outward or goes supersonic
};

/// `partner` is the matching interior state for periodic boundaries.
GhostState apply_boundary(const BoundarySpec& spec, const State<double>& interior, const std::array<double, 3>& n,
                          int dim, const GasModel& gas, BoundaryDiagnostics* diag = nullptr,
                          const std::optional<State<double>>& partner = std::nullopt);

}  // namespace zfr::physics
