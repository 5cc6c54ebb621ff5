#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zfr/prep/face_exchange.hpp"
#include "zfr/solver/config.hpp"
#include "zfr/solver/solver.hpp"

namespace zfr::io {

using KeyValues = std::map<std::string, std::string>;

/// `key = value` lines; `#` starts a comment; blank lines ignored. Throws
/// ParseError (with the line number) for a line without '=', an empty or
/// malformed key, or a repeated key.
KeyValues parse_key_values(const std::string& text);
/// One `key = value` line per entry in key order.
std::string serialize_key_values(const KeyValues& kv);

/// Primitive (rho, u, v, w, p).
using PrimitiveTuple = std::array<double, 5>;

struct BoundaryEntry {
  std::string kind = "slip-wall";
  double total_temperature = 0.0;
  double total_pressure = 0.0;
  std::array<double, 3> direction{1.0, 0.0, 0.0};
  double static_pressure = 0.0;
  double wall_temperature = 0.0;
  std::optional<PrimitiveTuple> reference;
};

struct SpongeEntry {
  int axis = 0;
  double lo = 0.0;
  double hi = 0.0;
  double width = 1.0;
  double sigma0 = 0.0;
  bool ramp_from_high = false;
  PrimitiveTuple reference{1.0, 0.0, 0.0, 0.0, 1.0};
};

struct InitialSpec {
  std::string kind = "uniform";  ///< uniform | vortex | tgv | sod
  double rho = 1.0;
  std::array<double, 3> velocity{0.0, 0.0, 0.0};
  double pressure = 1.0;
  double mach = 0.1;     ///< tgv
  double length = 1.0;   ///< tgv
  double x0 = 0.5;       ///< sod
  double beta = 5.0;     ///< vortex
  double radius = 1.0;   ///< vortex
  double box_lo = -10.0; ///< vortex periodic box
  double box_hi = 10.0;
};

struct OutputSpec {
  int every = 0;               ///< steps between outputs; 0 writes only the final state
  std::string format = "vtk";  ///< vtk | csv | none
  int order = 4;               ///< output interpolation degree per element
  bool q_criterion = false;
  std::string patch;           ///< csv surface patch
  double p0 = 0.0;             ///< total pressure for the isentropic Mach number
};

struct BenchSpec {
  int steps = 50;
  int warmup = 3;
};

/// Typed view of a run configuration file.
struct RunConfig {
  solver::SolverConfig solver;
  double dt = 0.0;  ///< fixed step; 0 uses the CFL-limited step
  std::uint64_t prep_seed = 0;
  prep::RoutingMode routing = prep::RoutingMode::Modulo;
  physics::GasModel gas;
  std::map<std::string, BoundaryEntry> boundaries;  ///< by patch name
  std::map<std::string, SpongeEntry> sponges;       ///< by zone name
  InitialSpec init;
  BenchSpec bench;
  OutputSpec output;
  std::map<std::string, std::string> case_info;     ///< descriptive case.* parameters
  /// One line per key that was absent and took its default.
  std::vector<std::string> notices;
};

/// Throws ParseError naming the line for unknown keys and malformed values.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Every key, defaults included.
std::string serialize_run_config(const RunConfig& cfg);

/// Boundary and sponge setup for a mesh with these patches. Throws
/// ConfigError for a boundary entry naming a patch the mesh lacks.
solver::PhysicsConfig physics_config(const RunConfig& cfg, const std::vector<std::string>& patch_names, int dim);

solver::InitialCondition initial_condition(const RunConfig& cfg, int dim);

}  // namespace zfr::io
