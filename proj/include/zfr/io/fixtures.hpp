#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zfr/io/config.hpp"
#include "zfr/mesh/mesh.hpp"

namespace zfr::io {

/// Coarse 2-D turbine cascade: one periodic pitch, sheared along a parabolic
/// camber line, with the blade as a zero-thickness slit on the periodic seam.
/// Patches: inlet, outlet, blade. Lengths in metres.
struct CascadeSpec {
  double chord = 0.067647;
  double pitch_over_chord = 0.85;
  double stagger_deg = 55.0;
  int upstream = 4;   ///< columns before the leading edge
  int blade = 8;      ///< columns along the blade, >= 2
  int downstream = 6; ///< columns after the trailing edge
  int pitchwise = 6;  ///< rows across the pitch, >= 3
};

mesh::Mesh make_cascade(const CascadeSpec& spec);

struct Fixture {
  std::string name;
  mesh::Mesh mesh;
  RunConfig config;
};

/// ls89-2d | vortex | tgv | sod | ge-e3-inflow
const std::vector<std::string>& fixture_names();
/// Throws ConfigError for an unknown name.
Fixture make_fixture(const std::string& name);

inline constexpr const char* kFixtureMeshName = "mesh.zfrm";
inline constexpr const char* kFixtureConfigName = "case.cfg";

/// Writes mesh.zfrm and case.cfg into `dir` (created if needed).
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace zfr::io
