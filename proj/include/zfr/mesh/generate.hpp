#pragma once

#include <array>
#include <cstdint>

#include "zfr/mesh/mesh.hpp"

namespace zfr::mesh {

/// Structured box meshed with hexahedra (nz > 0) or quadrilaterals (nz == 0).
struct BoxSpec {
  int nx = 1;
  int ny = 1;
  int nz = 1;
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};
  /// Periodic axes are closed by vertex identification; they need >= 3 cells.
  std::array<bool, 3> periodic{false, false, false};
  /// Random interior vertex displacement as a fraction of the local spacing.
  double perturbation = 0.0;
  /// Shuffle vertex and cell numbering.
  bool shuffle = false;
  std::uint64_t seed = 0;
};

/// Non-periodic sides become patches named xmin, xmax, ymin, ymax, zmin, zmax
/// (in that order, skipping periodic axes), one section per patch.
Mesh make_box(const BoxSpec& spec);

}  // namespace zfr::mesh
