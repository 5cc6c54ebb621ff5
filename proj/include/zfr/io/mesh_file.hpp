#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "zfr/mesh/mesh.hpp"

namespace zfr::io {

inline constexpr std::uint32_t kMeshFileVersion = 1;

struct MeshFileHeader {
  std::uint32_t version = kMeshFileVersion;
  int dim = 3;
  std::uint64_t vertices = 0;
  std::uint64_t cells = 0;
  std::uint64_t sections = 0;
  std::uint64_t patches = 0;
  std::uint64_t records = 0;
  /// (kind code, vertices per cell) for every kind that occurs.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> kinds;
};

/// Binary serial mesh ("ZFRM").
void write_mesh(const mesh::Mesh& mesh, const std::filesystem::path& path);

/// Validates magic, version and lengths before reading the payload; throws
/// FormatError on any inconsistency.
mesh::Mesh read_mesh(const std::filesystem::path& path);

MeshFileHeader read_mesh_header(const std::filesystem::path& path);

}  // namespace zfr::io
