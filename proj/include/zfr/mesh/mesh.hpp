#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zfr/common/types.hpp"

namespace zfr::mesh {

enum class ElementKind : std::uint8_t { Quadrilateral = 0, Hexahedron = 1 };

constexpr int dimension(ElementKind k) { return k == ElementKind::Hexahedron ? 3 : 2; }
constexpr int vertex_count(ElementKind k) { return k == ElementKind::Hexahedron ? 8 : 4; }
constexpr int face_count(ElementKind k) { return k == ElementKind::Hexahedron ? 6 : 4; }
constexpr int face_vertex_count(ElementKind k) { return k == ElementKind::Hexahedron ? 4 : 2; }

/// Local vertex cycle of a face. Position 0 sits at face parameter (-1,-1),
/// 1 at (+1,-1), 2 at (+1,+1), 3 at (-1,+1); edges only use positions 0 and 1.
std::span<const int> local_face_vertices(ElementKind kind, int local_face);

/// Reference-space outward normal of a local face as (axis, sign).
struct ReferenceNormal {
  int axis;
  int sign;
};
ReferenceNormal local_face_normal(ElementKind kind, int local_face);

/// Reference coordinates of local vertex `v` (each component -1 or +1).
std::array<int, 3> reference_vertex(ElementKind kind, int v);

struct Cell {
  GlobalId id = 0;
  ElementKind kind = ElementKind::Hexahedron;
  std::vector<GlobalId> vertex_ids;
  /// Optional periodic image bits per vertex (bit a set: shifted by period[a]).
  std::vector<std::uint8_t> images;
};

/// Throws MeshError when the vertex list does not fit the kind or repeats ids.
void validate_cell(const Cell& cell);

struct FaceKey {
  std::array<GlobalId, 4> v{-1, -1, -1, -1};
  std::uint8_t n = 0;

  GlobalId leading() const { return v[0]; }
  friend auto operator<=>(const FaceKey&, const FaceKey&) = default;
};

std::uint64_t hash_key(const FaceKey& key);

struct FaceSide {
  GlobalId cell = -1;
  int local_face = -1;
  friend auto operator<=>(const FaceSide&, const FaceSide&) = default;
};

using FaceCycle = std::array<GlobalId, 4>;

struct Face {
  FaceKey key;
  FaceSide left;
  std::optional<FaceSide> right;
  /// Symmetry mapping right-side face parameters onto left-side parameters.
  int orientation = 0;
  FaceCycle left_cycle{-1, -1, -1, -1};
};

FaceKey canonical_face_key(const Cell& cell, int local_face);
FaceCycle face_cycle(const Cell& cell, int local_face);

/// One entry per (cell, local face), sorted by key then owner.
std::vector<Face> build_face_list(std::span<const Cell> cells);

struct LocalMatch {
  std::vector<Face> internal;
  std::vector<Face> uncoupled;
};

/// Couples adjacent equal keys. The owner with the smaller (cell, local face)
/// becomes the left side. Throws MeshError on a key shared by more than two faces.
LocalMatch match_local_faces(std::span<const Face> sorted_faces);

/// Face symmetries: bit 2 swaps (s,t), bit 1 negates s, bit 0 negates t,
/// applied to right-side parameters to obtain left-side parameters.
/// Edges use bit 1 only.
constexpr int kOrientationCount = 8;

/// Finds the symmetry that maps the right cycle onto the left cycle.
/// Throws MeshError if the two cycles do not describe the same face.
int face_orientation(const FaceCycle& left, const FaceCycle& right, int face_vertices);

/// Index map right point -> left point for `points_per_edge`^(face_dim) face points.
std::vector<int> orientation_permutation(int orientation, int points_per_edge, int face_dim);

struct BoundarySection {
  int patch = 0;
  GlobalId begin = 0;  ///< first global boundary record (inclusive)
  GlobalId end = 0;    ///< exclusive
};

/// Serial unstructured mesh. Boundary records are face vertex lists grouped in
/// contiguous sections, one or more per patch.
struct Mesh {
  int dim = 3;
  std::vector<Vec3> vertices;
  Vec3 period{0.0, 0.0, 0.0};
  std::vector<Cell> cells;
  std::vector<std::string> patch_names;
  std::vector<BoundarySection> sections;
  std::vector<FaceCycle> boundary_records;

  GlobalId boundary_record_count() const { return static_cast<GlobalId>(boundary_records.size()); }
  int patch_of_record(GlobalId record) const;
};

/// Physical coordinates of a cell's vertices with periodic images applied.
std::vector<Vec3> cell_coordinates(const Cell& cell, std::span<const Vec3> vertices, const Vec3& period);

}  // namespace zfr::mesh
