#include "zfr/mesh/mesh.hpp"

#include <algorithm>
#include <string>

#include "zfr/common/error.hpp"

namespace zfr::mesh {

namespace {

constexpr int kQuadFaces[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
constexpr ReferenceNormal kQuadNormals[4] = {{1, -1}, {0, 1}, {1, 1}, {0, -1}};

constexpr int kHexFaces[6][4] = {{0, 1, 2, 3}, {0, 1, 5, 4}, {1, 2, 6, 5},
                                 {3, 2, 6, 7}, {0, 3, 7, 4}, {4, 5, 6, 7}};
constexpr ReferenceNormal kHexNormals[6] = {{2, -1}, {1, -1}, {0, 1}, {1, 1}, {0, -1}, {2, 1}};

constexpr int kCorner[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};

void check_face(ElementKind kind, int local_face) {
  if (local_face < 0 || local_face >= face_count(kind)) {
    throw DomainError("local face " + std::to_string(local_face) + " out of range for " +
                      (kind == ElementKind::Hexahedron ? "hexahedron" : "quadrilateral"));
  }
}

std::array<int, 2> apply_symmetry(int orientation, int s, int t) {
  if (orientation & 4) std::swap(s, t);
  if (orientation & 2) s = -s;
  if (orientation & 1) t = -t;
  return {s, t};
}

int corner_index(int s, int t) {
  for (int k = 0; k < 4; ++k) {
    if (kCorner[k][0] == s && kCorner[k][1] == t) return k;
  }
  return -1;
}

}  // namespace

std::span<const int> local_face_vertices(ElementKind kind, int local_face) {
  check_face(kind, local_face);
  if (kind == ElementKind::Hexahedron) return {kHexFaces[local_face], 4};
  return {kQuadFaces[local_face], 2};
}

ReferenceNormal local_face_normal(ElementKind kind, int local_face) {
  check_face(kind, local_face);
  return kind == ElementKind::Hexahedron ? kHexNormals[local_face] : kQuadNormals[local_face];
}

std::array<int, 3> reference_vertex(ElementKind kind, int v) {
  // Tensor-product ordering: counter-clockwise in the (xi, eta) plane, bottom layer first.
  static constexpr int kPlanar[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  if (v < 0 || v >= vertex_count(kind)) throw DomainError("reference vertex out of range");
  const int q = v % 4;
  const int z = kind == ElementKind::Hexahedron ? (v < 4 ? -1 : 1) : 0;
  return {kPlanar[q][0], kPlanar[q][1], z};
}

void validate_cell(const Cell& cell) {
  const auto expected = static_cast<std::size_t>(vertex_count(cell.kind));
  if (cell.vertex_ids.size() != expected) {
    throw MeshError("cell " + std::to_string(cell.id) + ": expected " + std::to_string(expected) +
                    " vertices, got " + std::to_string(cell.vertex_ids.size()));
  }
  if (!cell.images.empty() && cell.images.size() != expected) {
    throw MeshError("cell " + std::to_string(cell.id) + ": image list length mismatch");
  }
  auto sorted = cell.vertex_ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw MeshError("cell " + std::to_string(cell.id) + ": repeated vertex id");
  }
}

std::uint64_t hash_key(const FaceKey& key) {
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < key.n; ++i) {
    auto x = static_cast<std::uint64_t>(key.v[i]);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

FaceCycle face_cycle(const Cell& cell, int local_face) {
  const auto local = local_face_vertices(cell.kind, local_face);
  FaceCycle cycle{-1, -1, -1, -1};
  for (std::size_t i = 0; i < local.size(); ++i) cycle[i] = cell.vertex_ids.at(local[i]);
  return cycle;
}

FaceKey canonical_face_key(const Cell& cell, int local_face) {
  const auto cycle = face_cycle(cell, local_face);
  FaceKey key;
  key.n = static_cast<std::uint8_t>(face_vertex_count(cell.kind));
  std::copy_n(cycle.begin(), key.n, key.v.begin());
  std::sort(key.v.begin(), key.v.begin() + key.n);
  return key;
}

std::vector<Face> build_face_list(std::span<const Cell> cells) {
  std::vector<Face> faces;
  std::size_t total = 0;
  for (const auto& c : cells) total += static_cast<std::size_t>(face_count(c.kind));
  faces.reserve(total);
  for (const auto& c : cells) {
    for (int lf = 0; lf < face_count(c.kind); ++lf) {
      Face f;
      f.key = canonical_face_key(c, lf);
      f.left = {c.id, lf};
      f.left_cycle = face_cycle(c, lf);
      faces.push_back(f);
    }
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.left < b.left;
  });
  return faces;
}

LocalMatch match_local_faces(std::span<const Face> sorted) {
  LocalMatch out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j].key == sorted[i].key) ++j;
    const std::size_t run = j - i;
    if (run > 2) {
      throw MeshError("non-manifold face shared by " + std::to_string(run) + " cells (leading vertex " +
                      std::to_string(sorted[i].key.leading()) + ")");
    }
    if (run == 1) {
      out.uncoupled.push_back(sorted[i]);
    } else {
      const Face& a = sorted[i].left < sorted[i + 1].left ? sorted[i] : sorted[i + 1];
      const Face& b = sorted[i].left < sorted[i + 1].left ? sorted[i + 1] : sorted[i];
      if (a.left.cell == b.left.cell) {
        throw MeshError("cell " + std::to_string(a.left.cell) + " is coupled to itself");
      }
      Face f = a;
      f.right = b.left;
      f.orientation = face_orientation(a.left_cycle, b.left_cycle, a.key.n);
      out.internal.push_back(f);
    }
    i = j;
  }
  return out;
}

int face_orientation(const FaceCycle& left, const FaceCycle& right, int face_vertices) {
  if (face_vertices == 2) {
    if (left[0] == right[0] && left[1] == right[1]) return 0;
    if (left[0] == right[1] && left[1] == right[0]) return 2;
    throw MeshError("edge cycles do not match");
  }
  for (int o = 0; o < kOrientationCount; ++o) {
    bool ok = true;
    for (int k = 0; k < 4 && ok; ++k) {
      const auto st = apply_symmetry(o, kCorner[k][0], kCorner[k][1]);
      ok = right[k] == left[corner_index(st[0], st[1])];
    }
    if (ok) return o;
  }
  throw MeshError("face cycles do not match");
}

std::vector<int> orientation_permutation(int orientation, int n, int face_dim) {
  if (orientation < 0 || orientation >= kOrientationCount) throw DomainError("bad orientation");
  if (face_dim == 1) {
    if (orientation & ~2) throw DomainError("edge orientation must be 0 or 2");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = (orientation & 2) ? n - 1 - i : i;
    return perm;
  }
  std::vector<int> perm(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = i, b = j;
      if (orientation & 4) std::swap(a, b);
      if (orientation & 2) a = n - 1 - a;
      if (orientation & 1) b = n - 1 - b;
      perm[i + n * j] = a + n * b;
    }
  }
  return perm;
}

int Mesh::patch_of_record(GlobalId record) const {
  for (const auto& s : sections) {
    if (record >= s.begin && record < s.end) return s.patch;
  }
  throw DomainError("boundary record " + std::to_string(record) + " not in any section");
}

std::vector<Vec3> cell_coordinates(const Cell& cell, std::span<const Vec3> vertices, const Vec3& period) {
  std::vector<Vec3> xs(cell.vertex_ids.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xs[k] = vertices[static_cast<std::size_t>(cell.vertex_ids[k])];
    if (!cell.images.empty()) {
      for (int a = 0; a < 3; ++a) {
        if (cell.images[k] & (1u << a)) xs[k][a] += period[a];
      }
    }
  }
  return xs;
}

}  // namespace zfr::mesh
