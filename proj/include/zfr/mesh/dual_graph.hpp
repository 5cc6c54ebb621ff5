#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zfr/mesh/mesh.hpp"

namespace zfr::mesh {

/// Partition weight per element kind.
struct WeightTable {
  int quadrilateral = 1;
  int hexahedron = 1;

  int weight(ElementKind k) const { return k == ElementKind::Hexahedron ? hexahedron : quadrilateral; }
};

/// Cell adjacency through shared faces. Indices are positions in the cell span
/// the graph was built from.
struct DualGraph {
  std::vector<std::vector<std::int64_t>> adjacency;
  std::vector<int> weights;

  std::size_t size() const { return adjacency.size(); }
  std::size_t edge_count() const;
};

DualGraph build_dual_graph(std::span<const Cell> cells, std::span<const Face> internal_faces,
                           const WeightTable& weights = {});

}  // namespace zfr::mesh
