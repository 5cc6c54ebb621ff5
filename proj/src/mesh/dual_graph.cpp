#include "zfr/mesh/dual_graph.hpp"

#include <algorithm>
#include <unordered_map>

#include "zfr/common/error.hpp"

namespace zfr::mesh {

std::size_t DualGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adjacency) twice += a.size();
  return twice / 2;
}

DualGraph build_dual_graph(std::span<const Cell> cells, std::span<const Face> internal_faces,
                           const WeightTable& weights) {
  std::unordered_map<GlobalId, std::int64_t> index;
  index.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) index.emplace(cells[i].id, static_cast<std::int64_t>(i));

  DualGraph g;
  g.adjacency.resize(cells.size());
  g.weights.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) g.weights[i] = weights.weight(cells[i].kind);

  for (const auto& f : internal_faces) {
    if (!f.right) continue;
    const auto a = index.find(f.left.cell);
    const auto b = index.find(f.right->cell);
    if (a == index.end() || b == index.end()) throw MeshError("internal face references unknown cell");
    if (a->second == b->second) continue;
    g.adjacency[a->second].push_back(b->second);
    g.adjacency[b->second].push_back(a->second);
  }
  // Periodic meshes may couple the same pair of cells through several faces.
  for (auto& adj : g.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

}  // namespace zfr::mesh
