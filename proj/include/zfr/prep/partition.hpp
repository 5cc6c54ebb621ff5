#pragma once

#include <cstdint>
#include <vector>

#include "zfr/mesh/dual_graph.hpp"

namespace zfr::prep {

/// Weighted graph partition: cells are ordered by breadth-first search from a
/// pseudo-peripheral cell (start picked with `seed`), and the order is cut into
/// contiguous chunks of near-equal weight. Every part is nonempty.
/// Throws DomainError for nparts < 1, nparts > cells, or non-positive weights.
std::vector<int> partition_mesh(const mesh::DualGraph& graph, int nparts, std::uint64_t seed = 0);

/// max(part weight) / mean(part weight).
double partition_imbalance(const mesh::DualGraph& graph, const std::vector<int>& parts, int nparts);

}  // namespace zfr::prep
