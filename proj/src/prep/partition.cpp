#include "zfr/prep/partition.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "zfr/common/error.hpp"

namespace zfr::prep {

namespace {

/// BFS from `start` restricted to unvisited cells; appends to `order` and
/// returns the last (farthest) cell reached.
std::int64_t bfs(const mesh::DualGraph& g, std::int64_t start, std::vector<char>& visited,
                 std::vector<std::int64_t>& order) {
  const auto first = order.size();
  visited[start] = 1;
  order.push_back(start);
  for (auto i = first; i < order.size(); ++i) {
    for (auto nb : g.adjacency[order[i]]) {
      if (!visited[nb]) {
        visited[nb] = 1;
        order.push_back(nb);
      }
    }
  }
  return order.back();
}

/// Component-wise BFS order; each component starts from a pseudo-peripheral cell.
std::vector<std::int64_t> peripheral_order(const mesh::DualGraph& g, std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(g.size());
  std::vector<char> done(n, 0);
  std::vector<std::int64_t> order;
  order.reserve(n);
  std::mt19937_64 rng(seed);
  std::int64_t next_unvisited = 0;
  bool first_component = true;
  while (static_cast<std::int64_t>(order.size()) < n) {
    while (done[next_unvisited]) ++next_unvisited;
    std::int64_t start = next_unvisited;
    if (first_component) {
      // Random seed cell inside the first component.
      std::vector<char> probe = done;
      std::vector<std::int64_t> comp;
      bfs(g, start, probe, comp);
      start = comp[std::uniform_int_distribution<std::size_t>(0, comp.size() - 1)(rng)];
      first_component = false;
    }
    // Two sweeps toward the far end give a pseudo-peripheral start.
    for (int sweep = 0; sweep < 2; ++sweep) {
      std::vector<char> probe = done;
      std::vector<std::int64_t> comp;
      start = bfs(g, start, probe, comp);
    }
    bfs(g, start, done, order);
  }
  return order;
}

}  // namespace

std::vector<int> partition_mesh(const mesh::DualGraph& graph, int nparts, std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(graph.size());
  if (nparts < 1) throw DomainError("nparts must be >= 1");
  if (nparts > n) {
    throw DomainError("cannot split " + std::to_string(n) + " cells into " + std::to_string(nparts) + " parts");
  }
  for (int w : graph.weights) {
    if (w <= 0) throw DomainError("partition weights must be positive");
  }
  const auto order = peripheral_order(graph, seed);
  const double total = std::accumulate(graph.weights.begin(), graph.weights.end(), 0.0);

  std::vector<int> parts(n, 0);
  double prefix = 0.0;
  int prev = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto c = order[i];
    const double w = graph.weights[c];
    int p = static_cast<int>((prefix + 0.5 * w) * nparts / total);
    prefix += w;
    // Keep parts contiguous along the order and leave room for the remaining ones.
    p = std::max<std::int64_t>(p, nparts - (n - i));
    p = i == 0 ? 0 : std::clamp(p, prev, prev + 1);
    parts[c] = p;
    prev = p;
  }
  return parts;
}

double partition_imbalance(const mesh::DualGraph& graph, const std::vector<int>& parts, int nparts) {
  std::vector<double> load(nparts, 0.0);
  for (std::size_t c = 0; c < parts.size(); ++c) load[parts[c]] += graph.weights[c];
  const double total = std::accumulate(load.begin(), load.end(), 0.0);
  return *std::max_element(load.begin(), load.end()) / (total / nparts);
}

}  // namespace zfr::prep
