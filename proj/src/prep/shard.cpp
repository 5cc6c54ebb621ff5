#include "zfr/prep/shard.hpp"

#include <algorithm>
#include <mutex>

#include "zfr/common/error.hpp"
#include "zfr/mesh/dual_graph.hpp"
#include "zfr/prep/partition.hpp"

namespace zfr::prep {

std::vector<Vec3> MeshShard::cell_coordinates(std::size_t i) const {
  const auto& cell = cells.at(i);
  mesh::Cell local = cell;
  for (auto& v : local.vertex_ids) {
    const auto it = std::lower_bound(vertex_ids.begin(), vertex_ids.end(), v);
    if (it == vertex_ids.end() || *it != v) throw MeshError("shard lacks vertex " + std::to_string(v));
    v = it - vertex_ids.begin();
  }
  return mesh::cell_coordinates(local, vertices, period);
}

MeshShard make_shard(LocalTopology topo, const mesh::Mesh& mesh, int rank, int nranks, std::uint64_t seed,
                     RoutingMode routing) {
  MeshShard s;
  s.rank = rank;
  s.nranks = nranks;
  s.dim = mesh.dim;
  s.period = mesh.period;
  s.cells = std::move(topo.cells);
  for (const auto& c : s.cells) s.vertex_ids.insert(s.vertex_ids.end(), c.vertex_ids.begin(), c.vertex_ids.end());
  std::sort(s.vertex_ids.begin(), s.vertex_ids.end());
  s.vertex_ids.erase(std::unique(s.vertex_ids.begin(), s.vertex_ids.end()), s.vertex_ids.end());
  for (auto id : s.vertex_ids) {
    if (id < 0 || id >= static_cast<GlobalId>(mesh.vertices.size()))
      throw MeshError("vertex id " + std::to_string(id) + " outside the vertex table");
    s.vertices.push_back(mesh.vertices[static_cast<std::size_t>(id)]);
  }
  s.patch_names = mesh.patch_names;
  s.internal = std::move(topo.internal);
  s.interface_faces = std::move(topo.interface_faces);
  s.couplings = std::move(topo.couplings);
  s.boundary = std::move(topo.boundary);
  s.seed = seed;
  s.routing = routing;
  return s;
}

std::vector<MeshShard> decompose_mesh(const mesh::Mesh& mesh, int nranks, const std::vector<int>& parts,
                                      std::uint64_t seed, RoutingMode routing) {
  if (parts.size() != mesh.cells.size()) throw DomainError("partition size differs from cell count");
  std::vector<std::vector<mesh::Cell>> owned(static_cast<std::size_t>(nranks));
  for (std::size_t c = 0; c < parts.size(); ++c) {
    if (parts[c] < 0 || parts[c] >= nranks) throw DomainError("part id outside [0, nranks)");
    owned[static_cast<std::size_t>(parts[c])].push_back(mesh.cells[c]);
  }
  std::vector<MeshShard> shards(static_cast<std::size_t>(nranks));
  SimCluster::Options opt;
  opt.seed = seed + 1;
  opt.deliver_probability = 1.0;
  SimCluster cluster(nranks, opt);
  const MeshBoundarySource source(mesh);
  const Router router{routing, nranks, static_cast<GlobalId>(mesh.vertices.size())};
  cluster.run([&](RankContext& ctx) {
    const auto r = static_cast<std::size_t>(ctx.rank());
    auto topo = preprocess_rank(ctx, std::move(owned[r]), source, router);
    shards[r] = make_shard(std::move(topo), mesh, ctx.rank(), nranks, seed, routing);
  });
  return shards;
}

std::vector<MeshShard> partition_and_decompose(const mesh::Mesh& mesh, int nranks, std::uint64_t seed,
                                               RoutingMode routing) {
  std::vector<int> parts(mesh.cells.size(), 0);
  if (nranks > 1) {
    const auto internal = mesh::match_local_faces(mesh::build_face_list(mesh.cells)).internal;
    parts = partition_mesh(mesh::build_dual_graph(mesh.cells, internal), nranks, seed);
  }
  return decompose_mesh(mesh, nranks, parts, seed, routing);
}

}  // namespace zfr::prep
