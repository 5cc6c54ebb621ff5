#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zfr/mesh/mesh.hpp"
#include "zfr/prep/cluster.hpp"
#include "zfr/prep/face_exchange.hpp"

namespace zfr::prep {

/// Everything one rank needs to run the solver: its cells, the vertices they
/// reference (sorted by global id), and the face topology from pre-processing.
struct MeshShard {
  int rank = 0;
  int nranks = 1;
  int dim = 3;
  Vec3 period{0.0, 0.0, 0.0};
  std::vector<mesh::Cell> cells;
  std::vector<GlobalId> vertex_ids;
  std::vector<Vec3> vertices;
  std::vector<std::string> patch_names;
  std::vector<mesh::Face> internal;
  std::vector<mesh::Face> interface_faces;
  std::vector<RemoteCoupling> couplings;
  std::vector<BoundaryAssignment> boundary;
  std::uint64_t seed = 0;
  RoutingMode routing = RoutingMode::Modulo;

  /// Physical vertex coordinates of local cell `i` with periodic images applied.
  std::vector<Vec3> cell_coordinates(std::size_t i) const;
};

/// Assembles a shard from pre-processing output, copying the referenced
/// vertices out of the serial vertex table.
MeshShard make_shard(LocalTopology topo, const mesh::Mesh& mesh, int rank, int nranks, std::uint64_t seed,
                     RoutingMode routing);

/// Runs the distributed pre-processing chain on in-process ranks, rank r
/// owning the cells with parts[c] == r. Returns one shard per rank.
std::vector<MeshShard> decompose_mesh(const mesh::Mesh& mesh, int nranks, const std::vector<int>& parts,
                                      std::uint64_t seed = 0, RoutingMode routing = RoutingMode::Modulo);

/// Partitions with partition_mesh and then decomposes.
std::vector<MeshShard> partition_and_decompose(const mesh::Mesh& mesh, int nranks, std::uint64_t seed = 0,
                                               RoutingMode routing = RoutingMode::Modulo);

}  // namespace zfr::prep
