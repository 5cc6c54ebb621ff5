#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "zfr/prep/shard.hpp"

namespace zfr::io {

inline constexpr std::uint32_t kShardFileVersion = 1;

void write_shard(const prep::MeshShard& shard, const std::filesystem::path& path);
prep::MeshShard read_shard(const std::filesystem::path& path);

struct ShardIndex {
  int nranks = 0;
  std::uint64_t seed = 0;
  prep::RoutingMode routing = prep::RoutingMode::Modulo;
  std::vector<std::string> files;      ///< relative to the index directory
  std::vector<std::uint64_t> sizes;    ///< bytes per shard file
};

inline constexpr const char* kShardIndexName = "shards.zfri";

/// One file per rank plus the index; creates `dir` if needed.
void write_shards(const std::vector<prep::MeshShard>& shards, const std::filesystem::path& dir);
ShardIndex read_shard_index(const std::filesystem::path& dir);
/// Reads every shard listed in the index, checking sizes and rank fields.
std::vector<prep::MeshShard> read_shards(const std::filesystem::path& dir);
prep::MeshShard read_shard(const std::filesystem::path& dir, int rank);

/// Union of all shards in global numbering, for comparison with the serial mesh.
struct Reassembly {
  std::map<GlobalId, mesh::Cell> cells;
  std::map<GlobalId, Vec3> vertices;
  /// (key, left, right, orientation) of every coupled face, each listed once.
  std::set<std::tuple<mesh::FaceKey, mesh::FaceSide, mesh::FaceSide, int>> coupled;
  std::map<mesh::FaceKey, int> boundary;  ///< face key -> patch
  std::vector<std::string> patch_names;
};

/// Throws MeshError when shards disagree on shared vertices or a cell appears twice.
Reassembly reassemble(const std::vector<prep::MeshShard>& shards);

}  // namespace zfr::io
