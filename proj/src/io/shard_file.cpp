#include "zfr/io/shard_file.hpp"

#include <cstdio>
#include <string>

#include "container.hpp"
#include "zfr/common/bytes.hpp"
#include "zfr/common/error.hpp"

namespace zfr::io {

namespace {

constexpr std::array<char, 4> kShardMagic{'Z', 'F', 'R', 'S'};
constexpr std::array<char, 4> kIndexMagic{'Z', 'F', 'R', 'I'};
constexpr std::size_t kShardWords = 12;

void put_key(ByteWriter& w, const mesh::FaceKey& k) {
  for (auto v : k.v) w.put<std::int64_t>(v);
  w.put<std::uint8_t>(k.n);
}

mesh::FaceKey get_key(ByteReader& r) {
  mesh::FaceKey k;
  for (auto& v : k.v) v = r.get<std::int64_t>();
  k.n = r.get<std::uint8_t>();
  if (k.n != 2 && k.n != 4) throw FormatError("face key with " + std::to_string(k.n) + " vertices");
  return k;
}

void put_side(ByteWriter& w, const mesh::FaceSide& s) {
  w.put<std::int64_t>(s.cell);
  w.put<std::int32_t>(s.local_face);
}

mesh::FaceSide get_side(ByteReader& r) {
  mesh::FaceSide s;
  s.cell = r.get<std::int64_t>();
  s.local_face = r.get<std::int32_t>();
  return s;
}

void put_face(ByteWriter& w, const mesh::Face& f) {
  put_key(w, f.key);
  put_side(w, f.left);
  w.put<std::uint8_t>(f.right ? 1 : 0);
  if (f.right) put_side(w, *f.right);
  w.put<std::int32_t>(f.orientation);
  for (auto v : f.left_cycle) w.put<std::int64_t>(v);
}

mesh::Face get_face(ByteReader& r) {
  mesh::Face f;
  f.key = get_key(r);
  f.left = get_side(r);
  if (r.get<std::uint8_t>() != 0) f.right = get_side(r);
  f.orientation = r.get<std::int32_t>();
  for (auto& v : f.left_cycle) v = r.get<std::int64_t>();
  return f;
}

std::string shard_name(int rank) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rank_%05d.zfrs", rank);
  return buf;
}

}  // namespace

void write_shard(const prep::MeshShard& s, const std::filesystem::path& path) {
  detail::Container c;
  c.magic = kShardMagic;
  c.version = kShardFileVersion;
  c.header = {static_cast<std::uint64_t>(s.rank),     static_cast<std::uint64_t>(s.nranks),
              static_cast<std::uint64_t>(s.dim),      s.cells.size(),
              s.vertex_ids.size(),                    s.patch_names.size(),
              s.internal.size(),                      s.interface_faces.size(),
              s.couplings.size(),                     s.boundary.size(),
              s.seed,                                 static_cast<std::uint64_t>(s.routing)};
  ByteWriter w;
  for (double x : s.period) w.put(x);
  for (const auto& n : s.patch_names) w.put_string(n);
  for (const auto& cell : s.cells) {
    w.put<std::int64_t>(cell.id);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(cell.kind));
    for (auto v : cell.vertex_ids) w.put<std::int64_t>(v);
    w.put<std::uint8_t>(cell.images.empty() ? 0 : 1);
    for (auto b : cell.images) w.put<std::uint8_t>(b);
  }
  for (std::size_t i = 0; i < s.vertex_ids.size(); ++i) {
    w.put<std::int64_t>(s.vertex_ids[i]);
    for (double x : s.vertices[i]) w.put(x);
  }
  for (const auto& f : s.internal) put_face(w, f);
  for (const auto& f : s.interface_faces) put_face(w, f);
  for (const auto& cp : s.couplings) {
    w.put<std::uint64_t>(cp.local_face);
    w.put<std::int32_t>(cp.remote_rank);
    w.put<std::uint64_t>(cp.remote_face_tag.key_hash);
    w.put<std::int32_t>(cp.remote_face_tag.owner_rank);
    w.put<std::uint64_t>(cp.remote_face_tag.owner_index);
    w.put<std::int32_t>(cp.orientation);
    w.put<std::uint8_t>(cp.local_is_left ? 1 : 0);
    put_key(w, cp.key);
    w.put<std::int64_t>(cp.remote_cell);
    w.put<std::int32_t>(cp.remote_local_face);
  }
  for (const auto& b : s.boundary) {
    w.put<std::uint64_t>(b.face);
    w.put<std::int32_t>(b.patch);
  }
  c.payload = w.take();
  detail::write_container(path, c);
}

prep::MeshShard read_shard(const std::filesystem::path& path) {
  const auto c = detail::read_container(path, kShardMagic, kShardFileVersion);
  if (c.header.size() != kShardWords) throw FormatError(path.string() + ": shard header has wrong length");
  const auto& h = c.header;
  prep::MeshShard s;
  s.rank = static_cast<int>(h[0]);
  s.nranks = static_cast<int>(h[1]);
  s.dim = static_cast<int>(h[2]);
  if (s.nranks < 1 || s.rank >= s.nranks) throw FormatError(path.string() + ": rank outside [0, nranks)");
  if (s.dim != 2 && s.dim != 3) throw FormatError(path.string() + ": dimension not 2 or 3");
  if (h[11] > 1) throw FormatError(path.string() + ": unknown routing mode");
  // Every entity takes at least this many bytes; rejects absurd counts up front.
  const std::uint64_t minimum = 24 + 8 * h[5] + 42 * h[3] + 32 * h[4] + 80 * (h[6] + h[7]) + 82 * h[8] + 12 * h[9];
  if (c.payload.size() < minimum) throw FormatError(path.string() + ": payload shorter than the header counts require");
  s.seed = h[10];
  s.routing = static_cast<prep::RoutingMode>(h[11]);

  ByteReader r(c.payload);
  for (auto& x : s.period) x = r.get<double>();
  s.patch_names.resize(h[5]);
  for (auto& n : s.patch_names) n = r.get_string();
  s.cells.resize(h[3]);
  for (auto& cell : s.cells) {
    cell.id = r.get<std::int64_t>();
    const auto kind = r.get<std::uint8_t>();
    if (kind > 1) throw FormatError(path.string() + ": unknown element kind");
    cell.kind = static_cast<mesh::ElementKind>(kind);
    cell.vertex_ids.resize(static_cast<std::size_t>(mesh::vertex_count(cell.kind)));
    for (auto& v : cell.vertex_ids) v = r.get<std::int64_t>();
    if (r.get<std::uint8_t>() != 0) {
      cell.images.resize(cell.vertex_ids.size());
      for (auto& b : cell.images) b = r.get<std::uint8_t>();
    }
  }
  s.vertex_ids.resize(h[4]);
  s.vertices.resize(h[4]);
  for (std::size_t i = 0; i < s.vertex_ids.size(); ++i) {
    s.vertex_ids[i] = r.get<std::int64_t>();
    for (auto& x : s.vertices[i]) x = r.get<double>();
  }
  s.internal.resize(h[6]);
  for (auto& f : s.internal) f = get_face(r);
  s.interface_faces.resize(h[7]);
  for (auto& f : s.interface_faces) f = get_face(r);
  s.couplings.resize(h[8]);
  for (auto& cp : s.couplings) {
    cp.local_face = r.get<std::uint64_t>();
    if (cp.local_face >= s.interface_faces.size()) throw FormatError(path.string() + ": coupling face out of range");
    cp.remote_rank = r.get<std::int32_t>();
    cp.remote_face_tag.key_hash = r.get<std::uint64_t>();
    cp.remote_face_tag.owner_rank = r.get<std::int32_t>();
    cp.remote_face_tag.owner_index = r.get<std::uint64_t>();
    cp.orientation = r.get<std::int32_t>();
    cp.local_is_left = r.get<std::uint8_t>() != 0;
    cp.key = get_key(r);
    cp.remote_cell = r.get<std::int64_t>();
    cp.remote_local_face = r.get<std::int32_t>();
  }
  s.boundary.resize(h[9]);
  for (auto& b : s.boundary) {
    b.face = r.get<std::uint64_t>();
    b.patch = r.get<std::int32_t>();
    if (b.face >= s.interface_faces.size() || b.patch < 0 || static_cast<std::size_t>(b.patch) >= s.patch_names.size())
      throw FormatError(path.string() + ": boundary assignment out of range");
  }
  if (!r.done()) throw FormatError(path.string() + ": trailing bytes after the shard payload");
  return s;
}

void write_shards(const std::vector<prep::MeshShard>& shards, const std::filesystem::path& dir) {
  if (shards.empty()) throw DomainError("no shards to write");
  std::filesystem::create_directories(dir);
  ShardIndex idx;
  idx.nranks = static_cast<int>(shards.size());
  idx.seed = shards.front().seed;
  idx.routing = shards.front().routing;
  for (const auto& s : shards) {
    if (s.nranks != idx.nranks || s.rank != static_cast<int>(idx.files.size()))
      throw DomainError("shards must be listed in rank order with a common rank count");
    const auto name = shard_name(s.rank);
    write_shard(s, dir / name);
    idx.files.push_back(name);
    idx.sizes.push_back(std::filesystem::file_size(dir / name));
  }
  detail::Container c;
  c.magic = kIndexMagic;
  c.version = kShardFileVersion;
  c.header = {static_cast<std::uint64_t>(idx.nranks), idx.seed, static_cast<std::uint64_t>(idx.routing)};
  ByteWriter w;
  for (std::size_t i = 0; i < idx.files.size(); ++i) {
    w.put_string(idx.files[i]);
    w.put<std::uint64_t>(idx.sizes[i]);
  }
  c.payload = w.take();
  detail::write_container(dir / kShardIndexName, c);
}

ShardIndex read_shard_index(const std::filesystem::path& dir) {
  const auto path = dir / kShardIndexName;
  const auto c = detail::read_container(path, kIndexMagic, kShardFileVersion);
  if (c.header.size() != 3 || c.header[0] == 0 || c.header[2] > 1)
    throw FormatError(path.string() + ": malformed index header");
  ShardIndex idx;
  idx.nranks = static_cast<int>(c.header[0]);
  idx.seed = c.header[1];
  idx.routing = static_cast<prep::RoutingMode>(c.header[2]);
  ByteReader r(c.payload);
  for (int i = 0; i < idx.nranks; ++i) {
    idx.files.push_back(r.get_string());
    idx.sizes.push_back(r.get<std::uint64_t>());
    if (idx.files.back().find('/') != std::string::npos) throw FormatError(path.string() + ": shard name with a path");
  }
  if (!r.done()) throw FormatError(path.string() + ": trailing bytes in index");
  return idx;
}

prep::MeshShard read_shard(const std::filesystem::path& dir, int rank) {
  const auto idx = read_shard_index(dir);
  if (rank < 0 || rank >= idx.nranks) throw DomainError("rank " + std::to_string(rank) + " not in shard index");
  const auto path = dir / idx.files[static_cast<std::size_t>(rank)];
  if (!std::filesystem::exists(path)) throw FormatError(path.string() + ": listed in the index but missing");
  if (std::filesystem::file_size(path) != idx.sizes[static_cast<std::size_t>(rank)])
    throw FormatError(path.string() + ": size differs from the index");
  auto s = read_shard(path);
  if (s.rank != rank || s.nranks != idx.nranks || s.seed != idx.seed || s.routing != idx.routing)
    throw FormatError(path.string() + ": shard metadata disagrees with the index");
  return s;
}

std::vector<prep::MeshShard> read_shards(const std::filesystem::path& dir) {
  const auto idx = read_shard_index(dir);
  std::vector<prep::MeshShard> out;
  for (int r = 0; r < idx.nranks; ++r) out.push_back(read_shard(dir, r));
  return out;
}

Reassembly reassemble(const std::vector<prep::MeshShard>& shards) {
  Reassembly out;
  for (const auto& s : shards) {
    if (out.patch_names.empty()) out.patch_names = s.patch_names;
    if (s.patch_names != out.patch_names) throw MeshError("shards disagree on patch names");
    for (const auto& c : s.cells)
      if (!out.cells.emplace(c.id, c).second) throw MeshError("cell " + std::to_string(c.id) + " on two shards");
    for (std::size_t i = 0; i < s.vertex_ids.size(); ++i) {
      const auto [it, fresh] = out.vertices.emplace(s.vertex_ids[i], s.vertices[i]);
      if (!fresh && it->second != s.vertices[i])
        throw MeshError("vertex " + std::to_string(s.vertex_ids[i]) + " differs between shards");
    }
    for (const auto& f : s.internal) out.coupled.insert({f.key, f.left, *f.right, f.orientation});
    for (const auto& cp : s.couplings) {
      if (!cp.local_is_left) continue;
      const auto& f = s.interface_faces[cp.local_face];
      out.coupled.insert({cp.key, f.left, mesh::FaceSide{cp.remote_cell, cp.remote_local_face}, cp.orientation});
    }
    for (const auto& b : s.boundary) out.boundary[s.interface_faces[b.face].key] = b.patch;
  }
  return out;
}

}  // namespace zfr::io
