#include "zfr/prep/face_exchange.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "zfr/common/error.hpp"
#include "zfr/prep/distribute.hpp"
#include "zfr/prep/nbx.hpp"

namespace zfr::prep {

using mesh::Face;
using mesh::FaceCycle;
using mesh::FaceKey;

int Router::destination(const FaceKey& key) const {
  const GlobalId lead = key.leading();
  if (mode == RoutingMode::Modulo) return static_cast<int>(lead % nranks);
  const auto d = static_cast<__int128>(lead) * nranks / std::max<GlobalId>(nvertices, 1);
  return static_cast<int>(std::clamp<__int128>(d, 0, nranks - 1));
}

std::vector<FaceCycle> MeshBoundarySource::read(std::int64_t begin, std::int64_t end) const {
  if (begin < 0 || end > record_count() || begin > end) throw DomainError("boundary record range out of bounds");
  return {mesh_.boundary_records.begin() + begin, mesh_.boundary_records.begin() + end};
}

namespace {

struct FaceMsg {
  FaceKey key;
  int owner = -1;
  std::uint64_t index = 0;
  GlobalId cell = -1;
  int local_face = -1;
  FaceCycle cycle{};

  auto order() const { return std::tie(key, owner, index); }
};

void put_key(ByteWriter& w, const FaceKey& k) {
  w.put(k.n);
  for (auto v : k.v) w.put(v);
}

FaceKey get_key(ByteReader& r) {
  FaceKey k;
  k.n = r.get<std::uint8_t>();
  for (auto& v : k.v) v = r.get<GlobalId>();
  return k;
}

void put_face(ByteWriter& w, const FaceMsg& f) {
  put_key(w, f.key);
  w.put<std::int32_t>(f.owner);
  w.put(f.index);
  w.put(f.cell);
  w.put<std::int32_t>(f.local_face);
  for (auto v : f.cycle) w.put(v);
}

FaceMsg get_face(ByteReader& r) {
  FaceMsg f;
  f.key = get_key(r);
  f.owner = r.get<std::int32_t>();
  f.index = r.get<std::uint64_t>();
  f.cell = r.get<GlobalId>();
  f.local_face = r.get<std::int32_t>();
  for (auto& v : f.cycle) v = r.get<GlobalId>();
  return f;
}

/// Routes faces by leading vertex; returns received faces sorted with exact
/// duplicates (same key, owner and index) removed.
std::vector<FaceMsg> route_faces(RankContext& ctx, std::span<const Face> faces, const Router& router,
                                 std::size_t& duplicates) {
  std::map<int, ByteWriter> out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const auto& f = faces[i];
    FaceMsg m{f.key, ctx.rank(), i, f.left.cell, f.left.local_face, f.left_cycle};
    put_face(out[router.destination(f.key)], m);
  }
  std::map<int, Bytes> send;
  for (auto& [d, w] : out) send[d] = w.take();
  auto in = nbx_exchange(ctx, send);

  std::vector<FaceMsg> recv;
  for (auto& [src, data] : in) {
    ByteReader r(data);
    while (!r.done()) recv.push_back(get_face(r));
  }
  std::sort(recv.begin(), recv.end(), [](const FaceMsg& a, const FaceMsg& b) { return a.order() < b.order(); });
  const auto before = recv.size();
  recv.erase(std::unique(recv.begin(), recv.end(), [](const FaceMsg& a, const FaceMsg& b) { return a.order() == b.order(); }),
             recv.end());
  duplicates += before - recv.size();
  return recv;
}

/// Collective error agreement: every rank throws if any rank reported an error.
void raise_if_any(RankContext& ctx, const std::string& local_error) {
  Bytes payload(local_error.begin(), local_error.end());
  const auto all = ctx.nranks() == 1 ? std::vector<Bytes>{payload} : allgather(ctx, payload);
  for (std::size_t r = 0; r < all.size(); ++r) {
    if (!all[r].empty()) {
      throw MeshError(std::string(all[r].begin(), all[r].end()) + " (reported by rank " + std::to_string(r) + ")");
    }
  }
}

}  // namespace

RemoteMatch match_remote_faces(RankContext& ctx, std::span<const Face> faces, const Router& router) {
  RemoteMatch result;
  auto recv = route_faces(ctx, faces, router, result.duplicates_dropped);

  // Pair equal keys; answer each owner with its partner or an unmatched notice.
  std::string error;
  std::map<int, ByteWriter> replies;
  auto reply = [&](const FaceMsg& self, const FaceMsg* partner, int orientation, bool self_left) {
    auto& w = replies[self.owner];
    w.put(self.index);
    w.put<std::uint8_t>(partner != nullptr);
    if (!partner) return;
    w.put<std::int32_t>(partner->owner);
    w.put(mesh::hash_key(partner->key));
    w.put(partner->index);
    w.put<std::int32_t>(orientation);
    w.put<std::uint8_t>(self_left);
    w.put(partner->cell);
    w.put<std::int32_t>(partner->local_face);
  };

  std::size_t i = 0;
  while (i < recv.size()) {
    std::size_t j = i + 1;
    while (j < recv.size() && recv[j].key == recv[i].key) ++j;
    if (j - i == 1) {
      reply(recv[i], nullptr, 0, true);
    } else if (j - i == 2) {
      const auto& a = recv[i];
      const auto& b = recv[i + 1];
      if (a.owner == b.owner && error.empty()) {
        error = "face with leading vertex " + std::to_string(a.key.leading()) + " left uncoupled on rank " +
                std::to_string(a.owner);
      }
      const bool a_left = std::tie(a.cell, a.local_face) < std::tie(b.cell, b.local_face);
      const auto& l = a_left ? a : b;
      const auto& r = a_left ? b : a;
      const int o = mesh::face_orientation(l.cycle, r.cycle, l.key.n);
      reply(a, &b, o, a_left);
      reply(b, &a, o, !a_left);
    } else if (error.empty()) {
      error = "non-manifold face shared by " + std::to_string(j - i) + " cells (leading vertex " +
              std::to_string(recv[i].key.leading()) + ")";
    }
    i = j;
  }
  raise_if_any(ctx, error);

  std::map<int, Bytes> send;
  for (auto& [d, w] : replies) send[d] = w.take();
  auto in = nbx_exchange(ctx, send);
  for (auto& [src, data] : in) {
    ByteReader r(data);
    while (!r.done()) {
      const auto index = r.get<std::uint64_t>();
      const bool matched = r.get<std::uint8_t>() != 0;
      if (index >= faces.size()) throw ExchangeError("reply references unknown face");
      if (!matched) {
        result.unmatched.push_back(index);
        continue;
      }
      RemoteCoupling c;
      c.local_face = index;
      c.remote_rank = r.get<std::int32_t>();
      c.remote_face_tag.key_hash = r.get<std::uint64_t>();
      c.remote_face_tag.owner_rank = c.remote_rank;
      c.remote_face_tag.owner_index = r.get<std::uint64_t>();
      c.orientation = r.get<std::int32_t>();
      c.local_is_left = r.get<std::uint8_t>() != 0;
      c.remote_cell = r.get<GlobalId>();
      c.remote_local_face = r.get<std::int32_t>();
      c.key = faces[index].key;
      result.couplings.push_back(c);
    }
  }
  std::sort(result.couplings.begin(), result.couplings.end(),
            [](const RemoteCoupling& a, const RemoteCoupling& b) { return a.local_face < b.local_face; });
  std::sort(result.unmatched.begin(), result.unmatched.end());
  return result;
}

BoundaryResolution resolve_boundary_faces(RankContext& ctx, std::span<const Face> faces,
                                          const BoundaryRecordSource& source, const Router& router) {
  BoundaryResolution result;

  // Cumulative read: only sections overlapping this rank's record range.
  const auto range = distribute_entities(source.record_count(), ctx.nranks(), ctx.rank());
  std::vector<std::pair<FaceKey, int>> bfaces;
  for (const auto& sec : source.sections()) {
    if (!range.intersects(sec.begin, sec.end)) continue;
    const auto b = std::max(range.begin, sec.begin);
    const auto e = std::min(range.end, sec.end);
    for (const auto& cyc : source.read(b, e)) {
      FaceKey k;
      k.n = static_cast<std::uint8_t>(source.face_vertex_count());
      std::copy_n(cyc.begin(), k.n, k.v.begin());
      std::sort(k.v.begin(), k.v.begin() + k.n);
      bfaces.emplace_back(k, sec.patch);
    }
    result.records_read += e - b;
  }

  // Round 1: uncoupled faces to their routing rank.
  auto face_recv = route_faces(ctx, faces, router, result.duplicates_dropped);

  // Round 2: boundary records to the same routing rank.
  std::map<int, ByteWriter> out;
  for (const auto& [k, patch] : bfaces) {
    auto& w = out[router.destination(k)];
    put_key(w, k);
    w.put<std::int32_t>(patch);
  }
  std::map<int, Bytes> send;
  for (auto& [d, w] : out) send[d] = w.take();
  auto in = nbx_exchange(ctx, send);
  std::vector<std::pair<FaceKey, int>> bface_recv;
  for (auto& [src, data] : in) {
    ByteReader r(data);
    while (!r.done()) {
      auto k = get_key(r);
      bface_recv.emplace_back(k, r.get<std::int32_t>());
    }
  }
  std::sort(bface_recv.begin(), bface_recv.end());

  // Match both sorted streams.
  std::string error;
  std::map<int, ByteWriter> replies;
  std::size_t fi = 0;
  for (std::size_t bi = 0; bi < bface_recv.size(); ++bi) {
    const auto& [key, patch] = bface_recv[bi];
    if (bi > 0 && bface_recv[bi - 1].first == key) {
      if (error.empty()) error = "duplicate boundary record (leading vertex " + std::to_string(key.leading()) + ")";
      continue;
    }
    while (fi < face_recv.size() && face_recv[fi].key < key) {
      if (error.empty()) {
        error = "hole in mesh: face of cell " + std::to_string(face_recv[fi].cell) +
                " has neither a partner nor a boundary record";
      }
      ++fi;
    }
    if (fi == face_recv.size() || face_recv[fi].key != key) {
      if (error.empty()) error = "dangling boundary record (leading vertex " + std::to_string(key.leading()) + ")";
      continue;
    }
    auto& w = replies[face_recv[fi].owner];
    w.put(face_recv[fi].index);
    w.put<std::int32_t>(patch);
    ++fi;
  }
  if (fi < face_recv.size() && error.empty()) {
    error = "hole in mesh: face of cell " + std::to_string(face_recv[fi].cell) +
            " has neither a partner nor a boundary record";
  }
  raise_if_any(ctx, error);

  // Round 3: patch ids back to the owners.
  send.clear();
  for (auto& [d, w] : replies) send[d] = w.take();
  auto back = nbx_exchange(ctx, send);
  for (auto& [src, data] : back) {
    ByteReader r(data);
    while (!r.done()) {
      BoundaryAssignment a;
      a.face = r.get<std::uint64_t>();
      a.patch = r.get<std::int32_t>();
      if (a.face >= faces.size()) throw ExchangeError("boundary reply references unknown face");
      result.assignments.push_back(a);
    }
  }
  std::sort(result.assignments.begin(), result.assignments.end(),
            [](const BoundaryAssignment& a, const BoundaryAssignment& b) { return a.face < b.face; });
  return result;
}

LocalTopology preprocess_rank(RankContext& ctx, std::vector<mesh::Cell> cells, const BoundaryRecordSource& source,
                              const Router& router) {
  LocalTopology topo;
  for (const auto& c : cells) mesh::validate_cell(c);
  const auto faces = mesh::build_face_list(cells);
  auto local = mesh::match_local_faces(faces);
  topo.cells = std::move(cells);
  topo.internal = std::move(local.internal);
  topo.interface_faces = std::move(local.uncoupled);

  auto remote = match_remote_faces(ctx, topo.interface_faces, router);
  topo.couplings = std::move(remote.couplings);
  topo.duplicates_dropped = remote.duplicates_dropped;

  std::vector<Face> open;
  open.reserve(remote.unmatched.size());
  for (auto i : remote.unmatched) open.push_back(topo.interface_faces[i]);
  auto bnd = resolve_boundary_faces(ctx, open, source, router);
  topo.duplicates_dropped += bnd.duplicates_dropped;
  for (const auto& a : bnd.assignments) topo.boundary.push_back({remote.unmatched[a.face], a.patch});
  return topo;
}

}  // namespace zfr::prep
