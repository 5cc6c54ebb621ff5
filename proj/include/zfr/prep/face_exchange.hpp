#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zfr/mesh/mesh.hpp"
#include "zfr/prep/transport.hpp"

namespace zfr::prep {

enum class RoutingMode { Modulo, Block };

/// Destination rank of a face, chosen from its leading (smallest) vertex id so
/// that both copies of a coupled face land on the same rank.
struct Router {
  RoutingMode mode = RoutingMode::Modulo;
  int nranks = 1;
  GlobalId nvertices = 1;

  int destination(const mesh::FaceKey& key) const;
};

struct MatchToken {
  std::uint64_t key_hash = 0;
  int owner_rank = -1;
  std::uint64_t owner_index = 0;
  friend bool operator==(const MatchToken&, const MatchToken&) = default;
};

struct RemoteCoupling {
  std::size_t local_face = 0;  ///< index into the caller's face list
  int remote_rank = -1;
  MatchToken remote_face_tag;
  int orientation = 0;  ///< maps right-side face points onto left-side points
  bool local_is_left = true;
  mesh::FaceKey key;
  GlobalId remote_cell = -1;
  int remote_local_face = -1;
};

struct RemoteMatch {
  std::vector<RemoteCoupling> couplings;  ///< sorted by local_face
  std::vector<std::size_t> unmatched;     ///< faces with no partner on any rank
  std::size_t duplicates_dropped = 0;
};

/// Pairs locally uncoupled faces across ranks: faces are routed by leading
/// vertex, the routing rank sorts and pairs equal keys, and each owner gets back
/// one coupling per matched face. Collective; throws MeshError on every rank if
/// any rank sees a key owned by more than two faces.
RemoteMatch match_remote_faces(RankContext& ctx, std::span<const mesh::Face> faces, const Router& router);

/// Globally stored boundary face records grouped into per-patch sections.
class BoundaryRecordSource {
 public:
  virtual ~BoundaryRecordSource() = default;
  virtual std::int64_t record_count() const = 0;
  virtual std::vector<mesh::BoundarySection> sections() const = 0;
  /// Records [begin, end) in global numbering.
  virtual std::vector<mesh::FaceCycle> read(std::int64_t begin, std::int64_t end) const = 0;
  virtual int face_vertex_count() const = 0;
};

class MeshBoundarySource final : public BoundaryRecordSource {
 public:
  explicit MeshBoundarySource(const mesh::Mesh& mesh) : mesh_(mesh) {}
  std::int64_t record_count() const override { return mesh_.boundary_record_count(); }
  std::vector<mesh::BoundarySection> sections() const override { return mesh_.sections; }
  std::vector<mesh::FaceCycle> read(std::int64_t begin, std::int64_t end) const override;
  int face_vertex_count() const override { return mesh_.dim == 3 ? 4 : 2; }

 private:
  const mesh::Mesh& mesh_;
};

struct BoundaryAssignment {
  std::size_t face = 0;  ///< index into the caller's face list
  int patch = 0;
};

struct BoundaryResolution {
  std::vector<BoundaryAssignment> assignments;  ///< sorted by face
  std::int64_t records_read = 0;
  std::size_t duplicates_dropped = 0;
};

/// Each rank reads its share of the boundary records (only sections that
/// intersect its read range), then faces and records are routed by leading
/// vertex, matched on the routing rank, and the patch id is returned to the
/// face owner. Collective; throws MeshError on every rank for a dangling record
/// or a face that has neither a partner nor a record.
BoundaryResolution resolve_boundary_faces(RankContext& ctx, std::span<const mesh::Face> faces,
                                          const BoundaryRecordSource& source, const Router& router);

/// Result of the whole per-rank pre-processing chain.
struct LocalTopology {
  std::vector<mesh::Cell> cells;
  std::vector<mesh::Face> internal;
  /// Faces left uncoupled by local matching; couplings and boundary
  /// assignments index into this list.
  std::vector<mesh::Face> interface_faces;
  std::vector<RemoteCoupling> couplings;
  std::vector<BoundaryAssignment> boundary;
  std::size_t duplicates_dropped = 0;
};

LocalTopology preprocess_rank(RankContext& ctx, std::vector<mesh::Cell> cells, const BoundaryRecordSource& source,
                              const Router& router);

}  // namespace zfr::prep
