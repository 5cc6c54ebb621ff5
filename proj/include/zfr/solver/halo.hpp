#pragma once

#include <cstddef>
#include <vector>

#include "zfr/mesh/mesh.hpp"
#include "zfr/perf/ledger.hpp"
#include "zfr/prep/transport.hpp"

namespace zfr::solver {

/// One face shared with another rank, seen from this rank.
struct RemoteFace {
  std::size_t elem = 0;
  int face = 0;  ///< local face of `elem`
  bool local_is_left = true;
  int orientation = 0;
  int rank = -1;
  mesh::FaceKey key;
  std::size_t slot = 0;  ///< position in the halo buffers
};

/// Pack and unpack instructions for every remote face. Both sides of a face
/// list it at the same position in their per-neighbor sequence (sorted by
/// face key), so packing on one side and unpacking on the other is a pure
/// reindexing by the face symmetry.
struct HaloPlan {
  struct Entry {
    std::size_t elem = 0;
    int face = 0;
    std::size_t slot = 0;
    /// unpack[q]: received point copied into local face point q.
    std::vector<int> unpack;
  };
  struct Neighbor {
    int rank = -1;
    std::vector<Entry> entries;
  };
  std::vector<Neighbor> neighbors;
  std::size_t slots = 0;
  int nfp = 0;       ///< flux points per element
  int nfp_face = 0;  ///< flux points per face
};

/// Assigns slots (rewriting `faces[i].slot`) and builds the plan.
/// `points_per_edge` is the flux points per face edge.
HaloPlan build_halo_plan(std::vector<RemoteFace>& faces, int points_per_edge, int face_dim, int nfaces_per_elem);

/// Sends this rank's face-point values of `local` (layout [elem][ncomp][nfp])
/// and fills `remote` (layout [slot][ncomp][nfp_face]) with the partner's
/// values in local point order. Collective over all ranks; a single rank or a
/// null context is a no-op.
void exchange_halo(prep::RankContext* ctx, const HaloPlan& plan, const double* local, int ncomp, double* remote,
                   perf::KernelCounters* counters = nullptr);

}  // namespace zfr::solver
