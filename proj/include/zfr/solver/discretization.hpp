#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "zfr/fr/geometry.hpp"
#include "zfr/fr/reference_element.hpp"
#include "zfr/prep/shard.hpp"
#include "zfr/solver/config.hpp"
#include "zfr/solver/halo.hpp"
#include "zfr/solver/pointwise.hpp"

namespace zfr::solver {

struct InteriorFace {
  std::size_t left = 0;
  int left_face = 0;
  std::size_t right = 0;
  int right_face = 0;
  int orientation = 0;
};

struct BoundaryFace {
  std::size_t elem = 0;
  int face = 0;
  std::size_t spec = 0;  ///< index into Discretization::boundary_specs
};

/// Immutable per-rank data of the discretized shard: reference element,
/// geometry at solution and flux points, face lists and the halo plan.
/// Field arrays use [elem][var][point] with points innermost.
class Discretization {
 public:
  /// Collective when the shard spans several ranks (`ctx` must then be the
  /// rank's context): exchanges left-side face geometry and the global minimum
  /// length scale. Throws ConfigError when a patch with boundary faces has no
  /// boundary spec, GeometryError for an inverted cell.
  Discretization(const prep::MeshShard& shard, int p, const PhysicsConfig& physics, const SolverConfig& config,
                 prep::RankContext* ctx);

  fr::ReferenceElement ref;
  int dim = 2;
  int nv = 4;
  std::size_t nelem = 0;
  int rank = 0;
  int nranks = 1;
  std::vector<GlobalId> cell_ids;
  std::vector<mesh::Cell> cells;

  // Solution points, [elem][point] (adjugate rows: 9 entries per point).
  std::vector<double> adjugate;
  std::vector<double> det;
  std::vector<double> inv_det;
  std::vector<double> neg_inv_det;
  std::vector<Vec3> x;
  // Flux points, [elem][point].
  std::vector<Vec3> normal;
  std::vector<double> area;
  std::vector<Vec3> face_x;
  // Per element.
  std::vector<double> volume;
  std::vector<double> length_scale;
  double global_min_length = 0.0;

  // Sponge source as -sigma q + b.
  std::vector<double> sponge_sigma;  ///< [elem][point]
  std::vector<double> sponge_b;      ///< [elem][var][point]

  std::vector<InteriorFace> interior_faces;
  std::vector<RemoteFace> remote_faces;
  std::vector<BoundaryFace> boundary_faces;
  std::vector<physics::BoundarySpec> boundary_specs;
  std::array<std::vector<int>, mesh::kOrientationCount> perm;  ///< right point -> left point
  HaloPlan halo;
  /// Left-side unit normal and area per remote face point, [slot][4][point],
  /// valid for faces where this rank holds the right side.
  std::vector<double> remote_geometry;

  FluxSetup flux;
  PhysicsConfig physics;

  fr::Mat3 adj_at(std::size_t e, int i) const;
  std::size_t field_size() const { return nelem * static_cast<std::size_t>(nv * ref.ns); }
  /// Face point pairs whose common flux this rank accounts for (remote faces
  /// count on the left side only).
  std::size_t counted_face_points() const;
};

}  // namespace zfr::solver
