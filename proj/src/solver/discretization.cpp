#include "zfr/solver/discretization.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "zfr/common/error.hpp"
#include "zfr/prep/nbx.hpp"

namespace zfr::solver {

void SolverConfig::validate() const {
  if (p < 0 || p > fr::kMaxDegree) throw ConfigError("solver.p must be in [0, " + std::to_string(fr::kMaxDegree) + "]");
  if (!(cfl > 0.0)) throw ConfigError("solver.cfl must be positive");
  if (rk != "ssp3") throw ConfigError("solver.rk must be ssp3");
  if (block_kb < 1) throw ConfigError("solver.block_kb must be positive");
  if (workers < 1) throw ConfigError("solver.workers must be positive");
  if (ldg_beta < 0.0 || ldg_beta > 1.0) throw ConfigError("solver.ldg_beta must be in [0, 1]");
  if (ldg_tau < 0.0) throw ConfigError("solver.ldg_tau must be non-negative");
  if (startup_steps < 0) throw ConfigError("solver.startup_steps must be non-negative");
}

bool deterministic_mode(bool configured) {
  const char* env = std::getenv("ZFR_DETERMINISTIC");
  if (env && std::string(env) == "1") return true;
  return configured;
}

fr::Mat3 Discretization::adj_at(std::size_t e, int i) const {
  fr::Mat3 m{};
  const double* a = adjugate.data() + (e * static_cast<std::size_t>(ref.ns) + static_cast<std::size_t>(i)) * 9;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[r][c] = a[3 * r + c];
  return m;
}

std::size_t Discretization::counted_face_points() const {
  std::size_t n = interior_faces.size() + boundary_faces.size();
  for (const auto& f : remote_faces) n += f.local_is_left ? 1 : 0;
  return n * static_cast<std::size_t>(ref.nfp_face);
}

Discretization::Discretization(const prep::MeshShard& shard, int p, const PhysicsConfig& phys,
                               const SolverConfig& config, prep::RankContext* ctx)
    : physics(phys) {
  if (shard.cells.empty()) throw MeshError("rank " + std::to_string(shard.rank) + " owns no cells");
  if (shard.nranks > 1 && (!ctx || ctx->nranks() != shard.nranks))
    throw DomainError("multi-rank shard needs a matching rank context");
  phys.gas.validate();
  const auto kind = shard.cells.front().kind;
  for (const auto& c : shard.cells)
    if (c.kind != kind) throw MeshError("mixed element kinds are not supported by the solver");
  ref = fr::build_reference_element(kind, p);
  dim = ref.dim;
  nv = physics::nvars(dim);
  nelem = shard.cells.size();
  rank = shard.rank;
  nranks = shard.nranks;
  cells = shard.cells;
  const auto ns = static_cast<std::size_t>(ref.ns);
  const auto nfp = static_cast<std::size_t>(ref.nfp);

  std::map<GlobalId, std::size_t> local;
  for (std::size_t e = 0; e < nelem; ++e) {
    cell_ids.push_back(cells[e].id);
    local[cells[e].id] = e;
  }

  adjugate.resize(nelem * ns * 9);
  det.resize(nelem * ns);
  inv_det.resize(nelem * ns);
  neg_inv_det.resize(nelem * ns);
  x.resize(nelem * ns);
  normal.resize(nelem * nfp);
  area.resize(nelem * nfp);
  face_x.resize(nelem * nfp);
  volume.resize(nelem);
  length_scale.resize(nelem);
  double hmin = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < nelem; ++e) {
    const auto verts = shard.cell_coordinates(e);
    const auto g = fr::compute_geometry(verts, ref, cells[e].id);
    for (std::size_t i = 0; i < ns; ++i) {
      const auto k = e * ns + i;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) adjugate[k * 9 + static_cast<std::size_t>(3 * r + c)] = g.adjugate[i][r][c];
      det[k] = g.det[i];
      inv_det[k] = 1.0 / g.det[i];
      neg_inv_det[k] = -1.0 / g.det[i];
      x[k] = g.x[i];
    }
    for (std::size_t f = 0; f < nfp; ++f) {
      normal[e * nfp + f] = g.normal[f];
      area[e * nfp + f] = g.area[f];
      face_x[e * nfp + f] = g.face_x[f];
    }
    volume[e] = g.volume;
    length_scale[e] = g.length_scale();
    hmin = std::min(hmin, length_scale[e]);
  }
  global_min_length = (ctx && ctx->nranks() > 1) ? prep::allreduce_min(*ctx, hmin) : hmin;

  // Sponge coefficients.
  sponge_sigma.assign(nelem * ns, 0.0);
  sponge_b.assign(nelem * static_cast<std::size_t>(nv) * ns, 0.0);
  for (std::size_t e = 0; e < nelem; ++e) {
    for (std::size_t i = 0; i < ns; ++i) {
      for (const auto& z : phys.sponges) {
        const double s = physics::sponge_strength(z, x[e * ns + i]);
        if (s == 0.0) continue;
        sponge_sigma[e * ns + i] += s;
        for (int v = 0; v < nv; ++v) sponge_b[(e * static_cast<std::size_t>(nv) + static_cast<std::size_t>(v)) * ns + i] += s * z.reference[v];
      }
    }
  }

  // Faces.
  for (int o = 0; o < mesh::kOrientationCount; ++o) {
    if (dim == 2 && (o & 5)) continue;  // edges only use the s negation
    perm[static_cast<std::size_t>(o)] = mesh::orientation_permutation(o, ref.n1, dim - 1);
  }
  auto local_of = [&](GlobalId id) {
    auto it = local.find(id);
    if (it == local.end()) throw MeshError("face references non-local cell " + std::to_string(id));
    return it->second;
  };
  for (const auto& f : shard.internal) {
    interior_faces.push_back({local_of(f.left.cell), f.left.local_face, local_of(f.right->cell), f.right->local_face,
                              f.orientation});
  }
  for (const auto& c : shard.couplings) {
    const auto& f = shard.interface_faces.at(c.local_face);
    RemoteFace r;
    r.elem = local_of(f.left.cell);
    r.face = f.left.local_face;
    r.local_is_left = c.local_is_left;
    r.orientation = c.orientation;
    r.rank = c.remote_rank;
    r.key = c.key;
    remote_faces.push_back(r);
  }
  std::map<int, std::size_t> spec_of_patch;
  for (const auto& b : shard.boundary) {
    auto it = spec_of_patch.find(b.patch);
    if (it == spec_of_patch.end()) {
      const auto s = std::find_if(phys.boundaries.begin(), phys.boundaries.end(),
                                  [&](const auto& spec) { return spec.patch == b.patch; });
      if (s == phys.boundaries.end()) {
        const std::string name = b.patch >= 0 && static_cast<std::size_t>(b.patch) < shard.patch_names.size()
                                     ? shard.patch_names[static_cast<std::size_t>(b.patch)]
                                     : std::to_string(b.patch);
        throw ConfigError("no boundary condition for patch '" + name + "'");
      }
      s->validate(dim);
      boundary_specs.push_back(*s);
      it = spec_of_patch.emplace(b.patch, boundary_specs.size() - 1).first;
    }
    const auto& f = shard.interface_faces.at(b.face);
    boundary_faces.push_back({local_of(f.left.cell), f.left.local_face, it->second});
  }
  if (shard.interface_faces.size() != shard.couplings.size() + shard.boundary.size())
    throw MeshError("uncoupled face without boundary assignment");

  halo = build_halo_plan(remote_faces, ref.n1, dim - 1, ref.nfaces);
  // Left-side geometry for faces whose left side lives on another rank.
  std::vector<double> geom(nelem * 4 * nfp);
  for (std::size_t e = 0; e < nelem; ++e) {
    for (std::size_t f = 0; f < nfp; ++f) {
      for (int a = 0; a < 3; ++a) geom[(e * 4 + static_cast<std::size_t>(a)) * nfp + f] = normal[e * nfp + f][a];
      geom[(e * 4 + 3) * nfp + f] = area[e * nfp + f];
    }
  }
  remote_geometry.assign(halo.slots * 4 * static_cast<std::size_t>(ref.nfp_face), 0.0);
  exchange_halo(ctx, halo, geom.data(), 4, remote_geometry.data());

  flux.dim = dim;
  flux.gas = phys.gas;
  flux.riemann = config.riemann;
  flux.viscous = phys.gas.viscous();
  flux.ldg.beta = config.ldg_beta;
  flux.ldg.tau = config.ldg_tau > 0.0 ? config.ldg_tau : physics::default_ldg_penalty(p, global_min_length);
}

}  // namespace zfr::solver
