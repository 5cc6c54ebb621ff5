#include "zfr/mesh/generate.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "zfr/common/error.hpp"

namespace zfr::mesh {

Mesh make_box(const BoxSpec& spec) {
  const bool three_d = spec.nz > 0;
  const std::array<int, 3> n{spec.nx, spec.ny, three_d ? spec.nz : 1};
  const int naxes = three_d ? 3 : 2;
  for (int a = 0; a < naxes; ++a) {
    if (n[a] < 1) throw DomainError("box needs at least one cell per axis");
    if (spec.periodic[a] && n[a] < 3) throw DomainError("periodic axis needs at least 3 cells");
  }

  std::array<int, 3> nv{1, 1, 1};
  for (int a = 0; a < naxes; ++a) nv[a] = spec.periodic[a] ? n[a] : n[a] + 1;

  Mesh m;
  m.dim = three_d ? 3 : 2;
  for (int a = 0; a < naxes; ++a) {
    if (spec.periodic[a]) m.period[a] = spec.hi[a] - spec.lo[a];
  }

  auto vid = [&](int i, int j, int k) -> GlobalId {
    return static_cast<GlobalId>(i) + static_cast<GlobalId>(nv[0]) * (j + static_cast<GlobalId>(nv[1]) * k);
  };

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  m.vertices.resize(static_cast<std::size_t>(nv[0]) * nv[1] * nv[2]);
  for (int k = 0; k < nv[2]; ++k) {
    for (int j = 0; j < nv[1]; ++j) {
      for (int i = 0; i < nv[0]; ++i) {
        const std::array<int, 3> idx{i, j, k};
        Vec3 x{0.0, 0.0, 0.0};
        bool on_wall = false;
        for (int a = 0; a < naxes; ++a) {
          const double h = (spec.hi[a] - spec.lo[a]) / n[a];
          x[a] = spec.lo[a] + h * idx[a];
          if (!spec.periodic[a] && (idx[a] == 0 || idx[a] == n[a])) on_wall = true;
        }
        if (spec.perturbation > 0.0 && !on_wall) {
          for (int a = 0; a < naxes; ++a) {
            const double h = (spec.hi[a] - spec.lo[a]) / n[a];
            x[a] += spec.perturbation * h * jitter(rng);
          }
        }
        m.vertices[static_cast<std::size_t>(vid(i, j, k))] = x;
      }
    }
  }

  const int nverts = three_d ? 8 : 4;
  const ElementKind kind = three_d ? ElementKind::Hexahedron : ElementKind::Quadrilateral;
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        Cell c;
        c.id = static_cast<GlobalId>(m.cells.size());
        c.kind = kind;
        bool any_image = false;
        std::vector<std::uint8_t> images(nverts, 0);
        for (int v = 0; v < nverts; ++v) {
          const auto r = reference_vertex(kind, v);
          std::array<int, 3> idx{i + (r[0] > 0), j + (r[1] > 0), three_d ? k + (r[2] > 0) : 0};
          for (int a = 0; a < naxes; ++a) {
            if (spec.periodic[a] && idx[a] == n[a]) {
              idx[a] = 0;
              images[v] |= static_cast<std::uint8_t>(1u << a);
              any_image = true;
            }
          }
          c.vertex_ids.push_back(vid(idx[0], idx[1], idx[2]));
        }
        if (any_image) c.images = std::move(images);
        m.cells.push_back(std::move(c));
      }
    }
  }

  // Boundary sections, one patch per non-periodic side.
  struct Side {
    const char* name;
    int axis;
    bool high;
    int local_face;
  };
  const Side sides3[] = {{"xmin", 0, false, 4}, {"xmax", 0, true, 2}, {"ymin", 1, false, 1},
                         {"ymax", 1, true, 3},  {"zmin", 2, false, 0}, {"zmax", 2, true, 5}};
  const Side sides2[] = {{"xmin", 0, false, 3}, {"xmax", 0, true, 1}, {"ymin", 1, false, 0}, {"ymax", 1, true, 2}};
  const std::span<const Side> sides = three_d ? std::span<const Side>(sides3) : std::span<const Side>(sides2);
  for (const auto& side : sides) {
    if (spec.periodic[side.axis]) continue;
    BoundarySection sec;
    sec.patch = static_cast<int>(m.patch_names.size());
    sec.begin = m.boundary_record_count();
    m.patch_names.emplace_back(side.name);
    for (const auto& c : m.cells) {
      const auto pos = static_cast<int>(c.id);
      const std::array<int, 3> idx{pos % n[0], (pos / n[0]) % n[1], pos / (n[0] * n[1])};
      const int want = side.high ? n[side.axis] - 1 : 0;
      if (idx[side.axis] == want) m.boundary_records.push_back(face_cycle(c, side.local_face));
    }
    sec.end = m.boundary_record_count();
    m.sections.push_back(sec);
  }

  if (spec.shuffle) {
    std::vector<GlobalId> perm(m.vertices.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Vec3> moved(m.vertices.size());
    for (std::size_t v = 0; v < perm.size(); ++v) moved[static_cast<std::size_t>(perm[v])] = m.vertices[v];
    m.vertices = std::move(moved);
    for (auto& c : m.cells) {
      for (auto& v : c.vertex_ids) v = perm[static_cast<std::size_t>(v)];
    }
    for (auto& r : m.boundary_records) {
      for (auto& v : r) {
        if (v >= 0) v = perm[static_cast<std::size_t>(v)];
      }
    }
    std::shuffle(m.cells.begin(), m.cells.end(), rng);
    for (std::size_t i = 0; i < m.cells.size(); ++i) m.cells[i].id = static_cast<GlobalId>(i);
  }
  return m;
}

}  // namespace zfr::mesh
