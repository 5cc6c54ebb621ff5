#include "zfr/io/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zfr/fr/geometry.hpp"
#include "zfr/physics/state.hpp"

namespace zfr::io {

namespace {

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write to " + path.string() + " failed");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

physics::State<double> state_at(const std::vector<double>& q, std::size_t e, int nv, int ns,
                                 const double* weights) {
  physics::State<double> s{};
  const double* base = q.data() + e * static_cast<std::size_t>(nv * ns);
  for (int v = 0; v < nv; ++v) {
    double acc = 0.0;
    for (int k = 0; k < ns; ++k) acc += weights[k] * base[v * ns + k];
    s[v] = acc;
  }
  return s;
}

}  // namespace

SolutionSample sample_solution(const prep::MeshShard& shard, const solver::Discretization& disc,
                               const std::vector<double>& q, const physics::GasModel& gas, int order,
                               bool q_criterion) {
  if (order < 1) throw DomainError("output order must be at least 1");
  if (q.size() != disc.field_size()) throw DomainError("state size does not match the discretization");
  const auto& ref = disc.ref;
  const int dim = disc.dim, nv = disc.nv, ns = ref.ns;
  const int m = order + 1;
  const int npe = dim == 3 ? m * m * m : m * m;

  std::vector<Vec3> xi(static_cast<std::size_t>(npe));
  for (int idx = 0; idx < npe; ++idx) {
    const int c[3] = {idx % m, (idx / m) % m, idx / (m * m)};
    for (int a = 0; a < dim; ++a) xi[static_cast<std::size_t>(idx)][a] = -1.0 + 2.0 * c[a] / order;
  }
  const fr::Matrix E = fr::evaluation_matrix(ref, xi);

  SolutionSample s;
  s.dim = dim;
  s.order = order;
  const std::size_t total = disc.nelem * static_cast<std::size_t>(npe);
  s.points.reserve(total);
  s.rho.reserve(total);
  s.p.reserve(total);
  s.T.reserve(total);
  s.u.reserve(total);

  // Velocity gradient at solution points: du_c/dx_b = sum_a adj(a,b)/|J| du_c/dxi_a.
  std::vector<double> vel(static_cast<std::size_t>(3 * ns)), grad(static_cast<std::size_t>(9 * ns));
  for (std::size_t e = 0; e < disc.nelem; ++e) {
    const auto verts = shard.cell_coordinates(e);
    if (q_criterion) {
      for (int k = 0; k < ns; ++k) {
        const double* base = q.data() + e * static_cast<std::size_t>(nv * ns);
        for (int c = 0; c < 3; ++c) vel[static_cast<std::size_t>(c * ns + k)] = c < dim ? base[(1 + c) * ns + k] / base[k] : 0.0;
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      for (int k = 0; k < ns; ++k) {
        const auto adj = disc.adj_at(e, k);
        const double inv = 1.0 / disc.det[e * static_cast<std::size_t>(ns) + static_cast<std::size_t>(k)];
        for (int c = 0; c < dim; ++c) {
          double dxi[3] = {0.0, 0.0, 0.0};
          for (int a = 0; a < dim; ++a)
            for (int j = 0; j < ns; ++j) dxi[a] += ref.deriv[static_cast<std::size_t>(a)](k, j) * vel[static_cast<std::size_t>(c * ns + j)];
          for (int b = 0; b < dim; ++b) {
            double g = 0.0;
            for (int a = 0; a < dim; ++a) g += adj[a][b] * dxi[a];
            grad[static_cast<std::size_t>((c * 3 + b) * ns + k)] = g * inv;
          }
        }
      }
    }
    const std::size_t first = s.points.size();
    for (int idx = 0; idx < npe; ++idx) {
      const double* w = &E.data[static_cast<std::size_t>(idx) * static_cast<std::size_t>(ns)];
      const auto st = state_at(q, e, nv, ns, w);
      physics::Primitive<double> pr;
      try {
        pr = physics::to_primitive(st, dim, gas);
      } catch (const StateError& err) {
        throw StateError(std::string(err.what()) + " at an output point", disc.cell_ids[e]);
      }
      s.points.push_back(fr::map_point(ref.kind, verts, xi[static_cast<std::size_t>(idx)]));
      s.rho.push_back(pr.rho);
      s.p.push_back(pr.p);
      s.T.push_back(physics::temperature(pr, gas));
      std::array<double, 3> u{0.0, 0.0, 0.0};
      for (int a = 0; a < dim; ++a) u[static_cast<std::size_t>(a)] = pr.u[static_cast<std::size_t>(a)];
      s.u.push_back(u);
      if (q_criterion) {
        double g[3][3] = {};
        for (int c = 0; c < dim; ++c)
          for (int b = 0; b < dim; ++b) {
            double acc = 0.0;
            const double* row = &grad[static_cast<std::size_t>((c * 3 + b) * ns)];
            for (int k = 0; k < ns; ++k) acc += w[k] * row[k];
            g[c][b] = acc;
          }
        // Q = (|Omega|^2 - |S|^2) / 2 = -(1/2) sum_{c,b} g_cb g_bc.
        double qc = 0.0;
        for (int c = 0; c < 3; ++c)
          for (int b = 0; b < 3; ++b) qc -= 0.5 * g[c][b] * g[b][c];
        s.q_criterion.push_back(qc);
      }
    }
    const auto at = [&](int i, int j, int k) { return first + static_cast<std::size_t>(i + m * (j + m * k)); };
    for (int k = 0; k < (dim == 3 ? order : 1); ++k)
      for (int j = 0; j < order; ++j)
        for (int i = 0; i < order; ++i) {
          std::array<std::size_t, 8> c{};
          c[0] = at(i, j, k);
          c[1] = at(i + 1, j, k);
          c[2] = at(i + 1, j + 1, k);
          c[3] = at(i, j + 1, k);
          if (dim == 3) {
            c[4] = at(i, j, k + 1);
            c[5] = at(i + 1, j, k + 1);
            c[6] = at(i + 1, j + 1, k + 1);
            c[7] = at(i, j + 1, k + 1);
          }
          s.subcells.push_back(c);
        }
  }
  return s;
}

std::string vtk_text(const SolutionSample& s, const std::string& title) {
  std::ostringstream out;
  const std::size_t np = s.points.size();
  const int nc = s.dim == 3 ? 8 : 4;
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (const auto& x : s.points) out << num(x[0]) << ' ' << num(x[1]) << ' ' << num(x[2]) << '\n';
  out << "CELLS " << s.subcells.size() << ' ' << s.subcells.size() * static_cast<std::size_t>(nc + 1) << '\n';
  for (const auto& c : s.subcells) {
    out << nc;
    for (int k = 0; k < nc; ++k) out << ' ' << c[static_cast<std::size_t>(k)];
    out << '\n';
  }
  out << "CELL_TYPES " << s.subcells.size() << '\n';
  for (std::size_t i = 0; i < s.subcells.size(); ++i) out << (s.dim == 3 ? 12 : 9) << '\n';
  out << "POINT_DATA " << np << '\n';
  const auto scalar = [&](const char* name, const std::vector<double>& v) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) out << num(x) << '\n';
  };
  scalar("rho", s.rho);
  out << "VECTORS u double\n";
  for (const auto& u : s.u) out << num(u[0]) << ' ' << num(u[1]) << ' ' << num(u[2]) << '\n';
  scalar("p", s.p);
  scalar("T", s.T);
  if (!s.q_criterion.empty()) scalar("Q", s.q_criterion);
  return out.str();
}

void write_vtk(const SolutionSample& s, const std::filesystem::path& path) { write_text(vtk_text(s), path); }

double isentropic_mach(double p, double p0, double gamma) {
  if (!(p > 0.0) || !(p0 > 0.0)) throw DomainError("isentropic Mach needs positive pressures");
  const double r = std::pow(p0 / p, (gamma - 1.0) / gamma) - 1.0;
  return r > 0.0 ? std::sqrt(2.0 / (gamma - 1.0) * r) : 0.0;
}

std::vector<SurfacePoint> sample_surface(const prep::MeshShard& shard, const solver::Discretization& disc,
                                         const std::vector<double>& q, const physics::GasModel& gas,
                                         const std::string& patch, double p0) {
  const auto it = std::find(shard.patch_names.begin(), shard.patch_names.end(), patch);
  if (it == shard.patch_names.end()) throw ConfigError("unknown surface patch '" + patch + "'");
  const int pid = static_cast<int>(it - shard.patch_names.begin());
  const auto& ref = disc.ref;
  const int nv = disc.nv, ns = ref.ns;
  std::vector<SurfacePoint> out;
  for (const auto& bf : disc.boundary_faces) {
    if (disc.boundary_specs[bf.spec].patch != pid) continue;
    for (int j = 0; j < ref.nfp_face; ++j) {
      const int f = bf.face * ref.nfp_face + j;
      const double* w = &ref.interp.data[static_cast<std::size_t>(f) * static_cast<std::size_t>(ns)];
      const auto st = state_at(q, bf.elem, nv, ns, w);
      const auto pr = physics::to_primitive(st, disc.dim, gas);
      SurfacePoint sp;
      sp.x = disc.face_x[bf.elem * static_cast<std::size_t>(ref.nfp) + static_cast<std::size_t>(f)];
      sp.p = pr.p;
      sp.T = physics::temperature(pr, gas);
      sp.mach_is = isentropic_mach(pr.p, p0, gas.gamma);
      out.push_back(sp);
    }
  }
  return out;
}

std::string surface_csv(const std::vector<SurfacePoint>& points) {
  std::ostringstream out;
  out << "x,y,z,p,T,M_is\n";
  for (const auto& s : points)
    out << num(s.x[0]) << ',' << num(s.x[1]) << ',' << num(s.x[2]) << ',' << num(s.p) << ',' << num(s.T) << ','
        << num(s.mach_is) << '\n';
  return out.str();
}

void write_surface_csv(const std::vector<SurfacePoint>& points, const std::filesystem::path& path) {
  write_text(surface_csv(points), path);
}

void RunningMean::add(const std::vector<double>& field) {
  if (count_ == 0) mean_.assign(field.size(), 0.0);
  if (field.size() != mean_.size()) throw DomainError("running mean field size changed");
  ++count_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < field.size(); ++i) mean_[i] += (field[i] - mean_[i]) * inv;
}

}  // namespace zfr::io
