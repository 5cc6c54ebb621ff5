#include "zfr/io/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "zfr/io/mesh_file.hpp"
#include "zfr/mesh/generate.hpp"
#include "zfr/physics/ldg.hpp"

namespace zfr::io {

mesh::Mesh make_cascade(const CascadeSpec& spec) {
  if (spec.blade < 2 || spec.pitchwise < 3 || spec.upstream < 1 || spec.downstream < 1)
    throw DomainError("cascade needs >= 1 column on each side, >= 2 along the blade and >= 3 across the pitch");
  const double c = spec.chord;
  const double st = spec.stagger_deg * std::numbers::pi / 180.0;
  const double cx = c * std::cos(st);
  const double rise = c * std::sin(st);
  const double pitch = spec.pitch_over_chord * c;
  const int nx = spec.upstream + spec.blade + spec.downstream;
  const int ny = spec.pitchwise;
  const int le = spec.upstream, te = spec.upstream + spec.blade;

  std::vector<double> xs(static_cast<std::size_t>(nx + 1));
  for (int i = 0; i <= nx; ++i) {
    double x;
    if (i <= le) x = -cx + cx * i / le;
    else if (i <= te) x = cx * (i - le) / spec.blade;
    else x = cx + 2.0 * cx * (i - te) / spec.downstream;
    xs[static_cast<std::size_t>(i)] = x;
  }
  // Camber: flat upstream, -rise s^2 on the blade, tangent continuation downstream.
  const auto camber = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double s = x / cx;
    return s <= 1.0 ? -rise * s * s : -rise * (2.0 * s - 1.0);
  };

  mesh::Mesh m;
  m.dim = 2;
  m.period = {0.0, pitch, 0.0};
  const auto vid = [&](int i, int j) { return static_cast<GlobalId>(i + (nx + 1) * j); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double x = xs[static_cast<std::size_t>(i)];
      m.vertices.push_back({x, camber(x) + pitch * j / ny, 0.0});
    }
  // Suction-side copies of the seam vertices strictly inside the blade.
  std::vector<GlobalId> upper(static_cast<std::size_t>(nx + 1), -1);
  for (int i = le + 1; i < te; ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    upper[static_cast<std::size_t>(i)] = static_cast<GlobalId>(m.vertices.size());
    m.vertices.push_back({x, camber(x) + pitch, 0.0});
  }

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh::Cell cell;
      cell.id = static_cast<GlobalId>(m.cells.size());
      cell.kind = mesh::ElementKind::Quadrilateral;
      cell.vertex_ids = {vid(i, j), vid(i + 1, j), -1, -1};
      std::vector<std::uint8_t> images(4, 0);
      for (int k = 0; k < 2; ++k) {
        const int col = k == 0 ? i + 1 : i;
        GlobalId v;
        if (j + 1 < ny) {
          v = vid(col, j + 1);
        } else if (upper[static_cast<std::size_t>(col)] >= 0) {
          v = upper[static_cast<std::size_t>(col)];
        } else {
          v = vid(col, 0);
          images[static_cast<std::size_t>(2 + k)] = 2;
        }
        cell.vertex_ids[static_cast<std::size_t>(2 + k)] = v;
      }
      if (images[2] || images[3]) cell.images = images;
      m.cells.push_back(std::move(cell));
    }

  const auto section = [&](const char* name, auto&& add) {
    mesh::BoundarySection sec;
    sec.patch = static_cast<int>(m.patch_names.size());
    sec.begin = m.boundary_record_count();
    m.patch_names.emplace_back(name);
    add();
    sec.end = m.boundary_record_count();
    m.sections.push_back(sec);
  };
  const auto cell_at = [&](int i, int j) -> const mesh::Cell& { return m.cells[static_cast<std::size_t>(i + nx * j)]; };
  section("inlet", [&] {
    for (int j = 0; j < ny; ++j) m.boundary_records.push_back(mesh::face_cycle(cell_at(0, j), 3));
  });
  section("outlet", [&] {
    for (int j = 0; j < ny; ++j) m.boundary_records.push_back(mesh::face_cycle(cell_at(nx - 1, j), 1));
  });
  section("blade", [&] {
    for (int i = le; i < te; ++i) m.boundary_records.push_back(mesh::face_cycle(cell_at(i, 0), 0));
    for (int i = le; i < te; ++i) m.boundary_records.push_back(mesh::face_cycle(cell_at(i, ny - 1), 2));
  });
  return m;
}

namespace {

/// Static state of an isentropic expansion from (T0, p0) to Mach M.
struct Isentropic {
  double T, p, rho, a;
};
Isentropic expand(double T0, double p0, double mach, const physics::GasModel& gas) {
  const double r = 1.0 + 0.5 * (gas.gamma - 1.0) * mach * mach;
  Isentropic s;
  s.T = T0 / r;
  s.p = p0 / std::pow(r, gas.gamma / (gas.gamma - 1.0));
  s.rho = s.p / (gas.R * s.T);
  s.a = std::sqrt(gas.gamma * gas.R * s.T);
  return s;
}

/// Smallest area / longest edge over the quadrilaterals of a 2-D mesh.
double min_quad_length(const mesh::Mesh& m) {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& c : m.cells) {
    std::array<Vec3, 4> x;
    for (std::size_t v = 0; v < 4; ++v) {
      x[v] = m.vertices[static_cast<std::size_t>(c.vertex_ids[v])];
      if (!c.images.empty())
        for (std::size_t a = 0; a < 3; ++a)
          if (c.images[v] & (1u << a)) x[v][a] += m.period[a];
    }
    double area = 0.0, edge = 0.0;
    for (std::size_t v = 0; v < 4; ++v) {
      const auto& p = x[v];
      const auto& q = x[(v + 1) % 4];
      area += p[0] * q[1] - q[0] * p[1];
      edge = std::max(edge, std::hypot(q[0] - p[0], q[1] - p[1]));
    }
    h = std::min(h, 0.5 * std::abs(area) / edge);
  }
  return h;
}

/// The library default penalty has no viscosity factor; fixtures scale it by
/// the kinematic viscosity so it vanishes with the viscous terms. Unscaled,
/// it destabilises the Taylor-Green case within 100 steps at CFL 0.25.
double viscous_penalty(int p, double h, double mu, double rho) {
  return physics::default_ldg_penalty(p, h) * mu / rho;
}

/// Turbine passage setup shared by the cascade fixtures: inflow by total
/// conditions, static-pressure outflow, adiabatic blade, and two sponges.
RunConfig cascade_config(const CascadeSpec& cs, double T0, double p0, double mach_in, double p_exit, double mach_exit,
                         double reynolds) {
  RunConfig cfg;
  cfg.gas.R = 287.05;
  const auto in = expand(T0, p0, mach_in, cfg.gas);
  const auto out = expand(T0, p0, mach_exit, cfg.gas);
  // Viscosity from the exit Reynolds number on the chord.
  cfg.gas.mu = out.rho * mach_exit * out.a * cs.chord / reynolds;
  cfg.solver.p = 2;
  cfg.solver.cfl = 0.4;
  cfg.solver.riemann = physics::RiemannSolver::Hllc;
  cfg.solver.startup_steps = 20;

  auto& inlet = cfg.boundaries["inlet"];
  inlet.kind = "riemann-inflow";
  inlet.total_temperature = T0;
  inlet.total_pressure = p0;
  inlet.direction = {1.0, 0.0, 0.0};
  auto& outlet = cfg.boundaries["outlet"];
  outlet.kind = "pressure-outflow";
  outlet.static_pressure = p_exit;
  cfg.boundaries["blade"].kind = "adiabatic-wall";

  const double st = cs.stagger_deg * std::numbers::pi / 180.0;
  const double cx = cs.chord * std::cos(st);
  const double u_in = mach_in * in.a;
  const PrimitiveTuple inflow{in.rho, u_in, 0.0, 0.0, in.p};
  SpongeEntry sin_;
  sin_.axis = 0;
  sin_.lo = -cx;
  sin_.hi = -0.5 * cx;
  sin_.width = 0.5 * cx;
  sin_.sigma0 = u_in / cx;
  sin_.ramp_from_high = true;
  sin_.reference = inflow;
  cfg.sponges["inlet"] = sin_;
  // Exit flow leaves along the camber tangent.
  const double slope = -2.0 * std::tan(st);
  const double u_out = mach_exit * out.a;
  const double ux = u_out / std::sqrt(1.0 + slope * slope);
  SpongeEntry sout;
  sout.axis = 0;
  sout.lo = 2.0 * cx;
  sout.hi = 3.0 * cx;
  sout.width = cx;
  sout.sigma0 = u_out / cx;
  sout.ramp_from_high = false;
  sout.reference = {out.rho, ux, ux * slope, 0.0, out.p};
  cfg.sponges["outlet"] = sout;

  cfg.init.kind = "uniform";
  cfg.init.rho = in.rho;
  cfg.init.velocity = {u_in, 0.0, 0.0};
  cfg.init.pressure = in.p;
  cfg.output.format = "csv";
  cfg.output.patch = "blade";
  cfg.output.p0 = p0;
  return cfg;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"ls89-2d", "vortex", "tgv", "sod", "ge-e3-inflow"};
  return names;
}

Fixture make_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  if (name == "ls89-2d") {
    const CascadeSpec cs;
    f.mesh = make_cascade(cs);
    const double T0 = 420.0, p0 = 1.5e5, mach_exit = 0.84;
    const double p_exit = expand(T0, p0, mach_exit, physics::GasModel{1.4, 0.72, 287.05}).p;
    f.config = cascade_config(cs, T0, p0, 0.15, p_exit, mach_exit, 0.57e6);
    f.config.solver.ldg_tau = viscous_penalty(f.config.solver.p, min_quad_length(f.mesh), f.config.gas.mu,
                                              f.config.init.rho);
    f.config.case_info = {{"name", "ls89-2d"},
                          {"chord_mm", "67.647"},
                          {"pitch_over_chord", "0.85"},
                          {"stagger_deg", "55.0"},
                          {"mach_exit", "0.84"},
                          {"mach_inlet", "0.15"},
                          {"reynolds", "0.57e6"},
                          {"description", "coarse 2-D cascade; inlet totals are fixture choices"}};
  } else if (name == "ge-e3-inflow") {
    // Main-inlet conditions of the cooled vane case on the coarse cascade.
    const CascadeSpec cs;
    f.mesh = make_cascade(cs);
    const double T0 = 709.0, p0 = 3.4474e5, ratio = 1.63;
    const physics::GasModel air{1.4, 0.72, 287.05};
    const double p_exit = p0 / ratio;
    const double mach_exit =
        std::sqrt(2.0 / (air.gamma - 1.0) * (std::pow(ratio, (air.gamma - 1.0) / air.gamma) - 1.0));
    f.config = cascade_config(cs, T0, p0, 0.1, p_exit, mach_exit, 0.57e6);
    f.config.solver.ldg_tau = viscous_penalty(f.config.solver.p, min_quad_length(f.mesh), f.config.gas.mu,
                                              f.config.init.rho);
    f.config.case_info = {{"name", "ge-e3-inflow"},
                          {"total_temperature_K", "709"},
                          {"total_pressure_Pa", "3.4474e5"},
                          {"pressure_ratio", "1.63"},
                          {"mach_inlet", "0.1"},
                          {"description", "main-inlet totals on the coarse cascade; viscosity from the ls89 Reynolds number"}};
  } else if (name == "vortex") {
    mesh::BoxSpec b;
    b.nx = b.ny = 16;
    b.nz = 0;
    b.lo = {-10.0, -10.0, 0.0};
    b.hi = {10.0, 10.0, 0.0};
    b.periodic = {true, true, false};
    f.mesh = mesh::make_box(b);
    auto& c = f.config;
    c.solver.p = 3;
    c.init.kind = "vortex";
    c.init.velocity = {1.0, 0.0, 0.0};
    c.init.beta = 5.0;
    c.init.radius = 1.0;
    c.init.box_lo = -10.0;
    c.init.box_hi = 10.0;
    c.output.format = "vtk";
    c.case_info = {{"name", "vortex"}};
  } else if (name == "tgv") {
    mesh::BoxSpec b;
    b.nx = b.ny = b.nz = 8;
    b.lo = {0.0, 0.0, 0.0};
    const double tp = 2.0 * std::numbers::pi;
    b.hi = {tp, tp, tp};
    b.periodic = {true, true, true};
    f.mesh = mesh::make_box(b);
    auto& c = f.config;
    c.solver.p = 3;
    c.init.kind = "tgv";
    c.init.length = 1.0;
    c.init.velocity = {1.0, 0.0, 0.0};
    c.init.rho = 1.0;
    c.init.mach = 0.1;
    c.gas.mu = 1.0 * 1.0 * 1.0 / 1600.0;  // rho V L / Re
    c.solver.ldg_tau = viscous_penalty(c.solver.p, tp / b.nx, c.gas.mu, c.init.rho);
    c.output.format = "vtk";
    c.output.q_criterion = true;
    c.case_info = {{"name", "tgv"}, {"reynolds", "1600"}};
  } else if (name == "sod") {
    mesh::BoxSpec b;
    b.nx = 200;
    b.ny = 1;
    b.nz = 0;
    b.lo = {0.0, 0.0, 0.0};
    b.hi = {1.0, 0.005, 0.0};
    f.mesh = mesh::make_box(b);
    auto& c = f.config;
    c.solver.p = 2;
    // Without a limiter, CFL 0.5 loses positivity at the shock within 50 steps.
    c.solver.cfl = 0.25;
    c.solver.riemann = physics::RiemannSolver::Rusanov;
    c.init.kind = "sod";
    c.init.x0 = 0.5;
    for (const char* p : {"xmin", "xmax", "ymin", "ymax"}) c.boundaries[p].kind = "slip-wall";
    c.output.format = "vtk";
    c.case_info = {{"name", "sod"}};
  } else {
    throw ConfigError("unknown fixture '" + name + "'");
  }
  f.config.notices.clear();
  return f;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_mesh(fixture.mesh, dir / kFixtureMeshName);
  std::ofstream out(dir / kFixtureConfigName, std::ios::binary);
  if (!out) throw Error("cannot open " + (dir / kFixtureConfigName).string() + " for writing");
  out << "# fixture " << fixture.name << "\n" << serialize_run_config(fixture.config);
  if (!out.flush()) throw Error("write to " + (dir / kFixtureConfigName).string() + " failed");
}

}  // namespace zfr::io
