#include "zfr/io/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "zfr/common/error.hpp"
#include "zfr/physics/initial.hpp"

namespace zfr::io {

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '.' || c == '-';
    if (!ok) return false;
  }
  return k.find("..") == std::string::npos;
}

std::vector<Entry> parse_entries(const std::string& text) {
  std::vector<Entry> out;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const auto body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    Entry e{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line};
    if (!valid_key(e.key)) throw ParseError(line, "malformed key '" + e.key + "'");
    if (const auto it = seen.find(e.key); it != seen.end())
      throw ParseError(line, "key '" + e.key + "' repeats line " + std::to_string(it->second));
    seen[e.key] = line;
    out.push_back(std::move(e));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string fmt(bool v) { return v ? "on" : "off"; }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
template <std::size_t N>
std::string fmt(const std::array<double, N>& a) {
  std::string s;
  for (std::size_t i = 0; i < N; ++i) s += (i ? " " : "") + fmt(a[i]);
  return s;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) throw ConfigError("'" + s + "' is not a number");
  return v;
}

template <class I>
I to_integer(const std::string& s) {
  I v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("'" + s + "' is not an integer");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + s + "' is not on/off");
}

template <std::size_t N>
std::array<double, N> to_array(const std::string& s) {
  // Numbers separated by blanks or commas.
  std::string spaced = s;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::array<double, N> a{};
  std::string tok;
  for (std::size_t i = 0; i < N; ++i) {
    if (!(in >> tok)) throw ConfigError("expected " + std::to_string(N) + " numbers, got '" + s + "'");
    a[i] = to_double(tok);
  }
  if (in >> tok) throw ConfigError("expected " + std::to_string(N) + " numbers, got '" + s + "'");
  return a;
}

std::string one_of(const std::string& s, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (s == a) return s;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw ConfigError("'" + s + "' is not one of " + list);
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define ZFR_FIELD(KEY, MEMBER, PARSE) \
  Field { KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = PARSE(v); }, [](const RunConfig& c) { return fmt(c.MEMBER); } }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      ZFR_FIELD("solver.p", solver.p, to_integer<int>),
      ZFR_FIELD("solver.cfl", solver.cfl, to_double),
      Field{"solver.rk", [](RunConfig& c, const std::string& v) { c.solver.rk = one_of(v, {"ssp3"}); },
            [](const RunConfig& c) { return c.solver.rk; }},
      ZFR_FIELD("solver.fusion", solver.fusion, to_bool),
      ZFR_FIELD("solver.block_kb", solver.block_kb, to_integer<int>),
      ZFR_FIELD("solver.deterministic", solver.deterministic, to_bool),
      ZFR_FIELD("solver.double_buffering", solver.double_buffering, to_bool),
      ZFR_FIELD("solver.workers", solver.workers, to_integer<int>),
      Field{"solver.riemann",
            [](RunConfig& c, const std::string& v) {
              c.solver.riemann = one_of(v, {"rusanov", "hllc"}) == "hllc" ? physics::RiemannSolver::Hllc
                                                                           : physics::RiemannSolver::Rusanov;
            },
            [](const RunConfig& c) {
              return std::string(c.solver.riemann == physics::RiemannSolver::Hllc ? "hllc" : "rusanov");
            }},
      ZFR_FIELD("solver.ldg_beta", solver.ldg_beta, to_double),
      ZFR_FIELD("solver.ldg_tau", solver.ldg_tau, to_double),
      ZFR_FIELD("solver.startup_steps", solver.startup_steps, to_integer<int>),
      ZFR_FIELD("solver.dt", dt, to_double),
      ZFR_FIELD("prep.seed", prep_seed, to_integer<std::uint64_t>),
      Field{"prep.routing",
            [](RunConfig& c, const std::string& v) {
              c.routing = one_of(v, {"modulo", "block"}) == "block" ? prep::RoutingMode::Block
                                                                    : prep::RoutingMode::Modulo;
            },
            [](const RunConfig& c) { return std::string(c.routing == prep::RoutingMode::Block ? "block" : "modulo"); }},
      ZFR_FIELD("gas.gamma", gas.gamma, to_double),
      ZFR_FIELD("gas.prandtl", gas.prandtl, to_double),
      ZFR_FIELD("gas.R", gas.R, to_double),
      ZFR_FIELD("gas.mu", gas.mu, to_double),
      ZFR_FIELD("gas.sutherland", gas.sutherland, to_bool),
      ZFR_FIELD("gas.T_ref", gas.T_ref, to_double),
      ZFR_FIELD("gas.S", gas.S, to_double),
      Field{"init.kind", [](RunConfig& c, const std::string& v) { c.init.kind = one_of(v, {"uniform", "vortex", "tgv", "sod"}); },
            [](const RunConfig& c) { return c.init.kind; }},
      ZFR_FIELD("init.rho", init.rho, to_double),
      ZFR_FIELD("init.velocity", init.velocity, to_array<3>),
      ZFR_FIELD("init.pressure", init.pressure, to_double),
      ZFR_FIELD("init.mach", init.mach, to_double),
      ZFR_FIELD("init.length", init.length, to_double),
      ZFR_FIELD("init.x0", init.x0, to_double),
      ZFR_FIELD("init.beta", init.beta, to_double),
      ZFR_FIELD("init.radius", init.radius, to_double),
      ZFR_FIELD("init.box_lo", init.box_lo, to_double),
      ZFR_FIELD("init.box_hi", init.box_hi, to_double),
      ZFR_FIELD("bench.steps", bench.steps, to_integer<int>),
      ZFR_FIELD("bench.warmup", bench.warmup, to_integer<int>),
      ZFR_FIELD("output.every", output.every, to_integer<int>),
      Field{"output.format", [](RunConfig& c, const std::string& v) { c.output.format = one_of(v, {"vtk", "csv", "none"}); },
            [](const RunConfig& c) { return c.output.format; }},
      ZFR_FIELD("output.order", output.order, to_integer<int>),
      ZFR_FIELD("output.q_criterion", output.q_criterion, to_bool),
      Field{"output.patch", [](RunConfig& c, const std::string& v) { c.output.patch = v; },
            [](const RunConfig& c) { return c.output.patch; }},
      ZFR_FIELD("output.p0", output.p0, to_double),
  };
  return table;
}

#undef ZFR_FIELD

const std::vector<std::string>& case_keys() {
  static const std::vector<std::string> keys = {"name",        "chord_mm",  "pitch_over_chord", "stagger_deg",
                                                "mach_exit",   "mach_inlet", "reynolds",        "total_temperature_K",
                                                "total_pressure_Pa", "pressure_ratio", "description"};
  return keys;
}

void set_boundary(BoundaryEntry& b, const std::string& field, const std::string& v) {
  if (field == "kind") {
    physics::boundary_kind_from_string(v);
    b.kind = v;
  } else if (field == "total_temperature") {
    b.total_temperature = to_double(v);
  } else if (field == "total_pressure") {
    b.total_pressure = to_double(v);
  } else if (field == "direction") {
    b.direction = to_array<3>(v);
  } else if (field == "static_pressure") {
    b.static_pressure = to_double(v);
  } else if (field == "wall_temperature") {
    b.wall_temperature = to_double(v);
  } else if (field == "reference") {
    b.reference = to_array<5>(v);
  } else {
    throw ConfigError("unknown boundary field '" + field + "'");
  }
}

void set_sponge(SpongeEntry& s, const std::string& field, const std::string& v) {
  if (field == "axis") {
    s.axis = to_integer<int>(v);
    if (s.axis < 0 || s.axis > 2) throw ConfigError("sponge axis must be 0, 1 or 2");
  } else if (field == "lo") {
    s.lo = to_double(v);
  } else if (field == "hi") {
    s.hi = to_double(v);
  } else if (field == "width") {
    s.width = to_double(v);
  } else if (field == "sigma0") {
    s.sigma0 = to_double(v);
  } else if (field == "ramp_from_high") {
    s.ramp_from_high = to_bool(v);
  } else if (field == "reference") {
    s.reference = to_array<5>(v);
  } else {
    throw ConfigError("unknown sponge field '" + field + "'");
  }
}

/// Splits "prefix.name.field" where the name may itself contain dots.
bool split_scoped(const std::string& key, const std::string& prefix, std::string& name, std::string& field) {
  if (key.rfind(prefix + ".", 0) != 0) return false;
  const auto rest = key.substr(prefix.size() + 1);
  const auto dot = rest.rfind('.');
  if (dot == std::string::npos || dot == 0) throw ConfigError("expected " + prefix + ".<name>.<field>");
  name = rest.substr(0, dot);
  field = rest.substr(dot + 1);
  return true;
}

physics::State<double> conserved(const PrimitiveTuple& w, int dim, const physics::GasModel& gas) {
  return physics::uniform_state(w[0], {w[1], w[2], w[3]}, w[4], dim, gas);
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  for (auto& e : parse_entries(text)) kv[e.key] = e.value;
  return kv;
}

std::string serialize_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, bool> present;
  for (const auto& e : parse_entries(text)) {
    try {
      bool handled = false;
      for (const auto& f : fields()) {
        if (e.key == f.key) {
          f.set(cfg, e.value);
          present[e.key] = handled = true;
          break;
        }
      }
      if (handled) continue;
      std::string name, field;
      if (split_scoped(e.key, "bc", name, field)) {
        set_boundary(cfg.boundaries[name], field, e.value);
      } else if (split_scoped(e.key, "sponge", name, field)) {
        set_sponge(cfg.sponges[name], field, e.value);
      } else if (e.key.rfind("case.", 0) == 0) {
        const auto k = e.key.substr(5);
        bool known = false;
        for (const auto& c : case_keys()) known = known || c == k;
        if (!known) throw ConfigError("unknown key '" + e.key + "'");
        cfg.case_info[k] = e.value;
      } else {
        throw ConfigError("unknown key '" + e.key + "'");
      }
    } catch (const ConfigError& err) {
      throw ParseError(e.line, std::string(e.key) + ": " + err.what());
    }
  }
  for (const auto& f : fields())
    if (!present.count(f.key)) cfg.notices.push_back(std::string("defaulted ") + f.key + " = " + f.get(cfg));
  try {
    cfg.solver.validate();
    cfg.gas.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(std::string("invalid configuration: ") + err.what());
  }
  if (cfg.output.order < 1) throw ConfigError("output.order must be >= 1");
  if (cfg.bench.steps < 1 || cfg.bench.warmup < 0) throw ConfigError("bench.steps must be >= 1 and bench.warmup >= 0");
  if (cfg.dt < 0.0) throw ConfigError("solver.dt must be >= 0");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_run_config(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

std::string serialize_run_config(const RunConfig& cfg) {
  KeyValues kv;
  for (const auto& f : fields()) kv[f.key] = f.get(cfg);
  for (const auto& [name, b] : cfg.boundaries) {
    const auto p = "bc." + name + ".";
    kv[p + "kind"] = b.kind;
    kv[p + "total_temperature"] = fmt(b.total_temperature);
    kv[p + "total_pressure"] = fmt(b.total_pressure);
    kv[p + "direction"] = fmt(b.direction);
    kv[p + "static_pressure"] = fmt(b.static_pressure);
    kv[p + "wall_temperature"] = fmt(b.wall_temperature);
    if (b.reference) kv[p + "reference"] = fmt(*b.reference);
  }
  for (const auto& [name, s] : cfg.sponges) {
    const auto p = "sponge." + name + ".";
    kv[p + "axis"] = fmt(s.axis);
    kv[p + "lo"] = fmt(s.lo);
    kv[p + "hi"] = fmt(s.hi);
    kv[p + "width"] = fmt(s.width);
    kv[p + "sigma0"] = fmt(s.sigma0);
    kv[p + "ramp_from_high"] = fmt(s.ramp_from_high);
    kv[p + "reference"] = fmt(s.reference);
  }
  for (const auto& [k, v] : cfg.case_info) kv["case." + k] = v;
  return serialize_key_values(kv);
}

solver::PhysicsConfig physics_config(const RunConfig& cfg, const std::vector<std::string>& patch_names, int dim) {
  solver::PhysicsConfig phys;
  phys.gas = cfg.gas;
  for (const auto& [name, b] : cfg.boundaries) {
    std::size_t patch = patch_names.size();
    for (std::size_t i = 0; i < patch_names.size(); ++i)
      if (patch_names[i] == name) patch = i;
    if (patch == patch_names.size()) throw ConfigError("boundary entry for unknown patch '" + name + "'");
    physics::BoundarySpec spec;
    spec.patch = static_cast<int>(patch);
    spec.kind = physics::boundary_kind_from_string(b.kind);
    spec.total_temperature = b.total_temperature;
    spec.total_pressure = b.total_pressure;
    spec.direction = b.direction;
    spec.static_pressure = b.static_pressure;
    spec.wall_temperature = b.wall_temperature;
    if (b.reference) spec.reference = conserved(*b.reference, dim, cfg.gas);
    spec.validate(dim);
    phys.boundaries.push_back(spec);
  }
  for (const auto& [name, s] : cfg.sponges) {
    physics::SpongeZone z;
    z.axis = s.axis;
    z.lo = s.lo;
    z.hi = s.hi;
    z.width = s.width;
    z.sigma0 = s.sigma0;
    z.ramp_from_high = s.ramp_from_high;
    z.reference = conserved(s.reference, dim, cfg.gas);
    phys.sponges.push_back(z);
  }
  return phys;
}

solver::InitialCondition initial_condition(const RunConfig& cfg, int dim) {
  const auto gas = cfg.gas;
  const auto& in = cfg.init;
  if (in.kind == "vortex") {
    if (dim != 2) throw ConfigError("the vortex initial condition is two-dimensional");
    physics::IsentropicVortex v;
    v.beta = in.beta;
    v.radius = in.radius;
    v.velocity = {in.velocity[0], in.velocity[1]};
    v.rho_inf = in.rho;
    v.p_inf = in.pressure;
    v.lo = {in.box_lo, in.box_lo};
    v.hi = {in.box_hi, in.box_hi};
    v.center = {0.5 * (in.box_lo + in.box_hi), 0.5 * (in.box_lo + in.box_hi)};
    return [v, gas](const Vec3& x) { return v(x, 0.0, gas); };
  }
  if (in.kind == "tgv") {
    if (dim != 3) throw ConfigError("the Taylor-Green initial condition is three-dimensional");
    physics::TaylorGreen t;
    t.length = in.length;
    t.velocity = in.velocity[0];
    t.rho = in.rho;
    t.mach = in.mach;
    return [t, gas](const Vec3& x) { return t(x, gas); };
  }
  if (in.kind == "sod") {
    physics::ShockTube s;
    s.x0 = in.x0;
    return [s, gas, dim](const Vec3& x) { return s(x, dim, gas); };
  }
  const auto q = physics::uniform_state(in.rho, in.velocity, in.pressure, dim, gas);
  return [q](const Vec3&) { return q; };
}

}  // namespace zfr::io
