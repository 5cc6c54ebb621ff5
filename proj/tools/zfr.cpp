#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "zfr/bench/benchmark.hpp"
#include "zfr/io/config.hpp"
#include "zfr/io/fixtures.hpp"
#include "zfr/io/gmsh.hpp"
#include "zfr/io/mesh_file.hpp"
#include "zfr/io/output.hpp"
#include "zfr/io/shard_file.hpp"
#include "zfr/io/solution_file.hpp"
#include "zfr/prep/cluster.hpp"
#include "zfr/prep/shard.hpp"

namespace fs = std::filesystem;
using namespace zfr;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

io::RunConfig load_config(const fs::path& path) {
  auto cfg = io::load_run_config(path);
  for (const auto& n : cfg.notices) std::cerr << "notice: " << n << "\n";
  return cfg;
}

mesh::Mesh load_mesh(const fs::path& path) {
  return path.extension() == ".msh" ? io::import_gmsh_ascii(path) : io::read_mesh(path);
}

std::string tagged(const char* stem, int rank, int step, const char* ext) {
  char buf[64];
  if (step < 0) std::snprintf(buf, sizeof buf, "%s_r%05d.%s", stem, rank, ext);
  else std::snprintf(buf, sizeof buf, "%s_r%05d_s%06d.%s", stem, rank, step, ext);
  return buf;
}

struct PartitionArgs {
  std::string mesh, config, out;
  int ranks = 1;
};

int partition(const PartitionArgs& a) {
  const auto cfg = load_config(a.config);
  const auto m = load_mesh(a.mesh);
  const auto shards = prep::partition_and_decompose(m, a.ranks, cfg.prep_seed, cfg.routing);
  io::write_shards(shards, a.out);
  std::cout << "partitioned cells=" << m.cells.size() << " ranks=" << a.ranks << " out=" << a.out << "\n";
  return 0;
}

struct SolveArgs {
  std::string shards, config, out;
  int steps = 1;
};

/// Per-rank visual output selected by output.format; returns the file written, if any.
std::string write_output(const io::RunConfig& cfg, const prep::MeshShard& shard, const solver::Solver& s,
                         const fs::path& dir, int step) {
  const auto& d = s.discretization();
  if (cfg.output.format == "vtk") {
    const auto name = tagged("solution", shard.rank, step, "vtk");
    io::write_vtk(io::sample_solution(shard, d, s.state(), cfg.gas, cfg.output.order, cfg.output.q_criterion), dir / name);
    return name;
  }
  if (cfg.output.format == "csv") {
    if (cfg.output.patch.empty()) throw ConfigError("output.format = csv needs output.patch");
    const double p0 = cfg.output.p0 > 0.0 ? cfg.output.p0 : throw ConfigError("output.format = csv needs output.p0 > 0");
    const auto name = tagged("surface", shard.rank, step, "csv");
    io::write_surface_csv(io::sample_surface(shard, d, s.state(), cfg.gas, cfg.output.patch, p0), dir / name);
    return name;
  }
  return "";
}

int solve(const SolveArgs& a) {
  if (a.steps < 0) throw DomainError("--steps must be >= 0");
  const auto cfg = load_config(a.config);
  const auto shards = io::read_shards(a.shards);
  const int dim = shards.at(0).dim;
  const auto phys = io::physics_config(cfg, shards[0].patch_names, dim);
  const auto init = io::initial_condition(cfg, dim);
  const fs::path out(a.out);
  fs::create_directories(out);
  const std::optional<double> dt = cfg.dt > 0.0 ? std::optional<double>(cfg.dt) : std::nullopt;

  std::mutex mu;
  std::vector<std::string> files;
  double time = 0.0;
  prep::SimCluster::Options opt;
  opt.deliver_probability = 1.0;
  prep::SimCluster cluster(static_cast<int>(shards.size()), opt);
  cluster.run([&](prep::RankContext& ctx) {
    const auto& shard = shards[static_cast<std::size_t>(ctx.rank())];
    solver::Solver s(shard, cfg.solver, phys, &ctx);
    s.initialize(init);
    s.run_startup();
    std::vector<std::string> mine;
    int done = 0;
    while (done < a.steps) {
      const int chunk = cfg.output.every > 0 ? std::min(cfg.output.every, a.steps - done) : a.steps - done;
      s.run(chunk, dt);
      done += chunk;
      if (cfg.output.every > 0 && done < a.steps) {
        const auto f = write_output(cfg, shard, s, out, done);
        if (!f.empty()) mine.push_back(f);
      }
    }
    if (const auto f = write_output(cfg, shard, s, out, -1); !f.empty()) mine.push_back(f);
    const auto& d = s.discretization();
    io::SolutionPiece piece;
    piece.rank = ctx.rank();
    piece.nranks = static_cast<int>(shards.size());
    piece.dim = d.dim;
    piece.p = d.ref.p;
    piece.nv = d.nv;
    piece.ns = d.ref.ns;
    piece.time = s.time();
    piece.cell_ids = d.cell_ids;
    piece.values = s.state();
    io::write_solution_piece(piece, out / io::solution_piece_name(ctx.rank()));
    mine.push_back(io::solution_piece_name(ctx.rank()));
    std::lock_guard lock(mu);
    files.insert(files.end(), mine.begin(), mine.end());
    time = s.time();
  });
  std::sort(files.begin(), files.end());
  std::ofstream index(out / "solution.index");
  for (const auto& f : files) index << f << "\n";
  if (!index.flush()) throw Error("cannot write " + (out / "solution.index").string());
  std::printf("solved steps=%d ranks=%zu time=%.17g out=%s\n", a.steps, shards.size(), time, a.out.c_str());
  return 0;
}

struct BenchArgs {
  std::string shards, config, csv;
  int steps = 50;
  int workers = 0;
};

int bench_cmd(const BenchArgs& a) {
  auto cfg = load_config(a.config);
  if (a.workers > 0) cfg.solver.workers = a.workers;
  const auto shards = io::read_shards(a.shards);
  const int dim = shards.at(0).dim;
  bench::BenchOptions opt;
  opt.steps = a.steps;
  opt.warmup = cfg.bench.warmup;
  if (cfg.dt > 0.0) opt.dt = cfg.dt;
  const auto r = bench::benchmark_step(shards, cfg.solver, io::physics_config(cfg, shards[0].patch_names, dim),
                                       io::initial_condition(cfg, dim), opt);
  const auto row = perf::bench_csv_row(r.record);
  std::cout << perf::bench_csv_header() << "\n" << row << "\n";
  if (!a.csv.empty()) {
    const bool fresh = !fs::exists(a.csv) || fs::file_size(a.csv) == 0;
    std::ofstream f(a.csv, std::ios::app);
    if (fresh) f << perf::bench_csv_header() << "\n";
    f << row << "\n";
    if (!f.flush()) throw Error("cannot write " + a.csv);
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> series;
  std::string mode = "strong";
  std::string out;
};

int report(const ReportArgs& a) {
  std::vector<perf::BenchRecord> runs;
  for (const auto& file : a.series) {
    const auto recs = perf::parse_bench_csv(slurp(file));
    runs.insert(runs.end(), recs.begin(), recs.end());
  }
  const auto text = perf::scaling_csv(perf::scaling_report(runs, perf::scaling_mode_from_string(a.mode)));
  std::cout << text;
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    f << text;
    if (!f.flush()) throw Error("cannot write " + a.out);
  }
  return 0;
}

struct FixtureArgs {
  std::string name, out;
};

int make_fixture(const FixtureArgs& a) {
  const auto fx = io::make_fixture(a.name);
  const fs::path dir = a.out.empty() ? fs::path(a.name) : fs::path(a.out);
  io::write_fixture(fx, dir);
  std::cout << "fixture case=" << a.name << " cells=" << fx.mesh.cells.size() << " mesh="
            << (dir / io::kFixtureMeshName).string() << " config=" << (dir / io::kFixtureConfigName).string() << "\n";
  return 0;
}

std::string kind_of(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const MeshError*>(&e)) return "mesh";
  if (dynamic_cast<const GeometryError*>(&e)) return "geometry";
  if (dynamic_cast<const StateError*>(&e)) return "state";
  if (dynamic_cast<const ExchangeError*>(&e)) return "exchange";
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return "io";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal";
}

/// One line: `zfr: error kind=<kind> message="<text>"`, quotes and newlines escaped.
void report_error(const std::exception& e) {
  std::string msg;
  for (char c : std::string(e.what())) {
    if (c == '"' || c == '\\') msg += '\\';
    msg += c == '\n' ? ' ' : c;
  }
  std::cerr << "zfr: error kind=" << kind_of(e) << " message=\"" << msg << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order flux reconstruction solver: pre-processing, solving, benchmarking and reports."};
  app.require_subcommand(1);

  PartitionArgs pa;
  auto* part = app.add_subcommand("partition", "Partition a mesh and write per-rank shards");
  part->add_option("--mesh", pa.mesh, "Mesh file (.zfrm, or Gmsh 2.2 ASCII .msh)")->required()->check(CLI::ExistingFile);
  part->add_option("--ranks", pa.ranks, "Number of ranks")->required()->check(CLI::PositiveNumber);
  part->add_option("--config", pa.config, "Run configuration (prep.* keys)")->required()->check(CLI::ExistingFile);
  part->add_option("--out", pa.out, "Output directory")->required();

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Advance the solution and write output");
  sol->add_option("--shards", sa.shards, "Shard directory")->required()->check(CLI::ExistingDirectory);
  sol->add_option("--config", sa.config, "Run configuration")->required()->check(CLI::ExistingFile);
  sol->add_option("--steps", sa.steps, "Time steps after any start-up phase")->required();
  sol->add_option("--out", sa.out, "Output directory")->required();

  BenchArgs ba;
  auto* ben = app.add_subcommand("bench", "Time steps and print a bench CSV row");
  ben->add_option("--shards", ba.shards, "Shard directory")->required()->check(CLI::ExistingDirectory);
  ben->add_option("--config", ba.config, "Run configuration")->required()->check(CLI::ExistingFile);
  ben->add_option("--steps", ba.steps, "Measured steps")->capture_default_str()->check(CLI::PositiveNumber);
  ben->add_option("--workers", ba.workers, "Override solver.workers");
  ben->add_option("--csv", ba.csv, "Append the row to this CSV file");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "Scaling report from bench CSV files");
  rep->add_option("--series", ra.series, "Bench CSV files")->required()->expected(1, -1)->check(CLI::ExistingFile);
  rep->add_option("--mode", ra.mode, "strong or weak")->check(CLI::IsMember({"strong", "weak"}))->capture_default_str();
  rep->add_option("--out", ra.out, "Also write the report CSV here");

  FixtureArgs fa;
  auto* fix = app.add_subcommand("make-fixture", "Write a fixture mesh and configuration");
  fix->add_option("--case", fa.name, "Fixture name")->required()->check(CLI::IsMember(io::fixture_names()));
  fix->add_option("--out", fa.out, "Output directory (default: the case name)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& c : msg)
      if (c == '"' || c == '\n') c = '\'';
    std::cerr << "zfr: error kind=usage message=\"" << msg << "\"\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (*part) return partition(pa);
    if (*sol) return solve(sa);
    if (*ben) return bench_cmd(ba);
    if (*rep) return report(ra);
    if (*fix) return make_fixture(fa);
  } catch (const std::exception& e) {
    report_error(e);
    return 1;
  }
  return 1;
}
