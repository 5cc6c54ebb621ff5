// Acceptance suite: one PASS/FAIL line per criterion. Every tolerance is a
// named constant below. Arguments select criteria by id; no argument runs the
// default set.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "exact_riemann.hpp"
#include "prep_support.hpp"
#include "solver_support.hpp"
#include "zfr/bench/benchmark.hpp"
#include "zfr/io/config.hpp"
#include "zfr/io/fixtures.hpp"
#include "zfr/mesh/dual_graph.hpp"
#include "zfr/perf/census.hpp"
#include "zfr/perf/flops.hpp"
#include "zfr/perf/scaling.hpp"
#include "zfr/physics/initial.hpp"
#include "zfr/prep/distribute.hpp"
#include "zfr/prep/partition.hpp"
#include "zfr/solver/pointwise.hpp"
#include "zfr/solver/time.hpp"

using namespace zfr;
using zfr::testing::periodic_cube;
using zfr::testing::periodic_square;
using zfr::testing::serial_shard;

namespace {

// Criterion 1
constexpr double kDofLo = 864.7e9, kDofHi = 865.1e9;
// Criterion 2
constexpr double kGlobalEntities = 211e6, kRanks = 19.2e6;
// Criterion 3
constexpr double kOrderSlack = 0.4;
constexpr double kVortexTime = 1.0;
// Criterion 4
constexpr double kConservationDrift = 1e-12;
constexpr int kConservationSteps = 100;
// Criterion 5
constexpr int kMatchingTrials = 200;
constexpr std::size_t kMatchingMaxCells = 5000;
// Criterion 6
constexpr double kRankInvariance = 1e-12;
constexpr int kRankSteps = 20;
// Criterion 7
constexpr std::int64_t kMaxUlp = 2;
constexpr int kFusionStates = 50;
constexpr double kTrafficModelTol = 0.05;
// Criterion 8
constexpr double kCensusTol = 0.10;
// Criterion 9
constexpr double kMinEfficiency = 0.6;
constexpr int kMinElementsPerWorker = 4000;
// Criterion 10
constexpr double kSodL1 = 0.02;
constexpr double kSodTime = 0.2;
// Taylor-Green stability at the production CFL.
constexpr double kTgvCfl = 1.0;
constexpr int kTgvSteps = 1000;
constexpr double kTgvEnergyGrowth = 1.01;
// SSP-RK3 one-step bound on dy/dt = -y.
constexpr double kOdeBound = 3e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

physics::GasModel air() { return physics::GasModel{}; }

solver::InitialCondition vortex_at(double t, double lo, double hi) {
  physics::IsentropicVortex v;
  v.lo = {lo, lo};
  v.hi = {hi, hi};
  const auto gas = air();
  return [v, t, gas](const Vec3& x) { return v(x, t, gas); };
}

std::int64_t ulp_distance(double a, double b) {
  if (a == b) return 0;
  auto key = [](double x) {
    auto i = std::bit_cast<std::int64_t>(x);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const auto d = key(a) - key(b);
  return d < 0 ? -d : d;
}

// ---------------------------------------------------------------------------

Outcome dof_arithmetic() {
  const double dof = perf::dof_count(1.689e9, 7, 1, 3);
  return {dof >= kDofLo && dof <= kDofHi, "dof=" + fmt("%.6g", dof) + " in [864.7e9, 865.1e9]"};
}

Outcome load_per_rank() {
  // Sizes take at most two values with the larger on ranks below the
  // remainder: probe both ends, the remainder boundary and a random sample.
  const auto total = static_cast<std::int64_t>(kGlobalEntities);
  const auto nranks = static_cast<std::int64_t>(kRanks);
  const std::int64_t rem = total % nranks;
  std::set<std::int64_t> probe{0, 1, nranks - 2, nranks - 1, rem - 1, rem};
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) probe.insert(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(nranks)));
  std::set<std::int64_t> sizes;
  bool contiguous = true;
  for (auto r : probe) {
    const auto range = prep::distribute_entities(total, nranks, r);
    sizes.insert(range.size());
    if (r > 0 && prep::distribute_entities(total, nranks, r - 1).end != range.begin) contiguous = false;
  }
  contiguous = contiguous && prep::distribute_entities(total, nranks, 0).begin == 0 &&
               prep::distribute_entities(total, nranks, nranks - 1).end == total;
  const bool ok = contiguous && std::all_of(sizes.begin(), sizes.end(), [](std::int64_t s) { return s == 10 || s == 11; });
  std::string s;
  for (auto v : sizes) s += (s.empty() ? "" : ",") + std::to_string(v);
  return {ok, "sizes={" + s + "} over " + std::to_string(probe.size()) + " probed ranks, contiguous cover=" +
                  (contiguous ? "yes" : "no")};
}

Outcome vortex_order() {
  const double lo = -10.0, hi = 10.0;
  const auto exact = vortex_at(kVortexTime, lo, hi);
  const std::vector<int> meshes{8, 16, 32};
  bool ok = true;
  std::ostringstream out;
  for (int p = 1; p <= 4; ++p) {
    std::vector<double> errs;
    double dt_coarse = 0.0;
    for (int n : meshes) {
      auto cfg = zfr::testing::config(p);
      // Rusanov's full-spectrum dissipation holds p = 2 near order 2.45 up
      // to 32^2; the contact-preserving flux reaches the asymptotic range.
      cfg.riemann = physics::RiemannSolver::Hllc;
      solver::PhysicsConfig phys;
      phys.gas = air();
      solver::Solver s(serial_shard(periodic_square(n, lo, hi)), cfg, phys);
      s.initialize(vortex_at(0.0, lo, hi));
      const double stable = s.stable_dt();
      if (n == meshes.front()) dt_coarse = stable;
      // Shrink dt like h^((p+1)/3) so the time error falls with the space error.
      const double scale = std::pow(static_cast<double>(meshes.front()) / n, (p + 1) / 3.0);
      const double dt_target = std::min(stable, 0.5 * dt_coarse * scale);
      const int steps = static_cast<int>(std::ceil(kVortexTime / dt_target));
      s.run(steps, kVortexTime / steps);
      errs.push_back(zfr::testing::density_l2(s.discretization(), s.state(), exact));
    }
    const double order = std::log2(errs[1] / errs[2]);
    const double need = (p + 1) - kOrderSlack;
    ok = ok && order >= need;
    out << " p=" << p << ":e=" << fmt("%.3e", errs[0]) << "," << fmt("%.3e", errs[1]) << "," << fmt("%.3e", errs[2])
        << " order=" << fmt("%.2f", order) << "(>=" << fmt("%.1f", need) << ")";
  }
  return {ok, out.str().substr(1)};
}

Outcome conservation() {
  const auto gas = air();
  const double L = 2.0 * M_PI;
  auto cfg = zfr::testing::config(3);
  cfg.deterministic = true;
  solver::PhysicsConfig phys;
  phys.gas = gas;
  solver::Solver s(serial_shard(periodic_cube(4, 0.0, L, 0.1, 11)), cfg, phys);
  s.initialize([&](const Vec3& x) {
    physics::Primitive<double> w{};
    w.rho = 1.0 + 0.2 * std::sin(x[0]) * std::sin(x[1]) * std::sin(x[2]);
    w.u = {0.3 + 0.1 * std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]),
           0.2 - 0.1 * std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]), 0.1 + 0.05 * std::cos(x[2])};
    w.p = 1.0 + 0.1 * std::cos(x[0] + x[1] + x[2]);
    return physics::to_conserved(w, 3, gas);
  });
  const auto before = s.totals();
  s.run(kConservationSteps);
  const auto after = s.totals();
  double worst = 0.0;
  for (std::size_t v = 0; v < before.size(); ++v)
    worst = std::max(worst, std::abs(after[v] - before[v]) / std::abs(before[v]));
  return {worst <= kConservationDrift, "max relative drift of 5 totals=" + fmt("%.3e", worst) + " (<= 1e-12) after " +
                                           std::to_string(kConservationSteps) + " steps"};
}

Outcome distributed_matching() {
  std::mt19937_64 rng(20240601);
  int passed = 0;
  std::size_t largest = 0;
  std::string first_failure;
  for (int t = 0; t < kMatchingTrials; ++t) {
    mesh::BoxSpec spec;
    const bool three_d = rng() % 2 == 0;
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
    do {
      spec.nx = pick(1, three_d ? 17 : 70);
      spec.ny = pick(1, three_d ? 17 : 70);
      spec.nz = three_d ? pick(1, 17) : 0;
    } while (static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(spec.ny) *
                     static_cast<std::size_t>(std::max(spec.nz, 1)) > kMatchingMaxCells ||
             static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(spec.ny) *
                     static_cast<std::size_t>(std::max(spec.nz, 1)) < 8);
    const int dims[3] = {spec.nx, spec.ny, spec.nz};
    for (int a = 0; a < (three_d ? 3 : 2); ++a) spec.periodic[static_cast<std::size_t>(a)] = dims[a] >= 3 && rng() % 3 == 0;
    spec.perturbation = 0.2 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    spec.shuffle = true;
    spec.seed = rng();
    const auto m = mesh::make_box(spec);
    largest = std::max(largest, m.cells.size());
    const int nranks = std::array<int, 3>{2, 4, 8}[rng() % 3];

    std::vector<int> part(m.cells.size());
    if (rng() % 2 == 0) {
      // Scattered labels; the first cells pin every rank non-empty.
      for (std::size_t c = 0; c < part.size(); ++c)
        part[c] = c < static_cast<std::size_t>(nranks) ? static_cast<int>(c)
                                                       : static_cast<int>(rng() % static_cast<std::uint64_t>(nranks));
    } else {
      const auto g = mesh::build_dual_graph(m.cells, mesh::match_local_faces(mesh::build_face_list(m.cells)).internal);
      part = prep::partition_mesh(g, nranks, rng());
    }
    const auto mode = rng() % 2 == 0 ? prep::RoutingMode::Modulo : prep::RoutingMode::Block;
    const auto got = zfr::testing::run_distributed(m, part, nranks, mode, rng());
    const bool ok = got.internal == zfr::testing::serial_internal(m) && got.boundary == zfr::testing::serial_boundary(m) &&
                    got.boundary_assignments == static_cast<std::size_t>(m.boundary_record_count()) && got.involution;
    if (ok) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = " first failure: trial " + std::to_string(t);
    }
  }
  return {passed == kMatchingTrials, std::to_string(passed) + "/" + std::to_string(kMatchingTrials) +
                                         " trials match the serial face and boundary sets (largest mesh " +
                                         std::to_string(largest) + " cells)" + first_failure};
}

Outcome rank_invariance() {
  const auto f = io::make_fixture("vortex");
  auto cfg = f.config.solver;
  cfg.deterministic = true;
  cfg.startup_steps = 0;
  const auto phys = io::physics_config(f.config, {}, 2);
  const auto init = io::initial_condition(f.config, 2);
  const auto ref = solver::run_distributed(prep::partition_and_decompose(f.mesh, 1), cfg, phys, init, kRankSteps);
  double worst = 0.0;
  bool bitwise = true;
  for (int nranks : {2, 4, 8}) {
    const auto got = solver::run_distributed(prep::partition_and_decompose(f.mesh, nranks, 5), cfg, phys, init, kRankSteps);
    if (got.cells.size() != ref.cells.size()) return {false, "cell count differs at " + std::to_string(nranks) + " ranks"};
    for (const auto& [id, q] : ref.cells) {
      const auto& r = got.cells.at(id);
      for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(q[i] - r[i]));
      bitwise = bitwise && q == r;
    }
  }
  return {worst <= kRankInvariance && bitwise,
          "max |diff| over ranks {2,4,8} vs 1=" + fmt("%.3e", worst) + " (<= 1e-12), bitwise=" + (bitwise ? "yes" : "no")};
}

// Bytes of one residual evaluation predicted from the array sizes of the
// data-flow graph: every kernel reads its input arrays and writes its output
// arrays once; a fused group reads only arrays produced outside it and
// writes only arrays consumed outside it. Inviscid, single rank, no
// boundary faces: face kernels read both traces and the left geometry
// (normal, area) and write both sides.
struct TrafficModel {
  double unfused = 0.0;
  double fused = 0.0;
};

TrafficModel traffic_model(const solver::Discretization& d) {
  const double ne = static_cast<double>(d.nelem), nv = d.nv, ns = d.ref.ns, nfp = d.ref.nfp, dm = d.dim;
  const double faces = static_cast<double>(d.interior_faces.size()), nfpf = d.ref.nfp_face;
  const double Q = ne * nv * ns, QF = ne * nv * nfp, FH = ne * nv * dm * ns, R = Q;
  const double adj = ne * 9 * ns, det = ne * ns, sigma = ne * ns, b = ne * nv * ns;
  const double pair_traces = faces * nfpf * 2 * nv, geometry = faces * nfpf * (dm + 1);

  double shared = 0.0;
  shared += Q + QF;                  // interp
  shared += Q + adj + FH;            // evaluate_flux
  shared += FH + QF;                 // normal_interp
  shared += FH + R;                  // divergence
  shared += QF + R;                  // correction

  const double common_flux = pair_traces + geometry + pair_traces;
  const double flux_jump = 2 * QF + QF;
  const double sum_divergence = 2 * R + R;
  const double inverse_jacobian = R + det + R;
  const double add_source = R + Q + sigma + b + R;

  // Fused interface pass: reads traces, geometry and both sides' Fn, writes
  // the jump; the common-flux array never reaches memory.
  const double fused_face = pair_traces + geometry + pair_traces + pair_traces;
  // Fused chain: reads divF, corrF, the Jacobian, q and the source arrays;
  // writes R once.
  const double fused_chain = 2 * R + det + Q + sigma + b + R;

  TrafficModel m;
  m.unfused = 8.0 * (shared + common_flux + flux_jump + sum_divergence + inverse_jacobian + add_source);
  m.fused = 8.0 * (shared + fused_face + fused_chain);
  return m;
}

Outcome fusion_equivalence() {
  mesh::BoxSpec spec;
  spec.nx = 5;
  spec.ny = 5;
  spec.nz = 4;
  spec.periodic = {true, true, true};
  spec.perturbation = 0.15;
  spec.seed = 4;
  const auto shard = serial_shard(mesh::make_box(spec));
  solver::PhysicsConfig phys;
  phys.gas = air();
  auto cfg = zfr::testing::config(3);
  solver::Discretization d(shard, 3, phys, cfg, nullptr);
  solver::ResidualEvaluator fused(d, solver::standard_fusion_plan(), solver::execution_options(cfg));
  solver::ResidualEvaluator plain(d, solver::FusionPlan{}, solver::execution_options(cfg));
  std::int64_t worst = 0;
  perf::PerfLedger lf, lp;
  for (int k = 0; k < kFusionStates; ++k) {
    const auto q = zfr::testing::random_state(d, 100 + static_cast<std::uint64_t>(k), 0.2);
    std::vector<double> rf, rp;
    perf::PerfLedger a, b;
    fused.compute(q, rf, k == 0 ? &lf : nullptr);
    plain.compute(q, rp, k == 0 ? &lp : nullptr);
    for (std::size_t i = 0; i < rf.size(); ++i) worst = std::max(worst, ulp_distance(rf[i], rp[i]));
  }
  const auto model = traffic_model(d);
  const double bf = static_cast<double>(lf.total_bytes_moved()), bp = static_cast<double>(lp.total_bytes_moved());
  const double ef = std::abs(bf - model.fused) / model.fused, ep = std::abs(bp - model.unfused) / model.unfused;
  const bool ok = worst <= kMaxUlp && bf < bp && ef <= kTrafficModelTol && ep <= kTrafficModelTol;
  return {ok, "max ulp=" + std::to_string(worst) + " (<= 2) over " + std::to_string(kFusionStates) +
                  " states; bytes fused=" + fmt("%.0f", bf) + " < unfused=" + fmt("%.0f", bp) +
                  "; vs model fused " + fmt("%.2f%%", 100 * ef) + ", unfused " + fmt("%.2f%%", 100 * ep) + " (<= 5%)"};
}

// GEMM shapes (m, n, k) of one residual evaluation, enumerated from the
// reference element sizes.
double gemm_flops_from_shapes(const solver::Discretization& d, bool viscous) {
  const std::int64_t ne = static_cast<std::int64_t>(d.nelem), nv = d.nv, dm = d.dim;
  std::int64_t n1 = d.ref.p + 1, ns = 1;
  for (int a = 0; a < d.dim; ++a) ns *= n1;
  const std::int64_t nfp = 2 * dm * ns / n1;
  double f = perf::flops_gemm(ne * nv, nfp, ns)         // interp
             + perf::flops_gemm(ne * nv, nfp, dm * ns)  // normal_interp
             + perf::flops_gemm(ne * nv, ns, dm * ns)   // divergence
             + perf::flops_gemm(ne * nv, ns, nfp);      // correction
  if (viscous) {
    f += perf::flops_gemm(ne * nv, dm * ns, ns)      // gradient
         + perf::flops_gemm(ne * nv, dm * ns, nfp)   // gradient_correction
         + perf::flops_gemm(ne * nv * dm, nfp, ns);  // interp_gradient
  }
  return f;
}

Outcome flop_cross_check() {
  struct Case {
    bool three_d;
    double mu;
    physics::RiemannSolver riemann;
  };
  double worst_rel = 0.0;
  bool gemm_exact = true;
  std::ostringstream out;
  for (const auto& c : {Case{true, 0.0, physics::RiemannSolver::Rusanov}, Case{true, 0.01, physics::RiemannSolver::Hllc},
                        Case{false, 0.01, physics::RiemannSolver::Rusanov}}) {
    const auto m = c.three_d ? periodic_cube(4, 0.0, 1.0, 0.1, 3) : periodic_square(10, 0.0, 1.0, 0.1, 3);
    auto cfg = zfr::testing::config(3);
    cfg.riemann = c.riemann;
    solver::PhysicsConfig phys;
    phys.gas = air();
    phys.gas.mu = c.mu;
    const auto shard = serial_shard(m);
    solver::Discretization d(shard, 3, phys, cfg, nullptr);
    solver::ResidualEvaluator ev(d, solver::standard_fusion_plan(), solver::execution_options(cfg));
    auto q = zfr::testing::random_state(d, 8, 0.1);
    const auto rk = solver::RKScheme::ssp3();

    double census = 0.0;
    perf::PerfLedger ledger;
    const double dt = 1e-3 * solver::compute_dt(d, q, 1.0);
    solver::advance_rk(rk, q, dt, [&](const std::vector<double>& x, std::vector<double>& r) {
      census += ev.census_flops(x.data());
      ev.compute(x, r, &ledger);
    });
    // Instrumented update: one Euler entry and one convex-combination entry.
    perf::OpCensus euler, lerp;
    {
      perf::CensusScope scope(euler);
      (void)solver::rk_euler_entry<perf::Counted>(1.0, 0.5, dt);
    }
    {
      perf::CensusScope scope(lerp);
      (void)solver::rk_lerp_entry<perf::Counted>(1.0, 0.9, 0.5, dt, 0.25);
    }
    const double entries = static_cast<double>(d.field_size());
    census += entries * static_cast<double>(euler.total()) +
              entries * static_cast<double>(lerp.total()) * static_cast<double>(rk.stages.size() - 1);

    perf::PointwiseVariant var{d.dim, c.mu > 0.0, c.riemann == physics::RiemannSolver::Hllc};
    const auto pts = static_cast<std::int64_t>(d.nelem * static_cast<std::size_t>(d.ref.ns));
    const double scheme = static_cast<double>(rk.stages.size()) * ev.scheme_flops() +
                          perf::flops_pointwise("rk_euler", pts, var) +
                          static_cast<double>(rk.stages.size() - 1) * perf::flops_pointwise("rk_lerp", pts, var);
    const double rel = std::abs(scheme - census) / census;
    worst_rel = std::max(worst_rel, rel);

    double gemm = 0.0;
    for (const auto& [name, k] : ledger.kernels()) {
      const int idx = ev.graph().find(name);
      if (idx >= 0 && ev.graph().kernels[static_cast<std::size_t>(idx)].cls == solver::KernelClass::Gemm) gemm += k.flops;
    }
    const double expect = static_cast<double>(rk.stages.size()) * gemm_flops_from_shapes(d, c.mu > 0.0);
    gemm_exact = gemm_exact && gemm == expect;
    out << (c.three_d ? " 3d" : " 2d") << (c.mu > 0 ? "-viscous" : "-inviscid")
        << (c.riemann == physics::RiemannSolver::Hllc ? "-hllc" : "-rusanov") << ": scheme=" << fmt("%.6e", scheme)
        << " census=" << fmt("%.6e", census) << " gemm=" << fmt("%.6e", gemm) << (gemm == expect ? "==" : "!=")
        << fmt("%.6e", expect) << ";";
  }
  return {worst_rel <= kCensusTol && gemm_exact,
          "max |scheme-census|/census=" + fmt("%.3e", worst_rel) + " (<= 0.10); gemm == sum 2mnk: " +
              (gemm_exact ? "yes" : "no") + ";" + out.str()};
}

Outcome strong_scaling() {
  const std::vector<int> workers{1, 2, 4, 8};
  const int n = static_cast<int>(std::ceil(std::sqrt(kMinElementsPerWorker * workers.back())));
  auto f = io::make_fixture("vortex");
  mesh::BoxSpec b;
  b.nx = b.ny = n;
  b.nz = 0;
  b.lo = {-10.0, -10.0, 0.0};
  b.hi = {10.0, 10.0, 0.0};
  b.periodic = {true, true, false};
  const auto shards = prep::partition_and_decompose(mesh::make_box(b), 1);
  const auto phys = io::physics_config(f.config, {}, 2);
  const auto init = io::initial_condition(f.config, 2);
  bench::BenchOptions opt;
  opt.steps = 5;
  opt.warmup = 1;
  std::vector<perf::BenchRecord> runs;
  for (int w : workers) {
    auto cfg = f.config.solver;
    cfg.workers = w;
    cfg.deterministic = false;
    runs.push_back(bench::benchmark_step(shards, cfg, phys, init, opt).record);
  }
  const auto rep = perf::scaling_report(runs, perf::ScalingMode::Strong);
  bool monotone = true;
  for (std::size_t i = 1; i < rep.efficiency.size(); ++i) monotone = monotone && rep.efficiency[i] <= rep.efficiency[i - 1];
  bool in_range = std::all_of(rep.efficiency.begin(), rep.efficiency.end(), [](double e) { return e > 0.0 && e <= 1.05; });
  const double e8 = rep.efficiency.back();
  std::ostringstream out;
  out << "elements=" << n * n << " (" << n * n / workers.back() << " per worker at 8), host threads="
      << std::thread::hardware_concurrency() << "; efficiency";
  for (std::size_t i = 0; i < workers.size(); ++i) out << " w" << workers[i] << "=" << fmt("%.3f", rep.efficiency[i]);
  out << "; need w8 >= 0.6, report monotone=" << (monotone ? "yes" : "no") << ", in (0,1.05]=" << (in_range ? "yes" : "no");
  return {e8 >= kMinEfficiency && monotone && in_range, out.str()};
}

Outcome sod() {
  const auto f = io::make_fixture("sod");
  const auto shard = serial_shard(f.mesh);
  auto cfg = f.config.solver;
  cfg.startup_steps = 0;
  const auto phys = io::physics_config(f.config, shard.patch_names, 2);
  solver::Solver s(shard, cfg, phys);
  s.initialize(io::initial_condition(f.config, 2));
  int steps = 0;
  while (s.time() < kSodTime) {
    const double dt = std::min(s.stable_dt(), kSodTime - s.time());
    s.step(dt);
    ++steps;
    if (kSodTime - s.time() < 1e-14) break;
  }
  const zfr::testing::ExactRiemann exact{1.4, 1.0, 0.0, 1.0, 0.125, 0.0, 0.1};
  const auto& d = s.discretization();
  const auto ns = static_cast<std::size_t>(d.ref.ns);
  const auto nv = static_cast<std::size_t>(d.nv);
  double err = 0.0, vol = 0.0;
  for (std::size_t e = 0; e < d.nelem; ++e)
    for (std::size_t i = 0; i < ns; ++i) {
      const double w = d.ref.solution_weights[i] * d.det[e * ns + i];
      const double xi = d.x[e * ns + i][0];
      err += w * std::abs(s.state()[(e * nv) * ns + i] - exact.sample((xi - 0.5) / s.time()).rho);
      vol += w;
    }
  // Domain length is one, so the volume average is the 1-D L1 norm.
  const double l1 = err / vol;
  return {l1 < kSodL1, "L1 density error=" + fmt("%.4f", l1) + " (< 0.02) at t=" + fmt("%.4f", s.time()) + " after " +
                           std::to_string(steps) + " steps"};
}

double kinetic_energy(const solver::Discretization& d, const std::vector<double>& q) {
  const auto ns = static_cast<std::size_t>(d.ref.ns);
  const auto nv = static_cast<std::size_t>(d.nv);
  double ke = 0.0;
  for (std::size_t e = 0; e < d.nelem; ++e)
    for (std::size_t i = 0; i < ns; ++i) {
      const double w = d.ref.solution_weights[i] * d.det[e * ns + i];
      double m2 = 0.0;
      for (std::size_t a = 1; a <= static_cast<std::size_t>(d.dim); ++a) m2 += q[(e * nv + a) * ns + i] * q[(e * nv + a) * ns + i];
      ke += w * 0.5 * m2 / q[(e * nv) * ns + i];
    }
  return ke;
}

/// cfl <= 0 keeps the fixture's own value.
Outcome tgv_stability(double cfl) {
  const auto f = io::make_fixture("tgv");
  auto cfg = f.config.solver;
  cfg.p = 3;
  if (cfl > 0.0) cfg.cfl = cfl;
  cfg.startup_steps = 0;
  const auto shard = serial_shard(f.mesh);
  solver::Solver s(shard, cfg, io::physics_config(f.config, shard.patch_names, 3));
  s.initialize(io::initial_condition(f.config, 3));
  const double ke0 = kinetic_energy(s.discretization(), s.state());
  double peak = ke0;
  int steps = 0;
  std::string failure;
  try {
    for (; steps < kTgvSteps; ++steps) {
      s.step(s.stable_dt());
      peak = std::max(peak, kinetic_energy(s.discretization(), s.state()));
    }
  } catch (const StateError& e) {
    failure = std::string(", positivity failure at step ") + std::to_string(steps + 1) + ": " + e.what();
  }
  const bool ok = failure.empty() && peak <= kTgvEnergyGrowth * ke0;
  return {ok, "CFL=" + fmt("%g", cfg.cfl) + " p=3 " + std::to_string(shard.cells.size()) + " hexes: " + std::to_string(steps) + "/" +
                  std::to_string(kTgvSteps) + " steps, peak KE/KE0=" + fmt("%.4f", peak / ke0) + " (<= 1.01)" + failure};
}

Outcome rk_ode_bound() {
  std::vector<double> y{1.0};
  solver::advance_rk(solver::RKScheme::ssp3(), y, 0.1,
                     [](const std::vector<double>& x, std::vector<double>& r) { r = {-x[0]}; });
  const double err = std::abs(y[0] - std::exp(-0.1));
  return {err <= kOdeBound, "|y1 - exp(-0.1)|=" + fmt("%.4e", err) + " (<= 3e-6)"};
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"1", "DOF arithmetic", dof_arithmetic},
      {"2", "load per rank", load_per_rank},
      {"3", "vortex order of accuracy", vortex_order},
      {"4", "conservation", conservation},
      {"5", "distributed matching", distributed_matching},
      {"6", "rank invariance", rank_invariance},
      {"7", "fusion equivalence and traffic", fusion_equivalence},
      {"8", "flop cross-check", flop_cross_check},
      {"9", "desk-scale strong scaling", strong_scaling},
      {"10", "shock tube", sod},
      {"tgv", "Taylor-Green stability at CFL 1", [] { return tgv_stability(kTgvCfl); }},
      {"tgv-default", "Taylor-Green stability at the fixture CFL", [] { return tgv_stability(0.0); }},
      {"rk-ode", "SSP-RK3 one-step bound", rk_ode_bound},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<std::string> ids;
  app.add_option("ids", ids, "criterion ids to run (default 1-8 and 10)");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty()) ids = {"1", "2", "3", "4", "5", "6", "7", "8", "10"};

  int failed = 0;
  for (const auto& id : ids) {
    const auto it = std::find_if(criteria().begin(), criteria().end(), [&](const Criterion& c) { return c.id == id; });
    if (it == criteria().end()) {
      std::printf("FAIL [%s] unknown criterion\n", id.c_str());
      ++failed;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", it->id.c_str(), it->title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
