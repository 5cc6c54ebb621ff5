#include "doctest.h"

#include <cmath>

#include "solver_support.hpp"
#include "zfr/bench/benchmark.hpp"
#include "zfr/perf/census.hpp"
#include "zfr/perf/flops.hpp"
#include "zfr/perf/scaling.hpp"

using namespace zfr;
using namespace zfr::perf;
using zfr::testing::periodic_cube;
using zfr::testing::periodic_square;
using zfr::testing::random_state;
using zfr::testing::serial_shard;

namespace {

solver::PhysicsConfig gas_physics(double mu = 0.0) {
  solver::PhysicsConfig p;
  p.gas.mu = mu;
  return p;
}

BenchRecord record(int ranks, int workers, std::int64_t elements, double t, int p = 3) {
  BenchRecord r;
  r.ranks = ranks;
  r.workers = workers;
  r.elements = elements;
  r.p = p;
  r.mean_step_s = t;
  r.flops = 1e9;
  r.gflops_rate = 1.0 / t;
  r.bytes_moved = 12345;
  return r;
}

solver::InitialCondition tgv(const physics::GasModel& gas) {
  physics::TaylorGreen t;
  return [t, gas](const Vec3& x) { return t(x, gas); };
}

}  // namespace

TEST_CASE("gemm flops and degree-of-freedom counts") {
  CHECK(flops_gemm(1, 1, 1) == 2.0);
  CHECK(flops_gemm(4, 5, 6) == 240.0);
  CHECK_THROWS_AS(flops_gemm(0, 5, 6), DomainError);
  CHECK_THROWS_AS(flops_gemm(4, -1, 6), DomainError);
  CHECK(dof_count(1.689e9, 7, 1) == doctest::Approx(865e9).epsilon(1e-3));
  CHECK(dof_count(10, 2, 5, 2) == 450.0);
}

TEST_CASE("point-wise cost table") {
  const PointwiseVariant v3{3, false, false};
  CHECK_THROWS_AS(flops_pointwise("not_a_kernel", 10, v3), DomainError);
  CHECK_THROWS_AS(flops_pointwise("evaluate_flux", -1, v3), DomainError);
  CHECK(flops_pointwise("evaluate_flux", 0, v3) == 0.0);
  CHECK(flops_pointwise("evaluate_flux", 7, v3) == 7.0 * pointwise_cost("evaluate_flux", v3));
  CHECK(pointwise_cost("flux_jump", v3) == 5.0);
  CHECK(pointwise_cost("rk_euler", v3) == 10.0);
  CHECK(pointwise_cost("rk_lerp", {2, false, false}) == 20.0);
  CHECK(pointwise_cost("evaluate_flux", {3, true, false}) > pointwise_cost("evaluate_flux", v3));
}

TEST_CASE("instrumented scalar counts arithmetic only") {
  OpCensus c;
  {
    CensusScope scope(c);
    Counted a(2.0), b(3.0);
    Counted x = a * b + a / b - b;
    x = -x;
    x = sqrt(abs(x));
    CHECK(static_cast<double>(x) == doctest::Approx(std::sqrt(std::abs(-(6.0 + 2.0 / 3.0 - 3.0)))));
    const bool lt = a < b;
    CHECK(lt);
  }
  CHECK(c.add == 2);
  CHECK(c.mul == 1);
  CHECK(c.div == 1);
  CHECK(c.sqrt == 1);
  CHECK(c.total() == 5);
}

TEST_CASE("census of the executed bodies equals the hand-tallied table") {
  struct Case {
    bool three_d;
    double mu;
    physics::RiemannSolver riemann;
  };
  for (const auto& c : {Case{false, 0.0, physics::RiemannSolver::Rusanov}, Case{true, 0.0, physics::RiemannSolver::Rusanov},
                        Case{false, 0.01, physics::RiemannSolver::Rusanov}, Case{true, 0.01, physics::RiemannSolver::Rusanov},
                        Case{false, 0.0, physics::RiemannSolver::Hllc}, Case{true, 0.01, physics::RiemannSolver::Hllc}}) {
    CAPTURE(c.three_d);
    CAPTURE(c.mu);
    const auto m = c.three_d ? periodic_cube(3, 0.0, 1.0, 0.1, 1) : periodic_square(4, 0.0, 1.0, 0.1, 1);
    auto cfg = zfr::testing::config(3);
    cfg.riemann = c.riemann;
    const auto shard = serial_shard(m);
    solver::Discretization d(shard, 3, gas_physics(c.mu), cfg, nullptr);
    solver::ResidualEvaluator ev(d, solver::standard_fusion_plan(), solver::execution_options(cfg));
    const auto q = random_state(d, 3);
    CHECK(ev.census_flops(q.data()) == ev.scheme_flops());
    PerfLedger ledger;
    std::vector<double> r;
    ev.compute(q, r, &ledger);
    CHECK(ledger.total_flops() == ev.scheme_flops());
  }
}

TEST_CASE("ledger gemm flops equal the sum of 2mnk at p = 3 on 100 quadrilaterals") {
  const auto m = periodic_square(10, 0.0, 1.0);
  const auto cfg = zfr::testing::config(3);
  const auto shard = serial_shard(m);
  solver::Discretization d(shard, 3, gas_physics(), cfg, nullptr);
  REQUIRE(d.nelem == 100);
  solver::ResidualEvaluator ev(d, solver::standard_fusion_plan(), solver::execution_options(cfg));
  PerfLedger ledger;
  std::vector<double> r;
  ev.compute(random_state(d, 1), r, &ledger);
  const std::int64_t ne = 100, nv = 4, ns = 16, nfp = 16;
  // interp: ns -> nfp, normal_interp: 2 ns -> nfp, divergence: 2 ns -> ns, correction: nfp -> ns.
  const double expect = flops_gemm(ne * nv, nfp, ns) + flops_gemm(ne * nv, nfp, 2 * ns) +
                        flops_gemm(ne * nv, ns, 2 * ns) + flops_gemm(ne * nv, ns, nfp);
  double gemm = 0.0;
  for (const auto& name : {"interp", "normal_interp", "divergence", "correction"}) gemm += ledger.kernel(name).flops;
  CHECK(gemm == expect);
  for (const auto& pass : ev.passes()) {
    const auto& node = ev.graph().kernels[static_cast<std::size_t>(pass.kernels.front())];
    if (node.cls == solver::KernelClass::Gemm) CHECK(ledger.kernel(pass.name).invocations > 0);
  }
}

TEST_CASE("bench CSV round trip and errors") {
  std::vector<BenchRecord> rs{record(1, 1, 1000, 0.5), record(2, 1, 1000, 0.26)};
  rs[1].fusion = true;
  std::string text = bench_csv_header() + "\n";
  for (const auto& r : rs) text += bench_csv_row(r) + "\n";
  CHECK(bench_csv_header() == "ranks,workers,elements,p,fusion,mean_step_s,flops,gflops_rate,bytes_moved");
  const auto back = parse_bench_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[1].ranks == 2);
  CHECK(back[1].fusion);
  CHECK(back[0].mean_step_s == 0.5);
  CHECK(back[1].bytes_moved == 12345);
  CHECK_THROWS_AS(parse_bench_csv("ranks,workers\n1,1\n"), FormatError);
  try {
    parse_bench_csv(bench_csv_header() + "\n1,1,10,3,off,0.1,1,1,1\n1,x,10,3,off,0.1,1,1,1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("scaling report") {
  SUBCASE("strong") {
    const auto rep = scaling_report({record(4, 1, 1000, 0.3), record(1, 1, 1000, 1.0), record(2, 1, 1000, 0.55)},
                                    ScalingMode::Strong);
    REQUIRE(rep.resources == std::vector<int>{1, 2, 4});
    CHECK(rep.speedup[1] == doctest::Approx(1.0 / 0.55));
    CHECK(rep.efficiency[2] == doctest::Approx(1.0 / 0.3 / 4.0));
    for (double e : rep.efficiency) {
      CHECK(e > 0.0);
      CHECK(e <= 1.05);
    }
    CHECK_FALSE(rep.superlinear);
    CHECK(scaling_csv(rep).rfind("resources,mean_step_s,speedup,efficiency,time_ratio\n", 0) == 0);
  }
  SUBCASE("superlinear strong scaling is flagged") {
    const auto rep = scaling_report({record(1, 1, 1000, 1.0), record(2, 1, 1000, 0.4)}, ScalingMode::Strong);
    CHECK(rep.superlinear);
  }
  SUBCASE("weak") {
    const auto rep = scaling_report({record(1, 1, 500, 1.0), record(2, 2, 2000, 1.25)}, ScalingMode::Weak);
    CHECK(rep.efficiency[1] == doctest::Approx(0.8));
    CHECK(rep.time_ratio[1] == doctest::Approx(1.25));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(scaling_report({record(1, 1, 1000, 1.0)}, ScalingMode::Strong), DomainError);
    CHECK_THROWS_AS(scaling_report({record(1, 1, 1000, 1.0), record(1, 1, 1000, 0.5)}, ScalingMode::Strong),
                    DomainError);
    CHECK_THROWS_AS(scaling_report({record(1, 1, 1000, 1.0), record(2, 1, 2000, 0.5)}, ScalingMode::Strong),
                    DomainError);
    CHECK_THROWS_AS(scaling_report({record(1, 1, 1000, 1.0), record(2, 1, 1000, 0.5)}, ScalingMode::Weak),
                    DomainError);
    CHECK_THROWS_AS(scaling_report({record(1, 1, 1000, 1.0), record(2, 1, 1000, 0.0)}, ScalingMode::Strong),
                    DomainError);
    CHECK_THROWS_AS(scaling_report({record(1, 1, 1000, 1.0), record(2, 1, 1000, 0.5, 2)}, ScalingMode::Strong),
                    DomainError);
    CHECK_THROWS_AS(scaling_mode_from_string("diagonal"), DomainError);
  }
}

TEST_CASE("step statistics") {
  const auto s = bench::step_statistics({3.0, 1.0, 2.0, 10.0});
  CHECK(s.mean == 4.0);
  CHECK(s.median == 2.5);
  CHECK(s.min == 1.0);
  CHECK(bench::step_statistics({2.0, 7.0, 1.0}).median == 2.0);
  CHECK_THROWS_AS(bench::step_statistics({}), DomainError);
}

TEST_CASE("benchmark_step") {
  const auto gas = physics::GasModel{};
  auto cfg = zfr::testing::config(2);
  bench::BenchOptions opt;
  opt.steps = 4;
  opt.warmup = 2;
  const double L = 2.0 * std::acos(-1.0);
  auto run = [&](int nx, bool fusion, int ranks = 1) {
    mesh::BoxSpec s;
    s.nx = nx;
    s.ny = s.nz = 3;
    s.hi = {L * nx / 3.0, L, L};
    s.periodic = {true, true, true};
    cfg.fusion = fusion;
    const auto m = mesh::make_box(s);
    opt.dt = 1e-3;
    return bench::benchmark_step(prep::partition_and_decompose(m, ranks), cfg, gas_physics(), tgv(gas), opt);
  };
  const auto base = run(3, true);
  CHECK(base.step_seconds.size() == 4);
  CHECK(base.stats.min <= base.stats.median);
  CHECK(base.stats.min <= base.stats.mean);
  CHECK(base.record.elements == 27);
  CHECK(base.record.gflops_rate > 0.0);
  CHECK(base.record.gflops_rate == doctest::Approx(base.record.flops / base.stats.mean * 1e-9));
  CHECK(base.ledger.kernels().at("evaluate_flux").invocations > 0);

  const auto doubled = run(6, true);
  CHECK(doubled.record.flops / base.record.flops == doctest::Approx(2.0).epsilon(0.01));

  const auto unfused = run(3, false);
  CHECK(unfused.record.flops == doctest::Approx(base.record.flops).epsilon(1e-12));
  CHECK(base.record.bytes_moved < unfused.record.bytes_moved);

  const auto two = run(6, true, 2);
  CHECK(two.record.ranks == 2);
  CHECK(two.record.flops == doctest::Approx(doubled.record.flops).epsilon(1e-12));

  opt.steps = 0;
  CHECK_THROWS_AS(run(3, true), DomainError);
}
