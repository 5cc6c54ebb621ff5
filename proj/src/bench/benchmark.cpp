#include "zfr/bench/benchmark.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "zfr/common/error.hpp"
#include "zfr/prep/cluster.hpp"

namespace zfr::bench {

StepStats step_statistics(std::vector<double> seconds) {
  if (seconds.empty()) throw DomainError("no step timings");
  std::sort(seconds.begin(), seconds.end());
  StepStats s;
  s.mean = std::accumulate(seconds.begin(), seconds.end(), 0.0) / static_cast<double>(seconds.size());
  const std::size_t n = seconds.size();
  s.median = n % 2 == 1 ? seconds[n / 2] : 0.5 * (seconds[n / 2 - 1] + seconds[n / 2]);
  s.min = seconds.front();
  return s;
}

BenchResult benchmark_step(const std::vector<prep::MeshShard>& shards, const solver::SolverConfig& config,
                           const solver::PhysicsConfig& physics, const solver::InitialCondition& init,
                           const BenchOptions& options) {
  if (options.steps < 1) throw DomainError("benchmark needs at least one measured step");
  if (options.warmup < 0) throw DomainError("negative warm-up step count");
  if (shards.empty()) throw DomainError("no shards");

  const auto nranks = static_cast<int>(shards.size());
  BenchResult out;
  out.step_seconds.assign(static_cast<std::size_t>(options.steps), 0.0);
  std::int64_t elements = 0;
  std::mutex mu;
  prep::SimCluster::Options opt;
  opt.deliver_probability = 1.0;
  prep::SimCluster cluster(nranks, opt);
  cluster.run([&](prep::RankContext& ctx) {
    solver::Solver s(shards[static_cast<std::size_t>(ctx.rank())], config, physics, &ctx);
    s.initialize(init);
    s.run_startup();
    const double dt = options.dt ? *options.dt : s.stable_dt();
    s.run(options.warmup, dt);
    s.ledger() = perf::PerfLedger{};
    s.run(options.steps, dt);
    std::lock_guard lock(mu);
    const auto& t = s.ledger().step_seconds();
    for (std::size_t i = 0; i < t.size(); ++i) out.step_seconds[i] = std::max(out.step_seconds[i], t[i]);
    perf::PerfLedger counters;
    for (const auto& [name, c] : s.ledger().kernels()) counters.kernel(name).merge(c);
    out.ledger.merge(counters);
    elements += static_cast<std::int64_t>(s.discretization().nelem);
    out.dt = dt;
  });

  out.stats = step_statistics(out.step_seconds);
  auto& r = out.record;
  r.ranks = nranks;
  r.workers = config.workers;
  r.elements = elements;
  r.p = config.p;
  r.fusion = config.fusion;
  r.mean_step_s = out.stats.mean;
  r.flops = out.ledger.total_flops() / options.steps;
  r.gflops_rate = r.flops / out.stats.mean * 1e-9;
  r.bytes_moved = out.ledger.total_bytes_moved() / static_cast<std::uint64_t>(options.steps);
  out.ledger.meta = {r.p, r.elements, r.ranks, r.workers, r.fusion};
  for (double t : out.step_seconds) out.ledger.record_step(t);
  return out;
}

}  // namespace zfr::bench
