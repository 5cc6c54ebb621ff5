#pragma once

#include <optional>
#include <vector>

#include "zfr/perf/ledger.hpp"
#include "zfr/perf/scaling.hpp"
#include "zfr/solver/solver.hpp"

namespace zfr::bench {

struct BenchOptions {
  int steps = 50;   ///< measured steps
  int warmup = 3;   ///< leading steps excluded from timing and counters
  /// Fixed step size; unset takes the stable dt of the initial state.
  std::optional<double> dt;
};

struct StepStats {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
};

/// Throws DomainError for an empty sample.
StepStats step_statistics(std::vector<double> seconds);

struct BenchResult {
  perf::BenchRecord record;
  StepStats stats;
  /// Wall time of each measured step, the slowest rank per step.
  std::vector<double> step_seconds;
  /// Counters of the measured steps, merged over ranks.
  perf::PerfLedger ledger;
  double dt = 0.0;
};

/// Runs warmup + steps time steps on one in-process rank per shard and
/// reports per-step timing, flops and bytes. Throws DomainError for
/// steps < 1 or warmup < 0.
BenchResult benchmark_step(const std::vector<prep::MeshShard>& shards, const solver::SolverConfig& config,
                           const solver::PhysicsConfig& physics, const solver::InitialCondition& init,
                           const BenchOptions& options = {});

}  // namespace zfr::bench
