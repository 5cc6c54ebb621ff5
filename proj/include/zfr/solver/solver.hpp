#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "zfr/perf/ledger.hpp"
#include "zfr/prep/shard.hpp"
#include "zfr/solver/residual.hpp"
#include "zfr/solver/time.hpp"

namespace zfr::solver {

using InitialCondition = std::function<physics::State<double>(const Vec3& x)>;

ExecutionOptions execution_options(const SolverConfig& config);

/// Time-stepping driver of one rank. Collective operations (construction,
/// residuals, dt, restarts, totals) must be issued by every rank in the same order.
class Solver {
 public:
  /// Starts at degree 0 when config.startup_steps > 0, else at config.p.
  Solver(prep::MeshShard shard, SolverConfig config, PhysicsConfig physics, prep::RankContext* ctx = nullptr);

  void initialize(const InitialCondition& init);
  /// Runs config.startup_steps steps at degree 0, then restarts at config.p.
  /// No-op when no startup phase is configured.
  void run_startup();
  /// Interpolates the state to degree p and rebuilds the discretization.
  void restart_at_degree(int p);

  double stable_dt() const;
  /// One RK step; throws StateError (state unchanged) on a non-physical stage.
  void step(double dt);
  /// Steps with the stable dt each step (or `fixed_dt`); returns the time reached.
  double run(int steps, std::optional<double> fixed_dt = std::nullopt);

  std::vector<double>& state() { return q_; }
  const std::vector<double>& state() const { return q_; }
  const Discretization& discretization() const { return *disc_; }
  ResidualEvaluator& evaluator() { return *eval_; }
  perf::PerfLedger& ledger() { return ledger_; }
  const SolverConfig& config() const { return config_; }
  double time() const { return time_; }
  int degree() const { return disc_->ref.p; }

  /// Integral of each conserved variable over the domain (all ranks, rank order).
  std::vector<double> totals() const;

 private:
  void build(int p);

  prep::MeshShard shard_;
  SolverConfig config_;
  PhysicsConfig physics_;
  prep::RankContext* ctx_;
  std::unique_ptr<Discretization> disc_;
  std::unique_ptr<ResidualEvaluator> eval_;
  std::vector<double> q_;
  perf::PerfLedger ledger_;
  double time_ = 0.0;
  RKScheme rk_ = RKScheme::ssp3();
};

/// Final solution values per cell ([var][point]) plus merged counters.
struct DistributedRun {
  std::map<GlobalId, std::vector<double>> cells;
  perf::PerfLedger ledger;
  double time = 0.0;
};

/// Runs `steps` steps on one in-process rank per shard.
DistributedRun run_distributed(const std::vector<prep::MeshShard>& shards, const SolverConfig& config,
                               const PhysicsConfig& physics, const InitialCondition& init, int steps,
                               std::optional<double> fixed_dt = std::nullopt);

}  // namespace zfr::solver
