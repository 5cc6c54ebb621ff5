#include "zfr/solver/solver.hpp"

#include <chrono>
#include <mutex>

#include "zfr/common/error.hpp"
#include "zfr/prep/nbx.hpp"

namespace zfr::solver {

ExecutionOptions execution_options(const SolverConfig& config) {
  ExecutionOptions o;
  o.double_buffering = config.double_buffering;
  o.scratch_bytes = static_cast<std::size_t>(config.block_kb) * 1024;
  o.workers = config.workers;
  o.deterministic = deterministic_mode(config.deterministic);
  return o;
}

Solver::Solver(prep::MeshShard shard, SolverConfig config, PhysicsConfig physics, prep::RankContext* ctx)
    : shard_(std::move(shard)), config_(std::move(config)), physics_(std::move(physics)), ctx_(ctx) {
  config_.validate();
  build(config_.startup_steps > 0 ? 0 : config_.p);
  ledger_.meta.p = disc_->ref.p;
  ledger_.meta.elements = static_cast<std::int64_t>(disc_->nelem);
  ledger_.meta.ranks = shard_.nranks;
  ledger_.meta.workers = config_.workers;
  ledger_.meta.fusion = config_.fusion;
}

void Solver::build(int p) {
  eval_.reset();
  disc_ = std::make_unique<Discretization>(shard_, p, physics_, config_, ctx_);
  const FusionPlan plan = config_.fusion ? standard_fusion_plan() : FusionPlan{};
  eval_ = std::make_unique<ResidualEvaluator>(*disc_, plan, execution_options(config_), ctx_);
}

void Solver::initialize(const InitialCondition& init) {
  const auto nv = static_cast<std::size_t>(disc_->nv);
  const auto ns = static_cast<std::size_t>(disc_->ref.ns);
  q_.assign(disc_->field_size(), 0.0);
  for (std::size_t e = 0; e < disc_->nelem; ++e) {
    for (std::size_t i = 0; i < ns; ++i) {
      const auto s = init(disc_->x[e * ns + i]);
      for (std::size_t v = 0; v < nv; ++v) q_[(e * nv + v) * ns + i] = s[v];
    }
  }
  time_ = 0.0;
}

void Solver::restart_at_degree(int p) {
  const auto old_ref = disc_->ref;
  const auto nv = static_cast<std::size_t>(disc_->nv);
  build(p);
  const auto T = fr::degree_transfer(old_ref, disc_->ref);
  const auto ns_old = static_cast<std::size_t>(old_ref.ns);
  const auto ns = static_cast<std::size_t>(disc_->ref.ns);
  std::vector<double> q(disc_->field_size(), 0.0);
  for (std::size_t e = 0; e < disc_->nelem; ++e) {
    for (std::size_t v = 0; v < nv; ++v) {
      const double* src = q_.data() + (e * nv + v) * ns_old;
      double* dst = q.data() + (e * nv + v) * ns;
      for (std::size_t i = 0; i < ns; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < ns_old; ++j) s += T(static_cast<int>(i), static_cast<int>(j)) * src[j];
        dst[i] = s;
      }
    }
  }
  q_ = std::move(q);
  ledger_.meta.p = p;
}

void Solver::run_startup() {
  if (config_.startup_steps <= 0) return;
  if (disc_->ref.p != 0) throw DomainError("startup phase must begin at degree 0");
  run(config_.startup_steps);
  restart_at_degree(config_.p);
}

double Solver::stable_dt() const { return compute_dt(*disc_, q_, config_.cfl, ctx_); }

void Solver::step(double dt) {
  const auto t0 = std::chrono::steady_clock::now();
  auto residual = [&](const std::vector<double>& q, std::vector<double>& r) {
    r.resize(q.size());
    eval_->compute(q.data(), r.data(), &ledger_);
  };
  auto check = [&](const std::vector<double>& q) { check_admissible(*disc_, q); };
  advance_rk(rk_, q_, dt, residual, check);
  const auto pts = static_cast<std::int64_t>(disc_->nelem * static_cast<std::size_t>(disc_->ref.ns));
  perf::PointwiseVariant var{disc_->dim, disc_->flux.viscous, disc_->flux.riemann == physics::RiemannSolver::Hllc};
  auto& k = ledger_.kernel("rk_update");
  k.flops += perf::flops_pointwise("rk_euler", pts, var);
  k.flops += static_cast<double>(rk_.stages.size() - 1) * perf::flops_pointwise("rk_lerp", pts, var);
  const std::uint64_t entries = disc_->field_size();
  k.bytes_read += entries * sizeof(double) * (2 + 3 * (rk_.stages.size() - 1));
  k.bytes_written += entries * sizeof(double) * rk_.stages.size();
  k.invocations += rk_.stages.size();
  time_ += dt;
  ledger_.record_step(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

double Solver::run(int steps, std::optional<double> fixed_dt) {
  for (int s = 0; s < steps; ++s) step(fixed_dt ? *fixed_dt : stable_dt());
  return time_;
}

std::vector<double> Solver::totals() const {
  const auto nv = static_cast<std::size_t>(disc_->nv);
  const auto ns = static_cast<std::size_t>(disc_->ref.ns);
  std::vector<double> t(nv, 0.0);
  for (std::size_t e = 0; e < disc_->nelem; ++e) {
    for (std::size_t v = 0; v < nv; ++v) {
      double s = 0.0;
      for (std::size_t i = 0; i < ns; ++i)
        s += disc_->ref.solution_weights[i] * disc_->det[e * ns + i] * q_[(e * nv + v) * ns + i];
      t[v] += s;
    }
  }
  return ctx_ && ctx_->nranks() > 1 ? prep::allreduce_sum(*ctx_, t) : t;
}

DistributedRun run_distributed(const std::vector<prep::MeshShard>& shards, const SolverConfig& config,
                               const PhysicsConfig& physics, const InitialCondition& init, int steps,
                               std::optional<double> fixed_dt) {
  DistributedRun out;
  std::mutex mu;
  prep::SimCluster::Options opt;
  opt.deliver_probability = 1.0;
  prep::SimCluster cluster(static_cast<int>(shards.size()), opt);
  cluster.run([&](prep::RankContext& ctx) {
    Solver s(shards[static_cast<std::size_t>(ctx.rank())], config, physics, &ctx);
    s.initialize(init);
    s.run_startup();
    s.run(steps, fixed_dt);
    const auto& d = s.discretization();
    const auto per = static_cast<std::size_t>(d.nv * d.ref.ns);
    std::lock_guard lock(mu);
    for (std::size_t e = 0; e < d.nelem; ++e) {
      out.cells[d.cell_ids[e]] = std::vector<double>(s.state().begin() + static_cast<std::ptrdiff_t>(e * per),
                                                     s.state().begin() + static_cast<std::ptrdiff_t>((e + 1) * per));
    }
    out.ledger.merge(s.ledger());
    out.time = s.time();
  });
  return out;
}

}  // namespace zfr::solver
