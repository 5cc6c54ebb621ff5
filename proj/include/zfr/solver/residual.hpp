#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <functional>

#include "zfr/perf/flops.hpp"
#include "zfr/perf/ledger.hpp"
#include "zfr/physics/boundary.hpp"
#include "zfr/solver/discretization.hpp"
#include "zfr/solver/kernel_graph.hpp"
#include "zfr/solver/worker_pool.hpp"

namespace zfr::solver {

struct ExecutionOptions {
  bool double_buffering = true;
  std::size_t scratch_bytes = 256 * 1024;
  int workers = 1;
  /// Static contiguous work split. Otherwise GEMM blocks and face chunks are
  /// claimed dynamically; every output entry is still computed by one worker
  /// with the same operation order, so results do not change.
  bool deterministic = true;
};

/// Evaluates dQ/dt by executing the residual kernel graph pass by pass over
/// element blocks and face chunks.
class ResidualEvaluator {
 public:
  /// Throws DomainError if the plan is invalid for the graph or fuses kernels
  /// that have no fused implementation.
  ResidualEvaluator(const Discretization& disc, const FusionPlan& plan, ExecutionOptions options,
                    prep::RankContext* ctx = nullptr);

  /// Q and R have Discretization::field_size() entries. Collective across
  /// ranks. Throws StateError carrying the cell id on a non-physical state.
  void compute(const double* Q, double* R, perf::PerfLedger* ledger = nullptr);
  void compute(const std::vector<double>& Q, std::vector<double>& R, perf::PerfLedger* ledger = nullptr);

  const KernelGraph& graph() const { return graph_; }
  const std::vector<Pass>& passes() const { return passes_; }
  std::size_t block_size() const { return block_; }
  std::size_t block_count() const { return nblocks_; }
  std::uint64_t riemann_fallbacks() const { return fallbacks_.load(); }
  std::uint64_t reversed_inflow() const { return reversed_inflow_.load(); }

  /// Interface arrays of the last evaluation, for inspection in tests.
  const std::vector<double>& face_solution() const { return qf_; }
  const std::vector<double>& remote_face_solution() const { return qf_remote_; }

  /// Operations of one residual evaluation counted by running the point-wise
  /// bodies and one element's matrix products on the instrumented scalar,
  /// scaled by the number of points of each kind.
  double census_flops(const double* Q) const;

  /// Hand-tallied counts of the same evaluation (no execution).
  double scheme_flops() const;

 private:
  struct Stream {
    const double* base;
    std::size_t per_elem;
  };
  struct OutStream {
    double* base;
    std::size_t per_elem;
  };
  using ElementBody = std::function<void(int worker, std::size_t e0, std::size_t e1, const std::vector<const double*>& in)>;
  enum class FaceMode { Solution, Flux, FusedFlux };

  void run_pass(const Pass& pass);
  void run_gemm(const std::string& name, const double* A, std::size_t rows_per_elem, std::size_t k,
                const fr::Matrix& opT, double* C, bool accumulate);
  void run_element(const std::string& name, const std::vector<Stream>& in, const std::vector<OutStream>& out,
                   const ElementBody& body, double flops);
  void run_faces(const std::string& name, FaceMode mode);
  void run_chain(const std::string& name, bool sum, bool scale, bool source);
  void run_evaluate_flux();
  void run_transform_gradient();
  void run_flux_jump();
  perf::KernelCounters& counters(int worker, const std::string& name);

  const Discretization& d_;
  ExecutionOptions opt_;
  prep::RankContext* ctx_;
  KernelGraph graph_;
  std::vector<Pass> passes_;
  WorkerPool pool_;
  std::size_t block_ = 1;
  std::size_t nblocks_ = 1;
  perf::PointwiseVariant variant_;

  const double* q_ = nullptr;
  double* r_ = nullptr;
  std::vector<double> qf_, qf_remote_, fhat_, fn_, divf_, fi_, jump_, corrf_;
  std::vector<double> sjump_, gref_, grad_, gradf_, gradf_remote_;

  std::vector<std::array<std::vector<double>, 2>> scratch_;
  std::vector<perf::PerfLedger> worker_ledgers_;
  std::atomic<std::uint64_t> fallbacks_{0};
  std::atomic<std::uint64_t> reversed_inflow_{0};
};

}  // namespace zfr::solver
