#pragma once

#include <array>
#include <functional>
#include <vector>

#include "zfr/prep/transport.hpp"
#include "zfr/solver/discretization.hpp"

namespace zfr::solver {

/// Explicit SSP Runge-Kutta scheme as convex combinations: stage i sets
/// q_i = a_i q_0 + b_i (q_{i-1} + dt R(q_{i-1})), with q_{-1} = q_0.
struct RKScheme {
  std::vector<std::array<double, 2>> stages;  ///< (a_i, b_i)

  /// Three stages, third order: (0, 1), (3/4, 1/4), (1/3, 2/3).
  static RKScheme ssp3();
  /// Throws DomainError unless every row is nonnegative and sums to one and
  /// the first row is a pure Euler step.
  void validate() const;
};

using ResidualFn = std::function<void(const std::vector<double>& q, std::vector<double>& r)>;
using StageCheck = std::function<void(const std::vector<double>& q)>;

/// One step. Stages after the first are written q_0 + b (V - q_0), so a zero
/// residual leaves q bitwise unchanged. `check` runs on every stage value and
/// may throw to abort the step (q is then left at the last completed stage
/// input, i.e. unchanged). Throws DomainError for dt <= 0.
void advance_rk(const RKScheme& rk, std::vector<double>& q, double dt, const ResidualFn& residual,
                const StageCheck& check = {});

/// CFL * min_e h_e / (max_pts(|u| + c) (2p + 1)) with h_e = volume / largest
/// face area, reduced to the global minimum across ranks.
double compute_dt(const Discretization& disc, const std::vector<double>& Q, double cfl,
                  prep::RankContext* ctx = nullptr);

/// Throws StateError naming the cell at the first inadmissible solution point.
void check_admissible(const Discretization& disc, const std::vector<double>& Q);

}  // namespace zfr::solver
