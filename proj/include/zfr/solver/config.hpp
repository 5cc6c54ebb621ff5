#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zfr/physics/boundary.hpp"
#include "zfr/physics/gas.hpp"
#include "zfr/physics/riemann.hpp"
#include "zfr/physics/sponge.hpp"

namespace zfr::solver {

struct SolverConfig {
  int p = 3;
  double cfl = 0.25;            ///< 3-D p = 3 with SSP-RK3 diverges near 0.4
  std::string rk = "ssp3";
  bool fusion = true;
  int block_kb = 256;           ///< scratch budget that sets the block size
  bool deterministic = false;   ///< static scheduling and rank-ordered reductions
  bool double_buffering = true;
  int workers = 1;
  physics::RiemannSolver riemann = physics::RiemannSolver::Rusanov;
  double ldg_beta = 0.5;
  double ldg_tau = 0.0;         ///< 0 selects 0.1 (p+1)^2 / h_min
  int startup_steps = 0;        ///< steps at p = 0 before restarting at p

  /// Throws ConfigError for out-of-range values.
  void validate() const;
};

struct PhysicsConfig {
  physics::GasModel gas;
  std::vector<physics::BoundarySpec> boundaries;  ///< one per patch that owns boundary faces
  std::vector<physics::SpongeZone> sponges;
};

/// True when ZFR_DETERMINISTIC=1 is set, otherwise `configured`.
bool deterministic_mode(bool configured);

}  // namespace zfr::solver
