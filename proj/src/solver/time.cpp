#include "zfr/solver/time.hpp"

#include <cmath>
#include <limits>

#include "zfr/common/error.hpp"
#include "zfr/prep/nbx.hpp"
#include "zfr/solver/pointwise.hpp"

namespace zfr::solver {

RKScheme RKScheme::ssp3() { return RKScheme{{{0.0, 1.0}, {0.75, 0.25}, {1.0 / 3.0, 2.0 / 3.0}}}; }

void RKScheme::validate() const {
  if (stages.empty()) throw DomainError("RK scheme has no stages");
  for (const auto& [a, b] : stages) {
    if (a < 0.0 || b < 0.0) throw DomainError("RK coefficients must be nonnegative");
    if (std::abs(a + b - 1.0) > 1e-15) throw DomainError("RK stage coefficients must sum to one");
  }
  if (stages.front()[1] != 1.0) throw DomainError("first RK stage must be an Euler step");
}

void advance_rk(const RKScheme& rk, std::vector<double>& q, double dt, const ResidualFn& residual,
                const StageCheck& check) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  rk.validate();
  const std::size_t n = q.size();
  std::vector<double> stage(q), next(n), r(n);
  for (std::size_t s = 0; s < rk.stages.size(); ++s) {
    residual(stage, r);
    const double b = rk.stages[s][1];
    if (s == 0) {
      for (std::size_t i = 0; i < n; ++i) next[i] = rk_euler_entry(stage[i], r[i], dt);
    } else {
      for (std::size_t i = 0; i < n; ++i) next[i] = rk_lerp_entry(q[i], stage[i], r[i], dt, b);
    }
    if (check) check(next);
    std::swap(stage, next);
  }
  q.swap(stage);
}

double compute_dt(const Discretization& disc, const std::vector<double>& Q, double cfl, prep::RankContext* ctx) {
  if (!(cfl > 0.0)) throw DomainError("CFL must be positive");
  const auto nv = static_cast<std::size_t>(disc.nv);
  const auto ns = static_cast<std::size_t>(disc.ref.ns);
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < disc.nelem; ++e) {
    double smax = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
      physics::State<double> q{};
      for (std::size_t v = 0; v < nv; ++v) q[v] = Q[(e * nv + v) * ns + i];
      physics::Primitive<double> w;
      try {
        w = physics::to_primitive(q, disc.dim, disc.flux.gas);
      } catch (const StateError& err) {
        throw StateError(err.what(), disc.cell_ids[e]);
      }
      double u2 = 0.0;
      for (int a = 0; a < disc.dim; ++a) u2 += w.u[a] * w.u[a];
      smax = std::max(smax, std::sqrt(u2) + physics::sound_speed(w, disc.flux.gas));
    }
    dt = std::min(dt, cfl * disc.length_scale[e] / (smax * (2 * disc.ref.p + 1)));
  }
  if (ctx && ctx->nranks() > 1) dt = prep::allreduce_min(*ctx, dt);
  return dt;
}

void check_admissible(const Discretization& disc, const std::vector<double>& Q) {
  const auto nv = static_cast<std::size_t>(disc.nv);
  const auto ns = static_cast<std::size_t>(disc.ref.ns);
  for (std::size_t e = 0; e < disc.nelem; ++e) {
    for (std::size_t i = 0; i < ns; ++i) {
      physics::State<double> q{};
      for (std::size_t v = 0; v < nv; ++v) q[v] = Q[(e * nv + v) * ns + i];
      if (!physics::admissible(q, disc.dim, disc.flux.gas) || !std::isfinite(q[0]))
        throw StateError("non-physical state after stage", disc.cell_ids[e]);
    }
  }
}

}  // namespace zfr::solver
