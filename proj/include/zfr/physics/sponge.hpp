#pragma once

#include <array>
#include <vector>

#include "zfr/physics/state.hpp"

namespace zfr::physics {

/// Axis-aligned slab lo <= x[axis] <= hi. The damping ramps up from the
/// `ramp_from_high ? hi : lo` edge over `width` and is sigma0 beyond it.
struct SpongeZone {
  int axis = 0;
  double lo = 0.0;
  double hi = 0.0;
  double width = 1.0;
  double sigma0 = 0.0;
  bool ramp_from_high = false;
  State<double> reference{};
};

/// sigma0 s^3 (10 - 15 s + 6 s^2) with s the clamped penetration fraction; zero outside.
double sponge_strength(const SpongeZone& zone, const std::array<double, 3>& x);

/// S = -sigma(x) (q - q_ref), summed over zones.
State<double> sponge_source(const std::vector<SpongeZone>& zones, const State<double>& q,
                            const std::array<double, 3>& x, int dim);

}  // namespace zfr::physics
