#include "zfr/physics/sponge.hpp"

#include <algorithm>

namespace zfr::physics {

double sponge_strength(const SpongeZone& z, const std::array<double, 3>& x) {
  const double xa = x[z.axis];
  if (xa < z.lo || xa > z.hi) return 0.0;
  const double depth = z.ramp_from_high ? z.hi - xa : xa - z.lo;
  const double s = std::clamp(depth / z.width, 0.0, 1.0);
  return z.sigma0 * s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

State<double> sponge_source(const std::vector<SpongeZone>& zones, const State<double>& q,
                            const std::array<double, 3>& x, int dim) {
  State<double> s{};
  for (const auto& z : zones) {
    const double sigma = sponge_strength(z, x);
    if (sigma == 0.0) continue;
    for (int v = 0; v < nvars(dim); ++v) s[v] -= sigma * (q[v] - z.reference[v]);
  }
  return s;
}

}  // namespace zfr::physics
