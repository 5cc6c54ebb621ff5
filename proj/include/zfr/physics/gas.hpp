#pragma once

#include <cmath>

namespace zfr::physics {

/// Calorically perfect gas with constant or Sutherland viscosity.
struct GasModel {
  double gamma = 1.4;
  double prandtl = 0.72;
  double R = 1.0;
  double mu = 0.0;  ///< constant viscosity, or reference viscosity for Sutherland
  bool sutherland = false;
  double T_ref = 273.15;
  double S = 110.4;

  double cp() const { return gamma * R / (gamma - 1.0); }
  double cv() const { return R / (gamma - 1.0); }
  bool viscous() const { return mu > 0.0; }

  template <class T>
  T viscosity(const T& temperature) const {
    if (!sutherland) return T(mu);
    using std::sqrt;
    const T ratio = temperature / T_ref;
    return mu * ratio * sqrt(ratio) * (T_ref + S) / (temperature + S);
  }

  /// Throws ConfigError unless gamma > 1, Pr > 0, R > 0 and mu >= 0.
  void validate() const;
};

}  // namespace zfr::physics
