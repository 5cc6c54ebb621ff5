#include "zfr/physics/gas.hpp"

#include "zfr/common/error.hpp"

namespace zfr::physics {

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gas.gamma must be > 1");
  if (!(prandtl > 0.0)) throw ConfigError("gas.prandtl must be > 0");
  if (!(R > 0.0)) throw ConfigError("gas.R must be > 0");
  if (!(mu >= 0.0)) throw ConfigError("gas.mu must be >= 0");
  if (sutherland && !(T_ref > 0.0 && S > 0.0)) throw ConfigError("Sutherland constants must be > 0");
}

}  // namespace zfr::physics
