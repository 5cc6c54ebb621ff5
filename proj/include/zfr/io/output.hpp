#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "zfr/physics/gas.hpp"
#include "zfr/prep/shard.hpp"
#include "zfr/solver/discretization.hpp"

namespace zfr::io {

/// Point fields on equispaced sub-cells of every element. Points are not shared
/// between elements, so discontinuities stay visible.
struct SolutionSample {
  int dim = 2;
  int order = 1;
  std::vector<Vec3> points;
  std::vector<double> rho, p, T, q_criterion;  ///< q_criterion empty unless requested
  std::vector<std::array<double, 3>> u;
  std::vector<std::array<std::size_t, 8>> subcells;  ///< 4 or 8 point indices, VTK order
};

/// Interpolates the state to (order+1)^dim equispaced points per element.
/// Throws StateError naming the cell for a non-physical interpolated state.
SolutionSample sample_solution(const prep::MeshShard& shard, const solver::Discretization& disc,
                               const std::vector<double>& q, const physics::GasModel& gas, int order,
                               bool q_criterion = false);

/// VTK legacy ASCII unstructured grid with point data.
std::string vtk_text(const SolutionSample& s, const std::string& title = "zfr solution");
void write_vtk(const SolutionSample& s, const std::filesystem::path& path);

/// M_is = sqrt(2/(gamma-1) ((p0/p)^((gamma-1)/gamma) - 1)); 0 where p >= p0.
double isentropic_mach(double p, double p0, double gamma);

struct SurfacePoint {
  Vec3 x{};
  double p = 0.0;
  double T = 0.0;
  double mach_is = 0.0;
};

/// Values at the flux points of boundary faces on `patch`, in face order.
/// Throws ConfigError for an unknown patch name.
std::vector<SurfacePoint> sample_surface(const prep::MeshShard& shard, const solver::Discretization& disc,
                                         const std::vector<double>& q, const physics::GasModel& gas,
                                         const std::string& patch, double p0);

/// Columns x,y,z,p,T,M_is.
std::string surface_csv(const std::vector<SurfacePoint>& points);
void write_surface_csv(const std::vector<SurfacePoint>& points, const std::filesystem::path& path);

/// Running mean of a field over accumulated snapshots.
class RunningMean {
 public:
  void add(const std::vector<double>& field);
  const std::vector<double>& mean() const { return mean_; }
  std::size_t count() const { return count_; }

 private:
  std::vector<double> mean_;
  std::size_t count_ = 0;
};

}  // namespace zfr::io
