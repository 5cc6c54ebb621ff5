#pragma once

#include <array>
#include <span>
#include <vector>

#include "zfr/fr/reference_element.hpp"

namespace zfr::fr {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Mapping quantities of one element, pre-evaluated at its points.
/// For 2-D elements the third row and column are identity / zero.
struct ElementGeometry {
  std::vector<Vec3> x;           ///< physical solution points
  std::vector<Mat3> jacobian;    ///< J(a, b) = dx_a / dxi_b at solution points
  std::vector<double> det;       ///< |J| at solution points
  std::vector<Mat3> adjugate;    ///< |J| J^{-1} at solution points

  std::vector<Vec3> face_x;      ///< physical flux points
  std::vector<Vec3> normal;      ///< unit outward normal at flux points
  std::vector<double> area;      ///< surface scaling |adj(J)^T n_ref| at flux points

  double volume = 0.0;
  double max_face_area = 0.0;
  /// Element length scale volume / largest face area (1 for a unit cube).
  double length_scale() const { return volume / max_face_area; }
};

/// Physical coordinates of reference points under the bi/trilinear vertex map.
Vec3 map_point(mesh::ElementKind kind, std::span<const Vec3> vertices, const Vec3& xi);
Mat3 map_jacobian(mesh::ElementKind kind, std::span<const Vec3> vertices, const Vec3& xi);

/// Throws GeometryError naming `cell` if |J| <= 0 at any solution or flux point.
ElementGeometry compute_geometry(std::span<const Vec3> vertices, const ReferenceElement& ref, GlobalId cell);

/// Transformed flux components: Fhat_a = sum_b adj(a, b) F_b.
template <class T>
std::array<T, 3> transform_flux(const Mat3& adj, const std::array<T, 3>& f, int dim) {
  std::array<T, 3> out{};
  for (int a = 0; a < dim; ++a) {
    T s = adj[a][0] * f[0];
    for (int b = 1; b < dim; ++b) s = s + adj[a][b] * f[b];
    out[a] = s;
  }
  return out;
}

}  // namespace zfr::fr
