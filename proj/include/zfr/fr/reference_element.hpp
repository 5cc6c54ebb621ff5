#pragma once

#include <array>
#include <vector>

#include "zfr/fr/matrix.hpp"
#include "zfr/mesh/mesh.hpp"

namespace zfr::fr {

constexpr int kMaxDegree = 8;

/// Tensor-product reference element with Gauss-Legendre solution points and
/// Gauss-Legendre flux points on every face, carrying the operators of the
/// DG-equivalent flux-reconstruction scheme.
///
/// Solution point (i, j, k) has index i + n1*(j + n1*k). Flux points are
/// grouped by local face; inside a face, point (a, b) has index a + n1*b in the
/// face parameters (s, t) of the mesh face cycle.
struct ReferenceElement {
  mesh::ElementKind kind = mesh::ElementKind::Quadrilateral;
  int p = 0;
  int dim = 2;
  int n1 = 1;        ///< points per direction
  int ns = 1;        ///< solution points
  int nfaces = 4;
  int nfp_face = 1;  ///< flux points per face
  int nfp = 4;       ///< flux points, all faces

  std::vector<double> nodes1d;
  std::vector<double> weights1d;
  std::vector<Vec3> solution_points;
  std::vector<double> solution_weights;  ///< tensor quadrature weights
  std::vector<Vec3> flux_points;
  std::vector<double> flux_weights;  ///< face quadrature weights
  std::vector<int> flux_face;        ///< local face of each flux point
  std::vector<mesh::ReferenceNormal> flux_normal;

  Matrix interp;               ///< nfp x ns: values at flux points
  std::array<Matrix, 3> deriv; ///< ns x ns: d/dxi_a at solution points
  Matrix divergence;           ///< ns x (dim*ns): sum_a d/dxi_a of component a
  Matrix normal_interp;        ///< nfp x (dim*ns): outward reference-normal component at flux points
  Matrix correction;           ///< ns x nfp: lifting of outward normal flux jumps
  Matrix gradient;             ///< (dim*ns) x ns: reference gradient
  Matrix gradient_correction;  ///< (dim*ns) x nfp: lifting of solution jumps into each gradient component

  // Transposes used as right-hand operands of C = A * OpT.
  Matrix interp_t, divergence_t, normal_interp_t, correction_t, gradient_t, gradient_correction_t;
};

/// Throws DomainError for p outside [0, kMaxDegree].
ReferenceElement build_reference_element(mesh::ElementKind kind, int p);

/// Lagrange interpolation matrix from `from` solution points to `to` solution points
/// (same kind), used to restart at a different degree.
Matrix degree_transfer(const ReferenceElement& from, const ReferenceElement& to);

/// Values at arbitrary reference points.
Matrix evaluation_matrix(const ReferenceElement& ref, const std::vector<Vec3>& points);

}  // namespace zfr::fr
