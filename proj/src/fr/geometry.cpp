#include "zfr/fr/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "zfr/common/error.hpp"

namespace zfr::fr {

namespace {

double shape(mesh::ElementKind kind, int v, const Vec3& xi, int diff_axis) {
  const auto r = mesh::reference_vertex(kind, v);
  const int d = mesh::dimension(kind);
  double value = 1.0;
  for (int a = 0; a < d; ++a) value *= a == diff_axis ? 0.5 * r[a] : 0.5 * (1.0 + r[a] * xi[a]);
  return value;
}

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 adjugate3(const Mat3& m) {
  Mat3 a{};
  a[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  a[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  a[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  a[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  a[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  a[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  a[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  a[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  a[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return a;
}

}  // namespace

Vec3 map_point(mesh::ElementKind kind, std::span<const Vec3> vertices, const Vec3& xi) {
  Vec3 x{0.0, 0.0, 0.0};
  for (int v = 0; v < mesh::vertex_count(kind); ++v) {
    const double n = shape(kind, v, xi, -1);
    for (int a = 0; a < 3; ++a) x[a] += n * vertices[v][a];
  }
  return x;
}

Mat3 map_jacobian(mesh::ElementKind kind, std::span<const Vec3> vertices, const Vec3& xi) {
  const int d = mesh::dimension(kind);
  Mat3 J{};
  for (int b = 0; b < d; ++b) {
    for (int v = 0; v < mesh::vertex_count(kind); ++v) {
      const double dn = shape(kind, v, xi, b);
      for (int a = 0; a < d; ++a) J[a][b] += dn * vertices[v][a];
    }
  }
  if (d == 2) J[2][2] = 1.0;
  return J;
}

ElementGeometry compute_geometry(std::span<const Vec3> vertices, const ReferenceElement& ref, GlobalId cell) {
  if (static_cast<int>(vertices.size()) != mesh::vertex_count(ref.kind)) {
    throw GeometryError(cell, "vertex count does not match the element kind");
  }
  ElementGeometry g;
  for (int s = 0; s < ref.ns; ++s) {
    const auto& xi = ref.solution_points[s];
    const auto J = map_jacobian(ref.kind, vertices, xi);
    const double det = det3(J);
    if (!(det > 0.0)) throw GeometryError(cell, "inverted element (|J| <= 0 at a solution point)");
    g.x.push_back(map_point(ref.kind, vertices, xi));
    g.jacobian.push_back(J);
    g.det.push_back(det);
    g.adjugate.push_back(adjugate3(J));
    g.volume += ref.solution_weights[s] * det;
  }
  std::vector<double> face_area(ref.nfaces, 0.0);
  for (int f = 0; f < ref.nfp; ++f) {
    const auto& xi = ref.flux_points[f];
    const auto J = map_jacobian(ref.kind, vertices, xi);
    if (!(det3(J) > 0.0)) throw GeometryError(cell, "inverted element (|J| <= 0 at a flux point)");
    const auto adj = adjugate3(J);
    const auto nr = ref.flux_normal[f];
    Vec3 n{0.0, 0.0, 0.0};
    for (int a = 0; a < ref.dim; ++a) n[a] = nr.sign * adj[nr.axis][a];
    const double dA = norm(n);
    g.face_x.push_back(map_point(ref.kind, vertices, xi));
    g.normal.push_back((1.0 / dA) * n);
    g.area.push_back(dA);
    face_area[ref.flux_face[f]] += ref.flux_weights[f] * dA;
  }
  g.max_face_area = *std::max_element(face_area.begin(), face_area.end());
  return g;
}

}  // namespace zfr::fr
