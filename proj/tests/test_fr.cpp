#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "zfr/common/error.hpp"
#include "zfr/fr/geometry.hpp"
#include "zfr/fr/polynomial.hpp"
#include "zfr/fr/reference_element.hpp"
#include "zfr/mesh/generate.hpp"

using namespace zfr;
using namespace zfr::fr;
using mesh::ElementKind;

namespace {

std::vector<double> apply(const Matrix& A, const std::vector<double>& v) {
  std::vector<double> out(A.rows, 0.0);
  for (int r = 0; r < A.rows; ++r) {
    for (int c = 0; c < A.cols; ++c) out[r] += A(r, c) * v[c];
  }
  return out;
}

std::vector<Vec3> cube(Vec3 lo, Vec3 hi) {
  std::vector<Vec3> v;
  for (int k = 0; k < 8; ++k) {
    const auto r = mesh::reference_vertex(ElementKind::Hexahedron, k);
    Vec3 x;
    for (int a = 0; a < 3; ++a) x[a] = r[a] < 0 ? lo[a] : hi[a];
    v.push_back(x);
  }
  return v;
}

// Radau correction polynomials written from Legendre polynomials (k = p + 1):
// gL(-1) = 1, gL(1) = 0 and gR(x) = gL(-x).
double radau_left_derivative(int k, double x) {
  const double s = (k % 2 == 0) ? 1.0 : -1.0;
  return 0.5 * s * (legendre_derivative(k, x) - legendre_derivative(k - 1, x));
}
double radau_right_derivative(int k, double x) {
  return 0.5 * (legendre_derivative(k, x) + legendre_derivative(k - 1, x));
}

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  auto q1 = gauss_legendre(1);
  CHECK(q1.points[0] == 0.0);
  CHECK(q1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));
  auto q2 = gauss_legendre(2);
  CHECK(q2.points[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(q2.points[0] == -q2.points[1]);
  CHECK(q2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  auto q5 = gauss_legendre(5);
  double i8 = 0.0;
  for (int k = 0; k < 5; ++k) i8 += q5.weights[k] * std::pow(q5.points[k], 8);
  CHECK(std::abs(i8 - 2.0 / 9.0) < 1e-13);
  for (int n = 1; n <= 12; ++n) {
    auto q = gauss_legendre(n);
    CHECK(std::abs(std::accumulate(q.weights.begin(), q.weights.end(), 0.0) - 2.0) < 1e-14);
    for (int k = 0; k < n; ++k) {
      CHECK(q.weights[k] > 0.0);
      CHECK(q.points[n - 1 - k] == -q.points[k]);
      if (k > 0) CHECK(q.points[k] > q.points[k - 1]);
    }
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double num = 0.0;
      for (int k = 0; k < n; ++k) num += q.weights[k] * std::pow(q.points[k], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(num - exact) < 1e-13);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
  CHECK_THROWS_AS(gauss_legendre(13), DomainError);
}

TEST_CASE("reference element counts") {
  auto q0 = build_reference_element(ElementKind::Quadrilateral, 0);
  CHECK(q0.ns == 1);
  CHECK(q0.nfaces == 4);
  CHECK(q0.nfp_face == 1);
  auto h7 = build_reference_element(ElementKind::Hexahedron, 7);
  CHECK(h7.ns == 512);
  CHECK(h7.nfp == 6 * 64);
  const double dofs = 1.689e9 * h7.ns;
  CHECK(dofs >= 864.7e9);
  CHECK(dofs <= 865.1e9);
  CHECK_THROWS_AS(build_reference_element(ElementKind::Hexahedron, 9), DomainError);
  CHECK_THROWS_AS(build_reference_element(ElementKind::Quadrilateral, -1), DomainError);
}

TEST_CASE("correction lifting equals the Radau polynomial derivatives") {
  for (int p = 0; p <= kMaxDegree; ++p) {
    auto r = build_reference_element(ElementKind::Quadrilateral, p);
    // Edge 1 is xi = +1, edge 3 is xi = -1; take the first point of each and
    // the solution points on the matching eta line.
    for (int fp : {1 * r.nfp_face, 3 * r.nfp_face}) {
      const auto nrm = r.flux_normal[fp];
      for (int s = 0; s < r.ns; ++s) {
        if (r.correction(s, fp) == 0.0) continue;
        const double xi = r.solution_points[s][0];
        const double expect = nrm.sign > 0 ? radau_right_derivative(p + 1, xi) : -radau_left_derivative(p + 1, xi);
        CHECK(std::abs(r.correction(s, fp) - expect) < 1e-10 * (1.0 + std::abs(expect)));
      }
    }
  }
}

TEST_CASE("reference operator invariants") {
  for (auto kind : {ElementKind::Quadrilateral, ElementKind::Hexahedron}) {
    for (int p = 0; p <= (kind == ElementKind::Hexahedron ? 5 : kMaxDegree); ++p) {
      auto r = build_reference_element(kind, p);
      for (int f = 0; f < r.nfp; ++f) {
        double row = 0.0;
        for (int s = 0; s < r.ns; ++s) row += r.interp(f, s);
        CHECK(std::abs(row - 1.0) < 1e-13);
      }
      std::vector<double> ones(r.dim * r.ns, 1.0);
      for (double v : apply(r.divergence, ones)) CHECK(std::abs(v) < 1e-12);
      std::vector<double> zero_jump(r.nfp, 0.0);
      for (double v : apply(r.correction, zero_jump)) CHECK(v == 0.0);
      // Polynomial exactness of face interpolation for total degree <= p.
      std::mt19937 rng(p);
      std::uniform_real_distribution<double> u(-1, 1);
      const double c0 = u(rng), c1 = u(rng), c2 = u(rng);
      auto poly = [&](const Vec3& x) {
        return c0 + c1 * std::pow(x[0], p) + c2 * std::pow(x[1], std::max(p - 1, 0)) * (r.dim == 3 ? x[2] : 1.0);
      };
      if (p >= 1) {
        std::vector<double> vals;
        for (const auto& x : r.solution_points) vals.push_back(poly(x));
        auto fv = apply(r.interp, vals);
        for (int f = 0; f < r.nfp; ++f) CHECK(std::abs(fv[f] - poly(r.flux_points[f])) < 1e-12);
      }
    }
  }
}

TEST_CASE("p=3 quad divergence of an interpolated polynomial flux") {
  auto r = build_reference_element(ElementKind::Quadrilateral, 3);
  std::vector<double> F(2 * r.ns);
  std::vector<double> jump(r.nfp, 0.0);
  for (int s = 0; s < r.ns; ++s) {
    const double x = r.solution_points[s][0], y = r.solution_points[s][1];
    F[s] = x * x * x * y * y;
    F[r.ns + s] = x * y * y * y;
  }
  auto div = apply(r.divergence, F);
  // Interface flux equal to the exact normal flux gives a zero correction.
  auto fn = apply(r.normal_interp, F);
  for (int f = 0; f < r.nfp; ++f) {
    const double x = r.flux_points[f][0], y = r.flux_points[f][1];
    const double exact_n = r.flux_normal[f].axis == 0 ? r.flux_normal[f].sign * x * x * x * y * y
                                                      : r.flux_normal[f].sign * x * y * y * y;
    jump[f] = exact_n - fn[f];
  }
  auto corr = apply(r.correction, jump);
  for (int s = 0; s < r.ns; ++s) {
    const double x = r.solution_points[s][0], y = r.solution_points[s][1];
    const double exact = 3 * x * x * y * y + 3 * x * y * y;
    CHECK(std::abs(div[s] - exact) < 1e-11);
    CHECK(std::abs(div[s] + corr[s] - exact) < 1e-11);
  }
}

TEST_CASE("geometry of affine boxes") {
  auto r = build_reference_element(ElementKind::Hexahedron, 2);
  auto g = compute_geometry(cube({0, 0, 0}, {1, 1, 1}), r, 0);
  for (int s = 0; s < r.ns; ++s) {
    CHECK(std::abs(g.det[s] - 0.125) < 1e-15);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) CHECK(std::abs(g.jacobian[s][a][b] - (a == b ? 0.5 : 0.0)) < 1e-15);
    }
  }
  CHECK(std::abs(g.volume - 1.0) < 1e-14);
  CHECK(std::abs(g.length_scale() - 1.0) < 1e-14);
  auto g2 = compute_geometry(cube({0, 0, 0}, {2, 3, 4}), r, 0);
  for (double d : g2.det) CHECK(std::abs(d - 3.0) < 1e-14);
}

TEST_CASE("perturbed hex: adjugate identity and outward normals") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-0.15, 0.15);
  auto r = build_reference_element(ElementKind::Hexahedron, 3);
  for (int trial = 0; trial < 10; ++trial) {
    auto v = cube({0, 0, 0}, {1, 1, 1});
    for (auto& x : v) {
      for (auto& c : x) c += u(rng);
    }
    auto g = compute_geometry(v, r, trial);
    Vec3 centroid{0, 0, 0};
    for (const auto& x : v) centroid = centroid + 0.125 * x;
    for (int s = 0; s < r.ns; ++s) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          double m = 0.0;
          for (int c = 0; c < 3; ++c) m += g.adjugate[s][a][c] * g.jacobian[s][c][b];
          CHECK(std::abs(m - (a == b ? g.det[s] : 0.0)) < 1e-12);
        }
      }
    }
    for (int f = 0; f < r.nfp; ++f) {
      CHECK(dot(g.face_x[f] - centroid, g.normal[f]) > 0.0);
      CHECK(std::abs(norm(g.normal[f]) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("inverted element names the cell") {
  auto r = build_reference_element(ElementKind::Hexahedron, 1);
  auto v = cube({0, 0, 0}, {1, 1, 1});
  std::swap(v[0], v[1]);
  std::swap(v[3], v[2]);
  std::swap(v[4], v[5]);
  std::swap(v[7], v[6]);
  try {
    compute_geometry(v, r, 42);
    FAIL("expected GeometryError");
  } catch (const GeometryError& e) {
    CHECK(e.cell() == 42);
  }
}

TEST_CASE("flux transform") {
  auto r = build_reference_element(ElementKind::Hexahedron, 2);
  auto id = compute_geometry(cube({-1, -1, -1}, {1, 1, 1}), r, 0);
  const std::array<double, 3> F{0.3, -1.2, 2.5};
  auto same = transform_flux(id.adjugate[0], F, 3);
  for (int a = 0; a < 3; ++a) CHECK(std::abs(same[a] - F[a]) < 1e-15);
  const double h = 0.7;
  auto scaled = compute_geometry(cube({-h, -h, -h}, {h, h, h}), r, 0);
  auto fs = transform_flux(scaled.adjugate[3], F, 3);
  for (int a = 0; a < 3; ++a) CHECK(std::abs(fs[a] - h * h * F[a]) < 1e-15);

  // Rotated cube with divergence-free F = (y, -x, z - z) stays divergence-free.
  const double th = 0.4;
  auto v = cube({0, 0, 0}, {1, 1, 1});
  for (auto& x : v) x = {std::cos(th) * x[0] - std::sin(th) * x[1], std::sin(th) * x[0] + std::cos(th) * x[1], x[2]};
  auto g = compute_geometry(v, r, 0);
  std::vector<double> Fhat(3 * r.ns);
  for (int s = 0; s < r.ns; ++s) {
    auto t = transform_flux(g.adjugate[s], std::array<double, 3>{g.x[s][1], -g.x[s][0], 0.0}, 3);
    for (int a = 0; a < 3; ++a) Fhat[a * r.ns + s] = t[a];
  }
  for (double d : apply(r.divergence, Fhat)) CHECK(std::abs(d) < 1e-12);
}

TEST_CASE("orientation: linear field agrees on both sides of every internal face") {
  for (int nz : {0, 3}) {
    mesh::BoxSpec spec;
    spec.nx = 3;
    spec.ny = 4;
    spec.nz = nz;
    spec.perturbation = 0.2;
    spec.shuffle = true;
    spec.seed = 8;
    auto m = mesh::make_box(spec);
    const auto kind = nz ? ElementKind::Hexahedron : ElementKind::Quadrilateral;
    auto r = build_reference_element(kind, 3);
    auto field = [](const Vec3& x) { return 1.0 + 2.0 * x[0] - 3.0 * x[1] + 0.5 * x[2]; };
    auto face_values = [&](GlobalId cell, int lf) {
      const auto xs = mesh::cell_coordinates(m.cells[cell], m.vertices, m.period);
      auto g = compute_geometry(xs, r, cell);
      std::vector<double> q;
      for (const auto& x : g.x) q.push_back(field(x));
      auto fv = apply(r.interp, q);
      return std::vector<double>(fv.begin() + lf * r.nfp_face, fv.begin() + (lf + 1) * r.nfp_face);
    };
    auto internal = mesh::match_local_faces(mesh::build_face_list(m.cells)).internal;
    for (const auto& f : internal) {
      const auto L = face_values(f.left.cell, f.left.local_face);
      const auto R = face_values(f.right->cell, f.right->local_face);
      const auto perm = mesh::orientation_permutation(f.orientation, r.n1, r.dim - 1);
      for (int q = 0; q < r.nfp_face; ++q) {
        CHECK(std::abs(R[q] - L[perm[q]]) <= 1e-12 * std::max(1.0, std::abs(L[perm[q]])));
      }
    }
  }
}

TEST_CASE("DG equivalence at p=1 on a periodic strip") {
  // Linear advection u_t + a u_x = 0 with upwind interface flux on N elements of width h.
  constexpr int N = 4, p = 1, n = p + 1;
  const double a = 1.3, h = 0.5;
  auto r = build_reference_element(ElementKind::Quadrilateral, p);
  const double detJ = 0.5 * h * 0.5 * h;  // square elements h x h
  const double adj_xx = 0.5 * h;          // |J| J^-1 for the xi-row

  // FR update matrix from the reference operators (x-lines only; the flux has no y component).
  const int dofs = N * r.ns;
  Matrix fr(dofs, dofs);
  for (int col = 0; col < dofs; ++col) {
    std::vector<double> u(dofs, 0.0);
    u[col] = 1.0;
    std::vector<std::vector<double>> uf(N);
    for (int e = 0; e < N; ++e) uf[e] = apply(r.interp, std::vector<double>(u.begin() + e * r.ns, u.begin() + (e + 1) * r.ns));
    for (int e = 0; e < N; ++e) {
      std::vector<double> F(2 * r.ns, 0.0);
      for (int s = 0; s < r.ns; ++s) F[s] = adj_xx * a * u[e * r.ns + s];
      auto div = apply(r.divergence, F);
      auto fn = apply(r.normal_interp, F);
      std::vector<double> jump(r.nfp, 0.0);
      for (int q = 0; q < r.nfp_face; ++q) {
        // Edge 1 (xi=+1) meets edge 3 of the right neighbour; upwind for a > 0.
        const int fr1 = 1 * r.nfp_face + q, fl3 = 3 * r.nfp_face + q;
        const int west = (e + N - 1) % N;
        jump[fr1] = adj_xx * a * uf[e][fr1] - fn[fr1];
        jump[fl3] = -adj_xx * a * uf[west][1 * r.nfp_face + q] - fn[fl3];
      }
      auto corr = apply(r.correction, jump);
      for (int s = 0; s < r.ns; ++s) fr(e * r.ns + s, col) = -(div[s] + corr[s]) / detJ;
    }
  }

  // Nodal DG on the same lines, built from 1-D mass/stiffness matrices integrated with
  // a separate high-order rule.
  auto nodes = gauss_legendre(n).points;
  auto hi = gauss_legendre(8);
  Matrix M(n, n), S(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int q = 0; q < 8; ++q) {
        const double x = hi.points[q], w = hi.weights[q];
        M(i, j) += w * lagrange(nodes, i, x) * lagrange(nodes, j, x) * 0.5 * h;
        S(i, j) += w * lagrange_derivative(nodes, i, x) * lagrange(nodes, j, x);
      }
    }
  }
  // Minv via 2x2 inverse.
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  Matrix Minv(2, 2);
  Minv(0, 0) = M(1, 1) / det;
  Minv(1, 1) = M(0, 0) / det;
  Minv(0, 1) = -M(0, 1) / det;
  Minv(1, 0) = -M(1, 0) / det;
  Matrix dg1(N * n, N * n);
  for (int e = 0; e < N; ++e) {
    const int west = (e + N - 1) % N;
    // M du/dt = a S u - l(1) a u_e(1) + l(-1) a u_west(1)
    Matrix rhs(n, N * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        rhs(i, e * n + j) += a * S(i, j);
        rhs(i, e * n + j) -= lagrange(nodes, i, 1.0) * a * lagrange(nodes, j, 1.0);
        rhs(i, west * n + j) += lagrange(nodes, i, -1.0) * a * lagrange(nodes, j, 1.0);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < N * n; ++c) dg1(e * n + i, c) = Minv(i, 0) * rhs(0, c) + Minv(i, 1) * rhs(1, c);
    }
  }
  // Every eta-line of the FR element carries the same 1-D operator.
  for (int e = 0; e < N; ++e) {
    for (int s = 0; s < r.ns; ++s) {
      const int i = s % n, line = s / n;
      for (int e2 = 0; e2 < N; ++e2) {
        for (int j = 0; j < n; ++j) {
          const double v = fr(e * r.ns + s, e2 * r.ns + line * n + j);
          CHECK(std::abs(v - dg1(e * n + i, e2 * n + j)) < 1e-12);
        }
      }
    }
  }
}
