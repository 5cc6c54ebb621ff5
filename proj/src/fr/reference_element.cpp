#include "zfr/fr/reference_element.hpp"

#include <string>

#include "zfr/common/error.hpp"
#include "zfr/fr/polynomial.hpp"

namespace zfr::fr {

namespace {

/// How one reference axis varies over a face: constant, or +/- one face parameter.
struct AxisMap {
  int param = -1;  ///< -1 constant, 0 s, 1 t
  int sign = 1;    ///< sign of the parameter, or the constant value
};

std::array<AxisMap, 3> face_axes(mesh::ElementKind kind, int face) {
  const auto lv = mesh::local_face_vertices(kind, face);
  const auto r0 = mesh::reference_vertex(kind, lv[0]);
  const auto r1 = mesh::reference_vertex(kind, lv[1]);
  const auto r3 = lv.size() == 4 ? mesh::reference_vertex(kind, lv[3]) : r0;
  std::array<AxisMap, 3> m{};
  for (int a = 0; a < 3; ++a) {
    if (r1[a] != r0[a]) {
      m[a] = {0, (r1[a] - r0[a]) / 2};
    } else if (r3[a] != r0[a]) {
      m[a] = {1, (r3[a] - r0[a]) / 2};
    } else {
      m[a] = {-1, r0[a]};
    }
  }
  return m;
}

}  // namespace

ReferenceElement build_reference_element(mesh::ElementKind kind, int p) {
  if (p < 0 || p > kMaxDegree) {
    throw DomainError("polynomial degree " + std::to_string(p) + " outside [0, " + std::to_string(kMaxDegree) + "]");
  }
  ReferenceElement r;
  r.kind = kind;
  r.p = p;
  r.dim = mesh::dimension(kind);
  r.n1 = p + 1;
  const int n = r.n1;
  const int d = r.dim;
  r.ns = d == 3 ? n * n * n : n * n;
  r.nfaces = mesh::face_count(kind);
  r.nfp_face = d == 3 ? n * n : n;
  r.nfp = r.nfaces * r.nfp_face;

  const auto rule = gauss_legendre(n);
  r.nodes1d = rule.points;
  r.weights1d = rule.weights;
  const auto& x = r.nodes1d;
  const auto& w = r.weights1d;

  std::vector<std::array<int, 3>> sol_idx(r.ns);
  for (int s = 0; s < r.ns; ++s) {
    std::array<int, 3> idx{s % n, (s / n) % n, d == 3 ? s / (n * n) : 0};
    sol_idx[s] = idx;
    Vec3 pt{x[idx[0]], x[idx[1]], d == 3 ? x[idx[2]] : 0.0};
    double wt = w[idx[0]] * w[idx[1]] * (d == 3 ? w[idx[2]] : 1.0);
    r.solution_points.push_back(pt);
    r.solution_weights.push_back(wt);
  }

  // 1-D derivative matrix and endpoint values.
  Matrix D(n, n);
  std::vector<double> left(n), right(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) D(i, j) = lagrange_derivative(x, j, x[i]);
    left[i] = lagrange(x, i, -1.0);
    right[i] = lagrange(x, i, 1.0);
  }

  r.interp = Matrix(r.nfp, r.ns);
  r.correction = Matrix(r.ns, r.nfp);
  for (int f = 0; f < r.nfaces; ++f) {
    const auto axes = face_axes(kind, f);
    const auto normal = mesh::local_face_normal(kind, f);
    for (int q = 0; q < r.nfp_face; ++q) {
      const int fp = f * r.nfp_face + q;
      const std::array<int, 2> st{q % n, d == 3 ? q / n : 0};
      Vec3 pt{0.0, 0.0, 0.0};
      std::array<int, 3> along{0, 0, 0};  // solution-grid index on tangential axes
      for (int a = 0; a < d; ++a) {
        if (axes[a].param < 0) {
          pt[a] = axes[a].sign;
        } else {
          const int k = st[axes[a].param];
          along[a] = axes[a].sign > 0 ? k : n - 1 - k;
          pt[a] = x[along[a]];
        }
      }
      r.flux_points.push_back(pt);
      r.flux_weights.push_back(w[st[0]] * (d == 3 ? w[st[1]] : 1.0));
      r.flux_face.push_back(f);
      r.flux_normal.push_back(normal);

      const auto& end = normal.sign > 0 ? right : left;
      for (int s = 0; s < r.ns; ++s) {
        bool tangential = true;
        for (int a = 0; a < d; ++a) {
          if (a != normal.axis && sol_idx[s][a] != along[a]) tangential = false;
        }
        if (!tangential) continue;
        const int m = sol_idx[s][normal.axis];
        r.interp(fp, s) = end[m];
        r.correction(s, fp) = end[m] / w[m];
      }
    }
  }

  for (int a = 0; a < 3; ++a) {
    r.deriv[a] = Matrix(r.ns, r.ns);
    if (a >= d) continue;
    for (int i = 0; i < r.ns; ++i) {
      for (int j = 0; j < r.ns; ++j) {
        bool same = true;
        for (int b = 0; b < d; ++b) {
          if (b != a && sol_idx[i][b] != sol_idx[j][b]) same = false;
        }
        if (same) r.deriv[a](i, j) = D(sol_idx[i][a], sol_idx[j][a]);
      }
    }
  }

  r.divergence = Matrix(r.ns, d * r.ns);
  r.gradient = Matrix(d * r.ns, r.ns);
  r.normal_interp = Matrix(r.nfp, d * r.ns);
  r.gradient_correction = Matrix(d * r.ns, r.nfp);
  for (int a = 0; a < d; ++a) {
    for (int i = 0; i < r.ns; ++i) {
      for (int j = 0; j < r.ns; ++j) {
        r.divergence(i, a * r.ns + j) = r.deriv[a](i, j);
        r.gradient(a * r.ns + i, j) = r.deriv[a](i, j);
      }
    }
  }
  for (int fp = 0; fp < r.nfp; ++fp) {
    const auto nrm = r.flux_normal[fp];
    for (int j = 0; j < r.ns; ++j) r.normal_interp(fp, nrm.axis * r.ns + j) = nrm.sign * r.interp(fp, j);
    for (int i = 0; i < r.ns; ++i) r.gradient_correction(nrm.axis * r.ns + i, fp) = nrm.sign * r.correction(i, fp);
  }

  r.interp_t = r.interp.transposed();
  r.divergence_t = r.divergence.transposed();
  r.normal_interp_t = r.normal_interp.transposed();
  r.correction_t = r.correction.transposed();
  r.gradient_t = r.gradient.transposed();
  r.gradient_correction_t = r.gradient_correction.transposed();
  return r;
}

Matrix evaluation_matrix(const ReferenceElement& ref, const std::vector<Vec3>& points) {
  Matrix E(static_cast<int>(points.size()), ref.ns);
  const int n = ref.n1;
  for (std::size_t q = 0; q < points.size(); ++q) {
    std::array<std::vector<double>, 3> l;
    for (int a = 0; a < ref.dim; ++a) {
      l[a].resize(n);
      for (int i = 0; i < n; ++i) l[a][i] = lagrange(ref.nodes1d, i, points[q][a]);
    }
    for (int s = 0; s < ref.ns; ++s) {
      double v = l[0][s % n] * l[1][(s / n) % n];
      if (ref.dim == 3) v *= l[2][s / (n * n)];
      E(static_cast<int>(q), s) = v;
    }
  }
  return E;
}

Matrix degree_transfer(const ReferenceElement& from, const ReferenceElement& to) {
  if (from.kind != to.kind) throw DomainError("degree transfer between different element kinds");
  return evaluation_matrix(from, to.solution_points);
}

}  // namespace zfr::fr
