#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "exact_riemann.hpp"
#include "zfr/common/error.hpp"
#include "zfr/fr/reference_element.hpp"
#include "zfr/physics/boundary.hpp"
#include "zfr/physics/flux.hpp"
#include "zfr/physics/initial.hpp"
#include "zfr/physics/ldg.hpp"
#include "zfr/physics/riemann.hpp"
#include "zfr/physics/sponge.hpp"

using namespace zfr;
using namespace zfr::physics;

namespace {

const GasModel kAir{};

State<double> random_state(std::mt19937& rng, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.5, 2.0);
  Primitive<double> w{pos(rng), {u(rng), u(rng), dim == 3 ? u(rng) : 0.0}, pos(rng)};
  return to_conserved(w, dim, kAir);
}

std::array<double, 3> random_normal(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g;
  std::array<double, 3> n{g(rng), g(rng), dim == 3 ? g(rng) : 0.0};
  const double l = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (auto& c : n) c /= l;
  return n;
}

// Analytic Jacobian d(F.n)/dq of the Euler flux.
Eigen::MatrixXd euler_jacobian(const State<double>& q, const std::array<double, 3>& n, int dim, double g) {
  const int nv = dim + 2;
  const auto w = to_primitive(q, dim, kAir);
  double un = 0.0, u2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    un += w.u[a] * n[a];
    u2 += w.u[a] * w.u[a];
  }
  const double H = (q[dim + 1] + w.p) / w.rho;
  const double phi = 0.5 * (g - 1.0) * u2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nv, nv);
  for (int a = 0; a < dim; ++a) A(0, 1 + a) = n[a];
  for (int i = 0; i < dim; ++i) {
    A(1 + i, 0) = phi * n[i] - w.u[i] * un;
    for (int j = 0; j < dim; ++j) {
      A(1 + i, 1 + j) = w.u[i] * n[j] - (g - 1.0) * n[i] * w.u[j] + (i == j ? un : 0.0);
    }
    A(1 + i, nv - 1) = (g - 1.0) * n[i];
  }
  A(nv - 1, 0) = un * (phi - H);
  for (int j = 0; j < dim; ++j) A(nv - 1, 1 + j) = H * n[j] - (g - 1.0) * un * w.u[j];
  A(nv - 1, nv - 1) = g * un;
  return A;
}

}  // namespace

TEST_CASE("inviscid flux of simple states") {
  auto q = uniform_state(1.0, {0, 0, 0}, 1.0, 3, kAir);
  auto F = inviscid_flux(q, 3, kAir);
  for (int a = 0; a < 3; ++a) {
    CHECK(F[a][0] == 0.0);
    for (int b = 0; b < 3; ++b) CHECK(F[a][1 + b] == (a == b ? 1.0 : 0.0));
    CHECK(F[a][4] == 0.0);
  }
  auto m = uniform_state(1.0, {1, 0, 0}, 1.0 / 1.4, 3, kAir);
  auto w = to_primitive(m, 3, kAir);
  CHECK(std::abs(sound_speed(w, kAir) - 1.0) < 1e-15);
  auto Fm = inviscid_flux(m, 3, kAir);
  CHECK(Fm[0][0] == 1.0);
  CHECK(Fm[1][0] == 0.0);
  CHECK(Fm[2][0] == 0.0);
}

TEST_CASE("positivity violations are state errors") {
  State<double> q{-1.0, 0, 0, 1.0, 0};
  CHECK_THROWS_AS(inviscid_flux(q, 2, kAir), StateError);
  State<double> cold{1.0, 2.0, 0, 1.0, 0};
  CHECK_THROWS_AS(to_primitive(cold, 2, kAir), StateError);
  CHECK_FALSE(admissible(cold, 2, kAir));
}

TEST_CASE("flux Jacobian action matches finite differences") {
  std::mt19937 rng(1);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto q = random_state(rng, dim);
      auto n = random_normal(rng, dim);
      State<double> r{};
      std::normal_distribution<double> g;
      for (int v = 0; v < dim + 2; ++v) r[v] = g(rng);
      const double eps = 1e-6;
      State<double> qp = q, qm = q;
      for (int v = 0; v < dim + 2; ++v) {
        qp[v] += eps * r[v];
        qm[v] -= eps * r[v];
      }
      auto fp = normal_flux(inviscid_flux(qp, dim, kAir), n, dim);
      auto fm = normal_flux(inviscid_flux(qm, dim, kAir), n, dim);
      auto A = euler_jacobian(q, n, dim, kAir.gamma);
      Eigen::VectorXd rv(dim + 2), fd(dim + 2);
      for (int v = 0; v < dim + 2; ++v) {
        rv[v] = r[v];
        fd[v] = (fp[v] - fm[v]) / (2 * eps);
      }
      const Eigen::VectorXd exact = A * rv;
      CHECK((fd - exact).norm() <= 1e-6 * std::max(1.0, exact.norm()));
    }
  }
}

TEST_CASE("viscous flux") {
  GasModel gas;
  gas.mu = 1.0;
  auto q = uniform_state(1.0, {0, 0, 0}, 1.0, 3, gas);
  Flux<double> zero{};
  auto G = viscous_flux(q, zero, 3, gas);
  for (const auto& row : G) {
    for (double v : row) CHECK(v == 0.0);
  }
  // Couette: d(rho u)/dy = 1 with rho = 1, u = 0 gives du/dy = 1.
  Flux<double> shear{};
  shear[1][1] = 1.0;
  auto Gs = viscous_flux(q, shear, 3, gas);
  CHECK(Gs[1][1] == -1.0);  // -tau_xy on the y-face of x-momentum
  CHECK(Gs[0][2] == -1.0);  // symmetric stress
  CHECK(Gs[0][1] == 0.0);

  // Heat flux of a manufactured field rho = 1 + 0.1 x, p = 1 + 0.2 y, u = 0 at (x, y) = (0.5, -0.3).
  gas.R = 2.0;
  const double x = 0.5, y = -0.3;
  const double rho = 1.0 + 0.1 * x, p = 1.0 + 0.2 * y;
  auto qm = uniform_state(rho, {0, 0, 0}, p, 2, gas);
  Flux<double> grad{};
  grad[0][0] = 0.1;
  grad[1][3] = 0.2 / (gas.gamma - 1.0);
  auto Gm = viscous_flux(qm, grad, 2, gas);
  const double k = gas.mu * gas.cp() / gas.prandtl;
  const double dTdx = -p * 0.1 / (rho * rho * gas.R), dTdy = 0.2 / (rho * gas.R);
  CHECK(std::abs(Gm[0][3] + k * dTdx) < 1e-10);
  CHECK(std::abs(Gm[1][3] + k * dTdy) < 1e-10);
}

TEST_CASE("Riemann fluxes: consistency, conservation and the Sod Rusanov value") {
  std::mt19937 rng(2);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto qL = random_state(rng, dim), qR = random_state(rng, dim);
      auto n = random_normal(rng, dim);
      std::array<double, 3> mn{-n[0], -n[1], -n[2]};
      for (auto solver : {RiemannSolver::Rusanov, RiemannSolver::Hllc}) {
        auto same = riemann_flux(solver, qL, qL, n, dim, kAir);
        auto exact = normal_flux(inviscid_flux(qL, dim, kAir), n, dim);
        for (int v = 0; v < dim + 2; ++v) CHECK(std::abs(same[v] - exact[v]) <= 1e-13 * (1.0 + std::abs(exact[v])));
        auto lr = riemann_flux(solver, qL, qR, n, dim, kAir);
        auto rl = riemann_flux(solver, qR, qL, mn, dim, kAir);
        for (int v = 0; v < dim + 2; ++v) CHECK(std::abs(lr[v] + rl[v]) <= 1e-12 * (1.0 + std::abs(lr[v])));
      }
    }
  }
  auto stag = uniform_state(1.0, {0, 0, 0}, 0.7, 3, kAir);
  const std::array<double, 3> n{0.6, 0.0, 0.8};
  auto fs = rusanov_flux(stag, stag, n, 3, kAir);
  CHECK(fs[0] == 0.0);
  CHECK(std::abs(fs[1] - 0.7 * 0.6) < 1e-15);
  CHECK(std::abs(fs[3] - 0.7 * 0.8) < 1e-15);
  CHECK(fs[4] == 0.0);

  // Sod states, hand-evaluated: F_L.n = (0, 1, 0), F_R.n = (0, 0.1, 0), lambda = sqrt(1.4).
  auto L = uniform_state(1.0, {0, 0, 0}, 1.0, 2, kAir);
  auto R = uniform_state(0.125, {0, 0, 0}, 0.1, 2, kAir);
  auto f = rusanov_flux(L, R, {1, 0, 0}, 2, kAir);
  const double lam = std::sqrt(1.4);
  CHECK(std::abs(f[0] - (-0.5 * lam * (0.125 - 1.0))) < 1e-15);
  CHECK(std::abs(f[1] - 0.55) < 1e-15);
  CHECK(std::abs(f[3] - (-0.5 * lam * (0.1 / 0.4 - 1.0 / 0.4))) < 1e-14);
}

TEST_CASE("HLLC falls back to Rusanov when the star pressure collapses") {
  auto L = uniform_state(1.0, {-10, 0, 0}, 0.01, 2, kAir);
  auto R = uniform_state(1.0, {10, 0, 0}, 0.01, 2, kAir);
  std::uint64_t fallbacks = 0;
  auto h = hllc_flux(L, R, {1, 0, 0}, 2, kAir, &fallbacks);
  auto r = rusanov_flux(L, R, {1, 0, 0}, 2, kAir);
  CHECK(fallbacks == 1);
  for (int v = 0; v < 4; ++v) CHECK(h[v] == r[v]);
}

TEST_CASE("HLLC resolves a stationary contact exactly") {
  auto L = uniform_state(1.0, {0, 0.3, 0}, 1.0, 2, kAir);
  auto R = uniform_state(0.2, {0, -0.4, 0}, 1.0, 2, kAir);
  auto h = hllc_flux(L, R, {1, 0, 0}, 2, kAir);
  CHECK(std::abs(h[0]) < 1e-15);
  CHECK(std::abs(h[1] - 1.0) < 1e-15);
  CHECK(std::abs(h[3]) < 1e-15);
}

TEST_CASE("exact Riemann oracle reproduces the Sod star state") {
  testing::ExactRiemann ex{1.4, 1.0, 0.0, 1.0, 0.125, 0.0, 0.1};
  CHECK(std::abs(ex.star_pressure() - 0.30313) < 1e-5);
  auto s = ex.sample(0.5);
  CHECK(std::abs(s.u - 0.92745) < 1e-5);
  // Star densities either side of the contact, shock at x/t = 1.75216.
  CHECK(std::abs(ex.sample(0.9).rho - 0.42632) < 1e-5);
  CHECK(std::abs(ex.sample(1.0).rho - 0.26557) < 1e-5);
  CHECK(std::abs(ex.sample(1.75).rho - 0.26557) < 1e-5);
  CHECK(ex.sample(1.76).rho == 0.125);
  CHECK(ex.sample(-1.19).rho == 1.0);
}

TEST_CASE("LDG interface values") {
  std::mt19937 rng(3);
  auto q = random_state(rng, 3);
  auto common = ldg_common_solution(q, q, 3, 0.5);
  for (int v = 0; v < 5; ++v) CHECK(common[v] == q[v]);
  State<double> gn{1, 2, 3, 4, 5};
  auto flux = ldg_common_flux(q, q, gn, gn, 3, LdgParameters{0.5, 7.0});
  for (int v = 0; v < 5; ++v) CHECK(flux[v] == gn[v]);
  auto q2 = random_state(rng, 3);
  State<double> gn2{-1, 0, 1, 2, 3};
  auto c0 = ldg_common_solution(q, q2, 3, 0.0);
  auto f0 = ldg_common_flux(q, q2, gn, gn2, 3, LdgParameters{0.0, 0.0});
  for (int v = 0; v < 5; ++v) {
    CHECK(c0[v] == 0.5 * (q[v] + q2[v]));
    CHECK(f0[v] == 0.5 * (gn[v] + gn2[v]));
  }
  auto up = ldg_common_solution(q, q2, 3, 0.5);
  for (int v = 0; v < 5; ++v) CHECK(std::abs(up[v] - q[v]) < 1e-15);
}

TEST_CASE("LDG diffusion operator on four quads is symmetric negative semi-definite") {
  for (int p : {1, 2, 3}) {
    constexpr int N = 4;
    const double h = 0.25;
    auto r = fr::build_reference_element(mesh::ElementKind::Quadrilateral, p);
    const double detJ = 0.25 * h * h, adj = 0.5 * h, dA = 0.5 * h;
    const LdgParameters prm{0.5, default_ldg_penalty(p, h)};
    const int n = N * r.ns;
    auto apply = [](const fr::Matrix& A, const std::vector<double>& v) {
      std::vector<double> out(A.rows, 0.0);
      for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) out[i] += A(i, j) * v[j];
      }
      return out;
    };
    // u_t = u_xx on a periodic strip; the flux is G = -u_x. Faces along x only.
    auto residual = [&](const std::vector<double>& u) {
      std::vector<std::vector<double>> uf(N), gx(N), gf(N);
      for (int e = 0; e < N; ++e) uf[e] = apply(r.interp, {u.begin() + e * r.ns, u.begin() + (e + 1) * r.ns});
      for (int e = 0; e < N; ++e) {
        const int east = (e + 1) % N, west = (e + N - 1) % N;
        std::vector<double> jump(r.nfp, 0.0);
        for (int q = 0; q < r.nfp_face; ++q) {
          const int f1 = r.nfp_face + q, f3 = 3 * r.nfp_face + q;
          State<double> a{uf[e][f1]}, b{uf[east][f3]}, c{uf[west][f1]}, d{uf[e][f3]};
          jump[f1] = ldg_common_solution(a, b, 0, prm.beta)[0] - uf[e][f1];
          jump[f3] = ldg_common_solution(c, d, 0, prm.beta)[0] - uf[e][f3];
        }
        auto grad = apply(r.gradient, {u.begin() + e * r.ns, u.begin() + (e + 1) * r.ns});
        auto corr = apply(r.gradient_correction, jump);
        gx[e].assign(r.ns, 0.0);
        for (int s = 0; s < r.ns; ++s) gx[e][s] = -(grad[s] + corr[s]) * adj / detJ;  // G_x = -u_x
        gf[e] = apply(r.interp, gx[e]);
      }
      std::vector<double> out(n, 0.0);
      for (int e = 0; e < N; ++e) {
        const int east = (e + 1) % N, west = (e + N - 1) % N;
        std::vector<double> F(2 * r.ns, 0.0);
        for (int s = 0; s < r.ns; ++s) F[s] = adj * gx[e][s];
        auto div = apply(r.divergence, F);
        auto fn = apply(r.normal_interp, F);
        std::vector<double> jump(r.nfp, 0.0);
        for (int q = 0; q < r.nfp_face; ++q) {
          const int f1 = r.nfp_face + q, f3 = 3 * r.nfp_face + q;
          State<double> ue{uf[e][f1]}, ueast{uf[east][f3]}, gE{gf[e][f1]}, gEast{gf[east][f3]};
          State<double> uw{uf[west][f1]}, uself{uf[e][f3]}, gW{gf[west][f1]}, gSelf{gf[e][f3]};
          const double east_face = ldg_common_flux(ue, ueast, gE, gEast, 0, prm)[0];
          const double west_face = ldg_common_flux(uw, uself, gW, gSelf, 0, prm)[0];
          jump[f1] = east_face * dA - fn[f1];
          jump[f3] = -west_face * dA - fn[f3];
        }
        auto corr = apply(r.correction, jump);
        for (int s = 0; s < r.ns; ++s) out[e * r.ns + s] = -(div[s] + corr[s]) / detJ;
      }
      return out;
    };
    Eigen::MatrixXd A(n, n);
    for (int c = 0; c < n; ++c) {
      std::vector<double> u(n, 0.0);
      u[c] = 1.0;
      auto col = residual(u);
      for (int i = 0; i < n; ++i) A(i, c) = col[i];
    }
    Eigen::VectorXd mass(n);
    for (int e = 0; e < N; ++e) {
      for (int s = 0; s < r.ns; ++s) mass[e * r.ns + s] = r.solution_weights[s] * detJ;
    }
    const Eigen::MatrixXd MA = mass.asDiagonal() * A;
    CHECK((MA - MA.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * MA.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (MA + MA.transpose()));
    CHECK(eig.eigenvalues().maxCoeff() <= 1e-10 * MA.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("boundary ghost states") {
  const std::array<double, 3> n{1, 0, 0};
  BoundarySpec slip;
  slip.kind = BoundaryKind::SlipWall;
  auto q = uniform_state(1.2, {0.3, 0.5, 0}, 0.9, 2, kAir);
  auto g = apply_boundary(slip, q, n, 2, kAir);
  auto wg = to_primitive(g.inviscid, 2, kAir);
  CHECK(std::abs(wg.u[0] + 0.3) < 1e-15);
  CHECK(std::abs(wg.u[1] - 0.5) < 1e-15);
  CHECK(std::abs(wg.p - 0.9) < 1e-14);

  BoundarySpec per;
  per.kind = BoundaryKind::Periodic;
  auto partner = uniform_state(0.7, {0.1, 0.2, 0}, 1.1, 2, kAir);
  auto gp = apply_boundary(per, q, n, 2, kAir, nullptr, partner);
  CHECK(gp.inviscid == partner);
  CHECK_THROWS_AS(apply_boundary(per, q, n, 2, kAir), StateError);

  BoundarySpec wall;
  wall.kind = BoundaryKind::IsothermalWall;
  wall.wall_temperature = 2.0;
  auto gw = apply_boundary(wall, q, n, 2, kAir);
  auto wv = to_primitive(gw.viscous, 2, kAir);
  CHECK(wv.u[0] == 0.0);
  CHECK(wv.u[1] == 0.0);
  CHECK(std::abs(temperature(wv, kAir) - 2.0) < 1e-14);
  auto wi = to_primitive(gw.inviscid, 2, kAir);
  CHECK(std::abs(wi.u[0] + 0.3) < 1e-15);
  CHECK(std::abs(wi.u[1] + 0.5) < 1e-15);
}

TEST_CASE("riemann inflow recovers the total conditions") {
  GasModel air;
  air.R = 287.0;
  BoundarySpec in;
  in.kind = BoundaryKind::RiemannInflow;
  in.total_temperature = 709.0;
  in.total_pressure = 3.4474e5;
  in.direction = {1, 0, 0};
  const std::array<double, 3> n{-1, 0, 0};  // inlet on the xmin side
  // Interior at Mach 0.1 with matching total conditions.
  const double M = 0.1, g = air.gamma;
  const double T = 709.0 / (1 + 0.5 * (g - 1) * M * M);
  const double p = 3.4474e5 * std::pow(T / 709.0, g / (g - 1));
  const double c = std::sqrt(g * air.R * T);
  auto q = uniform_state(p / (air.R * T), {M * c, 0, 0}, p, 3, air);
  BoundaryDiagnostics diag;
  auto gst = apply_boundary(in, q, n, 3, air, &diag);
  auto w = to_primitive(gst.inviscid, 3, air);
  const double Tb = temperature(w, air);
  const double V = w.u[0];
  // Isentropic total conditions of the face state.
  const double T0 = Tb + V * V / (2 * air.cp());
  const double Mb = V / std::sqrt(g * air.R * Tb);
  const double p0 = w.p * std::pow(1 + 0.5 * (g - 1) * Mb * Mb, g / (g - 1));
  CHECK(std::abs(T0 / 709.0 - 1.0) < 1e-3);
  CHECK(std::abs(p0 / 3.4474e5 - 1.0) < 1e-3);
  CHECK(std::abs(Mb - 0.1) < 1e-3);
  CHECK(diag.reversed_inflow == 0);

  auto reversed = uniform_state(p / (air.R * T), {-M * c, 0, 0}, p, 3, air);
  apply_boundary(in, reversed, n, 3, air, &diag);
  CHECK(diag.reversed_inflow == 1);
}

TEST_CASE("sponge source") {
  SpongeZone z;
  z.axis = 0;
  z.lo = 1.0;
  z.hi = 2.0;
  z.width = 0.5;
  z.sigma0 = 3.0;
  z.reference = uniform_state(1.0, {0, 0, 0}, 1.0, 2, kAir);
  auto q = uniform_state(1.3, {0.2, 0, 0}, 1.1, 2, kAir);
  auto s = sponge_source({z}, q, {0.5, 0, 0}, 2);
  for (double v : s) CHECK(v == 0.0);
  auto s2 = sponge_source({z}, z.reference, {1.7, 0, 0}, 2);
  for (double v : s2) CHECK(v == 0.0);
  CHECK(sponge_strength(z, {1.0, 0, 0}) == 0.0);
  CHECK(sponge_strength(z, {1.5, 0, 0}) == 3.0);
  CHECK(sponge_strength(z, {1.25, 0, 0}) == doctest::Approx(1.5));
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double sig = sponge_strength(z, {1.0 + 0.5 * i / 100.0, 0, 0});
    CHECK(sig >= prev);
    CHECK(sig <= z.sigma0);
    prev = sig;
  }
  // One SSP-RK3 step of dq/dt = -sigma0 (q - q_ref) against exp(-sigma0 dt).
  for (double dt : {0.1, 0.05, 0.025}) {
    auto rhs = [&](const State<double>& x) { return sponge_source({z}, x, {1.8, 0, 0}, 2); };
    State<double> q1{}, q2{}, q3{};
    auto k0 = rhs(q);
    for (int v = 0; v < 4; ++v) q1[v] = q[v] + dt * k0[v];
    auto k1 = rhs(q1);
    for (int v = 0; v < 4; ++v) q2[v] = 0.75 * q[v] + 0.25 * (q1[v] + dt * k1[v]);
    auto k2 = rhs(q2);
    for (int v = 0; v < 4; ++v) q3[v] = q[v] / 3.0 + 2.0 / 3.0 * (q2[v] + dt * k2[v]);
    const double x = z.sigma0 * dt;
    for (int v = 0; v < 4; ++v) {
      const double exact = z.reference[v] + (q[v] - z.reference[v]) * std::exp(-x);
      CHECK(std::abs(q3[v] - exact) <= std::abs(q[v] - z.reference[v]) * x * x * x * x / 24.0 * 1.01);
    }
  }
}

TEST_CASE("initial conditions") {
  IsentropicVortex vortex;
  auto far = vortex({9.5, 9.5, 0}, 0.0, kAir);
  auto w = to_primitive(far, 2, kAir);
  CHECK(std::abs(w.rho - 1.0) < 1e-12);
  CHECK(std::abs(w.u[0] - 1.0) < 1e-12);
  // Isentropic everywhere.
  auto core = to_primitive(vortex({0.3, -0.2, 0}, 0.0, kAir), 2, kAir);
  CHECK(std::abs(core.p / std::pow(core.rho, 1.4) - 1.0) < 1e-14);
  // Periodic image after one full traversal.
  auto later = vortex({0.3, -0.2, 0}, 20.0, kAir);
  auto now = vortex({0.3, -0.2, 0}, 0.0, kAir);
  for (int v = 0; v < 4; ++v) CHECK(std::abs(later[v] - now[v]) < 1e-12);

  TaylorGreen tgv;
  auto t = to_primitive(tgv({0.1, 0.2, 0.3}, kAir), 3, kAir);
  CHECK(t.rho == 1.0);
  CHECK(std::abs(t.u[2]) == 0.0);
  ShockTube sod;
  CHECK(sod({0.2, 0, 0}, 2, kAir)[0] == 1.0);
  CHECK(sod({0.7, 0, 0}, 2, kAir)[0] == 0.125);
}
