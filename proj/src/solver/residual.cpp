#include "zfr/solver/residual.hpp"

#include <algorithm>
#include <cstring>

#include "zfr/common/error.hpp"
#include "zfr/solver/gemm.hpp"

namespace zfr::solver {

using physics::Flux;
using physics::State;

namespace {

constexpr std::size_t kFaceChunk = 64;
constexpr std::uint64_t kDouble = sizeof(double);

bool is_chain_group(const std::vector<std::string>& names) {
  static const std::vector<std::string> chain{"sum_divergence", "inverse_jacobian", "add_source"};
  if (names.empty()) return false;
  auto it = std::find(chain.begin(), chain.end(), names.front());
  if (it == chain.end()) return false;
  for (const auto& n : names) {
    if (it == chain.end() || *it != n) return false;
    ++it;
  }
  return true;
}

}  // namespace

ResidualEvaluator::ResidualEvaluator(const Discretization& disc, const FusionPlan& plan, ExecutionOptions options,
                                     prep::RankContext* ctx)
    : d_(disc), opt_(options), ctx_(ctx), graph_(residual_graph(disc.flux.viscous)),
      passes_(schedule(graph_, plan)), pool_(options.workers) {
  for (const auto& p : passes_) {
    if (!p.fused()) continue;
    std::vector<std::string> names;
    for (int k : p.kernels) names.push_back(graph_.kernels[static_cast<std::size_t>(k)].name);
    const bool interface = names == std::vector<std::string>{"common_flux", "flux_jump"};
    if (!interface && !is_chain_group(names)) throw DomainError("no fused implementation for '" + p.name + "'");
  }
  if (d_.nranks > 1 && (!ctx_ || ctx_->nranks() != d_.nranks)) throw DomainError("evaluator needs the rank context");
  variant_.dim = d_.dim;
  variant_.viscous = d_.flux.viscous;
  variant_.hllc = d_.flux.riemann == physics::RiemannSolver::Hllc;

  const auto ne = d_.nelem;
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto ns = static_cast<std::size_t>(d_.ref.ns);
  const auto nfp = static_cast<std::size_t>(d_.ref.nfp);
  const auto dm = static_cast<std::size_t>(d_.dim);
  const auto nfpf = static_cast<std::size_t>(d_.ref.nfp_face);
  qf_.assign(ne * nv * nfp, 0.0);
  qf_remote_.assign(d_.halo.slots * nv * nfpf, 0.0);
  fhat_.assign(ne * nv * dm * ns, 0.0);
  fn_.assign(ne * nv * nfp, 0.0);
  divf_.assign(ne * nv * ns, 0.0);
  fi_.assign(ne * nv * nfp, 0.0);
  jump_.assign(ne * nv * nfp, 0.0);
  corrf_.assign(ne * nv * ns, 0.0);
  if (d_.flux.viscous) {
    sjump_.assign(ne * nv * nfp, 0.0);
    gref_.assign(ne * nv * dm * ns, 0.0);
    grad_.assign(ne * nv * dm * ns, 0.0);
    gradf_.assign(ne * nv * dm * nfp, 0.0);
    gradf_remote_.assign(d_.halo.slots * nv * dm * nfpf, 0.0);
  }

  // Largest per-element working set among the staged element kernels.
  const std::size_t flux_ws = nv * ns + 9 * ns + (d_.flux.viscous ? nv * dm * ns : 0) + nv * dm * ns;
  const std::size_t chain_ws = 2 * nv * ns + ns + nv * ns + ns + nv * ns + nv * ns;
  const std::size_t jump_ws = 3 * nv * nfp;
  const std::size_t grad_ws = 2 * nv * dm * ns + 10 * ns;
  const std::size_t ws = std::max({flux_ws, chain_ws, jump_ws, grad_ws}) * kDouble * (opt_.double_buffering ? 2 : 1);
  block_ = std::max<std::size_t>(1, opt_.scratch_bytes / ws);
  block_ = std::min(block_, std::max<std::size_t>(1, ne));
  nblocks_ = (ne + block_ - 1) / block_;
  scratch_.resize(static_cast<std::size_t>(opt_.workers));
  worker_ledgers_.resize(static_cast<std::size_t>(opt_.workers));
}

perf::KernelCounters& ResidualEvaluator::counters(int worker, const std::string& name) {
  return worker_ledgers_[static_cast<std::size_t>(worker)].kernel(name);
}

void ResidualEvaluator::compute(const std::vector<double>& Q, std::vector<double>& R, perf::PerfLedger* ledger) {
  if (Q.size() != d_.field_size()) throw DomainError("state size does not match the discretization");
  R.resize(d_.field_size());
  compute(Q.data(), R.data(), ledger);
}

void ResidualEvaluator::compute(const double* Q, double* R, perf::PerfLedger* ledger) {
  q_ = Q;
  r_ = R;
  for (auto& l : worker_ledgers_) l = perf::PerfLedger{};
  for (const auto& p : passes_) run_pass(p);
  if (ledger) {
    for (const auto& l : worker_ledgers_) ledger->merge(l);
  }
  q_ = nullptr;
  r_ = nullptr;
}

void ResidualEvaluator::run_pass(const Pass& pass) {
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto dm = static_cast<std::size_t>(d_.dim);
  const auto& ref = d_.ref;
  const auto& n = pass.name;
  if (n == "interp") {
    run_gemm(n, q_, nv, static_cast<std::size_t>(ref.ns), ref.interp_t, qf_.data(), false);
  } else if (n == "halo_solution") {
    exchange_halo(ctx_, d_.halo, qf_.data(), d_.nv, qf_remote_.data(), &counters(0, n));
  } else if (n == "common_solution") {
    run_faces(n, FaceMode::Solution);
  } else if (n == "gradient") {
    run_gemm(n, q_, nv, static_cast<std::size_t>(ref.ns), ref.gradient_t, gref_.data(), false);
  } else if (n == "gradient_correction") {
    run_gemm(n, sjump_.data(), nv, static_cast<std::size_t>(ref.nfp), ref.gradient_correction_t, gref_.data(), true);
  } else if (n == "transform_gradient") {
    run_transform_gradient();
  } else if (n == "interp_gradient") {
    run_gemm(n, grad_.data(), nv * dm, static_cast<std::size_t>(ref.ns), ref.interp_t, gradf_.data(), false);
  } else if (n == "halo_gradient") {
    exchange_halo(ctx_, d_.halo, gradf_.data(), d_.nv * d_.dim, gradf_remote_.data(), &counters(0, n));
  } else if (n == "evaluate_flux") {
    run_evaluate_flux();
  } else if (n == "normal_interp") {
    run_gemm(n, fhat_.data(), nv, dm * static_cast<std::size_t>(ref.ns), ref.normal_interp_t, fn_.data(), false);
  } else if (n == "divergence") {
    run_gemm(n, fhat_.data(), nv, dm * static_cast<std::size_t>(ref.ns), ref.divergence_t, divf_.data(), false);
  } else if (n == "common_flux") {
    run_faces(n, FaceMode::Flux);
  } else if (n == "flux_jump") {
    run_flux_jump();
  } else if (n == "common_flux+flux_jump") {
    run_faces(n, FaceMode::FusedFlux);
  } else if (n == "correction") {
    run_gemm(n, jump_.data(), nv, static_cast<std::size_t>(ref.nfp), ref.correction_t, corrf_.data(), false);
  } else {
    const bool sum = n.find("sum_divergence") != std::string::npos;
    const bool scale = n.find("inverse_jacobian") != std::string::npos;
    const bool source = n.find("add_source") != std::string::npos;
    if (!sum && !scale && !source) throw DomainError("no implementation for kernel '" + n + "'");
    run_chain(n, sum, scale, source);
  }
}

void ResidualEvaluator::run_gemm(const std::string& name, const double* A, std::size_t rows_per_elem, std::size_t k,
                                 const fr::Matrix& opT, double* C, bool accumulate) {
  const auto ncols = static_cast<std::size_t>(opT.cols);
  if (static_cast<std::size_t>(opT.rows) != k) throw DomainError("operator shape mismatch in " + name);
  const auto body = [&](int worker, std::size_t b0, std::size_t b1) {
    auto& c = counters(worker, name);
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t e0 = b * block_, e1 = std::min(d_.nelem, e0 + block_);
      const std::size_t m = (e1 - e0) * rows_per_elem;
      gemm(A + e0 * rows_per_elem * k, m, k, opT.data.data(), ncols, C + e0 * rows_per_elem * ncols, accumulate);
      c.flops += perf::flops_gemm(static_cast<std::int64_t>(m), static_cast<std::int64_t>(ncols),
                                  static_cast<std::int64_t>(k));
      c.bytes_read += (m * k + (accumulate ? m * ncols : 0)) * kDouble;
      c.bytes_written += m * ncols * kDouble;
      ++c.invocations;
    }
  };
  pool_.run(nblocks_, body, !opt_.deterministic);
}

void ResidualEvaluator::run_element(const std::string& name, const std::vector<Stream>& in,
                                    const std::vector<OutStream>& out, const ElementBody& body, double flops) {
  counters(0, name).flops += flops;
  const auto work = [&](int worker, std::size_t b0, std::size_t b1) {
    auto& c = counters(worker, name);
    auto& bufs = scratch_[static_cast<std::size_t>(worker)];
    std::vector<const double*> ptrs(in.size());
    auto range = [&](std::size_t b) {
      const std::size_t e0 = b * block_;
      return std::pair{e0, std::min(d_.nelem, e0 + block_)};
    };
    auto stage = [&](std::size_t b, int slot) {
      const auto [e0, e1] = range(b);
      auto& buf = bufs[static_cast<std::size_t>(slot)];
      std::size_t total = 0;
      for (const auto& s : in) total += s.per_elem * (e1 - e0);
      if (buf.size() < total) buf.resize(total);
      std::size_t off = 0;
      for (const auto& s : in) {
        const std::size_t len = s.per_elem * (e1 - e0);
        std::memcpy(buf.data() + off, s.base + e0 * s.per_elem, len * kDouble);
        off += len;
      }
    };
    auto staged_ptrs = [&](std::size_t b, int slot) {
      const auto [e0, e1] = range(b);
      std::size_t off = 0;
      for (std::size_t i = 0; i < in.size(); ++i) {
        ptrs[i] = bufs[static_cast<std::size_t>(slot)].data() + off;
        off += in[i].per_elem * (e1 - e0);
      }
    };
    if (opt_.double_buffering && b0 < b1) stage(b0, 0);
    for (std::size_t b = b0; b < b1; ++b) {
      const auto [e0, e1] = range(b);
      const int slot = static_cast<int>((b - b0) % 2);
      if (opt_.double_buffering) {
        if (b + 1 < b1) {
          stage(b + 1, 1 - slot);
          ++c.prefetches;
        }
        staged_ptrs(b, slot);
      } else {
        for (std::size_t i = 0; i < in.size(); ++i) ptrs[i] = in[i].base + e0 * in[i].per_elem;
      }
      body(worker, e0, e1, ptrs);
      for (const auto& s : in) c.bytes_read += s.per_elem * (e1 - e0) * kDouble;
      for (const auto& s : out) c.bytes_written += s.per_elem * (e1 - e0) * kDouble;
      ++c.invocations;
    }
  };
  // Element passes keep the static split so each worker streams a contiguous
  // run of blocks through its two scratch buffers.
  pool_.run(nblocks_, work, false);
}

void ResidualEvaluator::run_evaluate_flux() {
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto ns = static_cast<std::size_t>(d_.ref.ns);
  const auto dm = static_cast<std::size_t>(d_.dim);
  const bool visc = d_.flux.viscous;
  std::vector<Stream> in{{q_, nv * ns}, {d_.adjugate.data(), 9 * ns}};
  if (visc) in.push_back({grad_.data(), nv * dm * ns});
  const std::vector<OutStream> out{{fhat_.data(), nv * dm * ns}};
  const auto body = [&](int, std::size_t e0, std::size_t e1, const std::vector<const double*>& p) {
    for (std::size_t e = e0; e < e1; ++e) {
      const double* q = p[0] + (e - e0) * nv * ns;
      const double* adj = p[1] + (e - e0) * 9 * ns;
      const double* g = visc ? p[2] + (e - e0) * nv * dm * ns : nullptr;
      double* F = fhat_.data() + e * nv * dm * ns;
      try {
        for (std::size_t i = 0; i < ns; ++i) {
          State<double> s{};
          for (std::size_t v = 0; v < nv; ++v) s[v] = q[v * ns + i];
          fr::Mat3 a{};
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) a[r][c] = adj[i * 9 + static_cast<std::size_t>(3 * r + c)];
          Flux<double> gr{};
          if (visc)
            for (std::size_t v = 0; v < nv; ++v)
              for (std::size_t ax = 0; ax < dm; ++ax) gr[ax][v] = g[(v * dm + ax) * ns + i];
          const auto f = evaluate_flux_point<double>(s, visc ? &gr : nullptr, a, d_.flux);
          for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t ax = 0; ax < dm; ++ax) F[(v * dm + ax) * ns + i] = f[ax][v];
        }
      } catch (const StateError& err) {
        throw StateError(err.what(), d_.cell_ids[e]);
      }
    }
  };
  run_element("evaluate_flux", in, out, body,
              perf::flops_pointwise("evaluate_flux", static_cast<std::int64_t>(d_.nelem * ns), variant_));
}

void ResidualEvaluator::run_transform_gradient() {
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto ns = static_cast<std::size_t>(d_.ref.ns);
  const auto dm = static_cast<std::size_t>(d_.dim);
  const std::vector<Stream> in{{gref_.data(), nv * dm * ns}, {d_.adjugate.data(), 9 * ns}, {d_.inv_det.data(), ns}};
  const std::vector<OutStream> out{{grad_.data(), nv * dm * ns}};
  const auto body = [&](int, std::size_t e0, std::size_t e1, const std::vector<const double*>& p) {
    for (std::size_t e = e0; e < e1; ++e) {
      const double* gr = p[0] + (e - e0) * nv * dm * ns;
      const double* adj = p[1] + (e - e0) * 9 * ns;
      const double* idet = p[2] + (e - e0) * ns;
      double* G = grad_.data() + e * nv * dm * ns;
      for (std::size_t i = 0; i < ns; ++i) {
        fr::Mat3 a{};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) a[r][c] = adj[i * 9 + static_cast<std::size_t>(3 * r + c)];
        for (std::size_t v = 0; v < nv; ++v) {
          std::array<double, 3> g{};
          for (std::size_t ax = 0; ax < dm; ++ax) g[ax] = gr[(v * dm + ax) * ns + i];
          const auto t = transform_gradient_point<double>(g, a, idet[i], d_.dim);
          for (std::size_t ax = 0; ax < dm; ++ax) G[(v * dm + ax) * ns + i] = t[ax];
        }
      }
    }
  };
  run_element("transform_gradient", in, out, body,
              perf::flops_pointwise("transform_gradient", static_cast<std::int64_t>(d_.nelem * ns), variant_));
}

void ResidualEvaluator::run_flux_jump() {
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto nfp = static_cast<std::size_t>(d_.ref.nfp);
  const std::vector<Stream> in{{fi_.data(), nv * nfp}, {fn_.data(), nv * nfp}};
  const std::vector<OutStream> out{{jump_.data(), nv * nfp}};
  const auto body = [&](int, std::size_t e0, std::size_t e1, const std::vector<const double*>& p) {
    const std::size_t len = (e1 - e0) * nv * nfp;
    double* J = jump_.data() + e0 * nv * nfp;
    for (std::size_t i = 0; i < len; ++i) J[i] = flux_jump_entry(p[0][i], p[1][i]);
  };
  run_element("flux_jump", in, out, body,
              perf::flops_pointwise("flux_jump", static_cast<std::int64_t>(d_.nelem * nfp), variant_));
}

void ResidualEvaluator::run_chain(const std::string& name, bool sum, bool scale, bool source) {
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto ns = static_cast<std::size_t>(d_.ref.ns);
  std::vector<Stream> in;
  if (sum) {
    in.push_back({divf_.data(), nv * ns});
    in.push_back({corrf_.data(), nv * ns});
  } else {
    in.push_back({r_, nv * ns});
  }
  if (scale) in.push_back({d_.neg_inv_det.data(), ns});
  if (source) {
    in.push_back({q_, nv * ns});
    in.push_back({d_.sponge_sigma.data(), ns});
    in.push_back({d_.sponge_b.data(), nv * ns});
  }
  const std::vector<OutStream> out{{r_, nv * ns}};
  const auto body = [&, sum, scale, source](int, std::size_t e0, std::size_t e1, const std::vector<const double*>& p) {
    for (std::size_t e = e0; e < e1; ++e) {
      const std::size_t le = e - e0;
      std::size_t k = 0;
      const double* a = p[k++] + le * nv * ns;
      const double* b = sum ? p[k++] + le * nv * ns : nullptr;
      const double* nid = scale ? p[k++] + le * ns : nullptr;
      const double* q = source ? p[k++] + le * nv * ns : nullptr;
      const double* sig = source ? p[k++] + le * ns : nullptr;
      const double* sb = source ? p[k++] + le * nv * ns : nullptr;
      double* R = r_ + e * nv * ns;
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t i = 0; i < ns; ++i) {
          const std::size_t j = v * ns + i;
          double val = sum ? sum_divergence_entry(a[j], b[j]) : a[j];
          if (scale) val = inverse_jacobian_entry(val, nid[i]);
          if (source) val = add_source_entry(val, q[j], sig[i], sb[j]);
          R[j] = val;
        }
      }
    }
  };
  const auto pts = static_cast<std::int64_t>(d_.nelem * ns);
  double flops = 0.0;
  if (sum) flops += perf::flops_pointwise("sum_divergence", pts, variant_);
  if (scale) flops += perf::flops_pointwise("inverse_jacobian", pts, variant_);
  if (source) flops += perf::flops_pointwise("add_source", pts, variant_);
  run_element(name, in, out, body, flops);
}

void ResidualEvaluator::run_faces(const std::string& name, FaceMode mode) {
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto nfp = static_cast<std::size_t>(d_.ref.nfp);
  const auto nfpf = static_cast<std::size_t>(d_.ref.nfp_face);
  const auto dm = static_cast<std::size_t>(d_.dim);
  const bool visc = d_.flux.viscous;
  const bool fused = mode == FaceMode::FusedFlux;
  const std::size_t n_int = d_.interior_faces.size();
  const std::size_t n_rem = d_.remote_faces.size();
  const std::size_t n_bnd = d_.boundary_faces.size();
  const std::size_t nfaces = n_int + n_rem + n_bnd;
  const std::size_t geom = dm + 1;
  const std::size_t grad_len = visc && mode != FaceMode::Solution ? nv * dm : 0;

  auto q_at = [&](std::size_t e, std::size_t f) {
    State<double> s{};
    for (std::size_t v = 0; v < nv; ++v) s[v] = qf_[(e * nv + v) * nfp + f];
    return s;
  };
  auto q_remote = [&](std::size_t slot, std::size_t q) {
    State<double> s{};
    for (std::size_t v = 0; v < nv; ++v) s[v] = qf_remote_[(slot * nv + v) * nfpf + q];
    return s;
  };
  auto g_at = [&](std::size_t e, std::size_t f) {
    Flux<double> g{};
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t a = 0; a < dm; ++a) g[a][v] = gradf_[((e * nv + v) * dm + a) * nfp + f];
    return g;
  };
  auto g_remote = [&](std::size_t slot, std::size_t q) {
    Flux<double> g{};
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t a = 0; a < dm; ++a) g[a][v] = gradf_remote_[((slot * nv + v) * dm + a) * nfpf + q];
    return g;
  };
  // Writes one side's share: +s on the left, -s on the right.
  auto put = [&](std::size_t e, std::size_t f, bool left, const State<double>& s) {
    for (std::size_t v = 0; v < nv; ++v) {
      const std::size_t k = (e * nv + v) * nfp + f;
      const double val = left ? s[v] : -s[v];
      if (mode == FaceMode::Solution) {
        sjump_[k] = val;
      } else if (fused) {
        jump_[k] = flux_jump_entry(val, fn_[k]);
      } else {
        fi_[k] = val;
      }
    }
  };
  auto put_solution = [&](std::size_t e, std::size_t f, const State<double>& s) {
    for (std::size_t v = 0; v < nv; ++v) sjump_[(e * nv + v) * nfp + f] = s[v];
  };

  const auto work = [&](int worker, std::size_t c0, std::size_t c1) {
    auto& c = counters(worker, name);
    std::uint64_t fallbacks = 0;
    physics::BoundaryDiagnostics diag;
    const std::size_t f0 = c0 * kFaceChunk, f1 = std::min(nfaces, c1 * kFaceChunk);
    std::uint64_t reads = 0, writes = 0;
    for (std::size_t fi = f0; fi < f1; ++fi) {
      std::size_t owner_cell = 0;
      try {
        if (fi < n_int) {
          const auto& F = d_.interior_faces[fi];
          owner_cell = F.left;
          const auto& pm = d_.perm[static_cast<std::size_t>(F.orientation)];
          for (std::size_t q = 0; q < nfpf; ++q) {
            const std::size_t fl = static_cast<std::size_t>(F.left_face) * nfpf + static_cast<std::size_t>(pm[q]);
            const std::size_t fr = static_cast<std::size_t>(F.right_face) * nfpf + q;
            const auto qL = q_at(F.left, fl);
            const auto qR = q_at(F.right, fr);
            if (mode == FaceMode::Solution) {
              const auto j = common_solution_point<double>(qL, qR, d_.flux);
              put_solution(F.left, fl, j[0]);
              put_solution(F.right, fr, j[1]);
              continue;
            }
            Flux<double> gL{}, gR{};
            if (visc) {
              gL = g_at(F.left, fl);
              gR = g_at(F.right, fr);
            }
            const auto s = common_flux_point<double>(qL, qR, visc ? &gL : nullptr, visc ? &gR : nullptr,
                                                     d_.normal[F.left * nfp + fl], d_.area[F.left * nfp + fl],
                                                     d_.flux, &fallbacks);
            put(F.left, fl, true, s);
            put(F.right, fr, false, s);
          }
          if (mode == FaceMode::Solution) {
            reads += nfpf * 2 * nv;
            writes += nfpf * 2 * nv;
          } else {
            reads += nfpf * (2 * nv + 2 * grad_len + geom + (fused ? 2 * nv : 0));
            writes += nfpf * 2 * nv;
          }
        } else if (fi < n_int + n_rem) {
          const auto& F = d_.remote_faces[fi - n_int];
          owner_cell = F.elem;
          for (std::size_t q = 0; q < nfpf; ++q) {
            const std::size_t f = static_cast<std::size_t>(F.face) * nfpf + q;
            const auto ql = q_at(F.elem, f);
            const auto qr = q_remote(F.slot, q);
            const auto& qL = F.local_is_left ? ql : qr;
            const auto& qR = F.local_is_left ? qr : ql;
            if (mode == FaceMode::Solution) {
              const auto j = common_solution_point<double>(qL, qR, d_.flux);
              put_solution(F.elem, f, j[F.local_is_left ? 0 : 1]);
              continue;
            }
            Flux<double> gl{}, gr{};
            if (visc) {
              gl = g_at(F.elem, f);
              gr = g_remote(F.slot, q);
            }
            Vec3 n;
            double dA;
            if (F.local_is_left) {
              n = d_.normal[F.elem * nfp + f];
              dA = d_.area[F.elem * nfp + f];
            } else {
              const double* rg = d_.remote_geometry.data() + F.slot * 4 * nfpf;
              n = {rg[q], rg[nfpf + q], rg[2 * nfpf + q]};
              dA = rg[3 * nfpf + q];
            }
            const auto* gLp = visc ? (F.local_is_left ? &gl : &gr) : nullptr;
            const auto* gRp = visc ? (F.local_is_left ? &gr : &gl) : nullptr;
            const auto s = common_flux_point<double>(qL, qR, gLp, gRp, n, dA, d_.flux, &fallbacks);
            put(F.elem, f, F.local_is_left, s);
          }
          if (mode == FaceMode::Solution) {
            reads += nfpf * 2 * nv;
            writes += nfpf * nv;
          } else {
            reads += nfpf * (2 * nv + 2 * grad_len + geom + (fused ? nv : 0));
            writes += nfpf * nv;
          }
        } else {
          const auto& F = d_.boundary_faces[fi - n_int - n_rem];
          owner_cell = F.elem;
          const auto& spec = d_.boundary_specs[F.spec];
          for (std::size_t q = 0; q < nfpf; ++q) {
            const std::size_t f = static_cast<std::size_t>(F.face) * nfpf + q;
            const auto qin = q_at(F.elem, f);
            const auto& n = d_.normal[F.elem * nfp + f];
            const auto ghost = physics::apply_boundary(spec, qin, n, d_.dim, d_.flux.gas, &diag);
            if (mode == FaceMode::Solution) {
              State<double> j{};
              for (std::size_t v = 0; v < nv; ++v) j[v] = ghost.viscous[v] - qin[v];
              put_solution(F.elem, f, j);
              continue;
            }
            auto s = physics::riemann_flux(d_.flux.riemann, qin, ghost.inviscid, n, d_.dim, d_.flux.gas, &fallbacks);
            if (visc && spec.kind != physics::BoundaryKind::SlipWall) {
              const auto gin = g_at(F.elem, f);
              const auto gn = physics::normal_flux(physics::viscous_flux(ghost.viscous, gin, d_.dim, d_.flux.gas), n,
                                                   d_.dim);
              for (std::size_t v = 0; v < nv; ++v) {
                if (ghost.adiabatic && v + 1 == nv) continue;
                s[v] = s[v] + (gn[v] + d_.flux.ldg.tau * (qin[v] - ghost.viscous[v]));
              }
            }
            const double dA = d_.area[F.elem * nfp + f];
            for (std::size_t v = 0; v < nv; ++v) s[v] = s[v] * dA;
            put(F.elem, f, true, s);
          }
          if (mode == FaceMode::Solution) {
            reads += nfpf * (nv + geom);
            writes += nfpf * nv;
          } else {
            reads += nfpf * (nv + grad_len + geom + (fused ? nv : 0));
            writes += nfpf * nv;
          }
        }
      } catch (const StateError& err) {
        throw StateError(err.what(), d_.cell_ids[owner_cell]);
      }
    }
    c.bytes_read += reads * kDouble;
    c.bytes_written += writes * kDouble;
    ++c.invocations;
    if (fallbacks) fallbacks_ += fallbacks;
    if (diag.reversed_inflow) reversed_inflow_ += diag.reversed_inflow;
  };
  const auto pairs = static_cast<std::int64_t>(d_.counted_face_points());
  auto& c0 = counters(0, name);
  if (mode == FaceMode::Solution) {
    c0.flops += perf::flops_pointwise("common_solution", pairs, variant_);
  } else {
    c0.flops += perf::flops_pointwise("common_flux", pairs, variant_);
    if (fused)
      c0.flops += perf::flops_pointwise("flux_jump", static_cast<std::int64_t>(d_.nelem * nfp), variant_);
  }
  const std::size_t nchunks = (nfaces + kFaceChunk - 1) / kFaceChunk;
  pool_.run(nchunks, work, !opt_.deterministic);
}

}  // namespace zfr::solver
