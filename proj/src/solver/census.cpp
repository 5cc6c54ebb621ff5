#include "zfr/perf/census.hpp"

#include "zfr/solver/gemm.hpp"
#include "zfr/solver/residual.hpp"

namespace zfr::solver {

using perf::Counted;

namespace {

struct GemmShape {
  std::string name;
  std::size_t rows;
  const fr::Matrix* op;
  bool accumulate;
};

std::vector<GemmShape> gemm_shapes(const KernelGraph& g, const Discretization& d) {
  const auto nv = static_cast<std::size_t>(d.nv);
  const auto dm = static_cast<std::size_t>(d.dim);
  std::vector<GemmShape> out;
  for (const auto& k : g.kernels) {
    if (k.cls != KernelClass::Gemm) continue;
    if (k.name == "interp") out.push_back({k.name, nv, &d.ref.interp_t, false});
    if (k.name == "gradient") out.push_back({k.name, nv, &d.ref.gradient_t, false});
    if (k.name == "gradient_correction") out.push_back({k.name, nv, &d.ref.gradient_correction_t, true});
    if (k.name == "interp_gradient") out.push_back({k.name, nv * dm, &d.ref.interp_t, false});
    if (k.name == "normal_interp") out.push_back({k.name, nv, &d.ref.normal_interp_t, false});
    if (k.name == "divergence") out.push_back({k.name, nv, &d.ref.divergence_t, false});
    if (k.name == "correction") out.push_back({k.name, nv, &d.ref.correction_t, false});
  }
  return out;
}

template <class F>
double measure(F&& fn) {
  perf::OpCensus c;
  {
    perf::CensusScope scope(c);
    fn();
  }
  return static_cast<double>(c.total());
}

}  // namespace

double ResidualEvaluator::scheme_flops() const {
  const auto ne = static_cast<std::int64_t>(d_.nelem);
  const auto ns = static_cast<std::int64_t>(d_.ref.ns);
  const auto nfp = static_cast<std::int64_t>(d_.ref.nfp);
  const auto pairs = static_cast<std::int64_t>(d_.counted_face_points());
  double total = 0.0;
  for (const auto& s : gemm_shapes(graph_, d_)) {
    total += perf::flops_gemm(ne * static_cast<std::int64_t>(s.rows), s.op->cols, s.op->rows);
  }
  total += perf::flops_pointwise("evaluate_flux", ne * ns, variant_);
  total += perf::flops_pointwise("common_flux", pairs, variant_);
  total += perf::flops_pointwise("flux_jump", ne * nfp, variant_);
  total += perf::flops_pointwise("sum_divergence", ne * ns, variant_);
  total += perf::flops_pointwise("inverse_jacobian", ne * ns, variant_);
  total += perf::flops_pointwise("add_source", ne * ns, variant_);
  if (d_.flux.viscous) {
    total += perf::flops_pointwise("common_solution", pairs, variant_);
    total += perf::flops_pointwise("transform_gradient", ne * ns, variant_);
  }
  return total;
}

double ResidualEvaluator::census_flops(const double* Q) const {
  const auto ne = static_cast<double>(d_.nelem);
  const auto ns = static_cast<std::size_t>(d_.ref.ns);
  const auto nfp = static_cast<double>(d_.ref.nfp);
  const auto nv = static_cast<std::size_t>(d_.nv);
  const auto pairs = static_cast<double>(d_.counted_face_points());
  double total = 0.0;

  // Matrix products on one element's rows.
  for (const auto& s : gemm_shapes(graph_, d_)) {
    const auto k = static_cast<std::size_t>(s.op->rows), n = static_cast<std::size_t>(s.op->cols);
    std::vector<Counted> A(s.rows * k, Counted(1.0)), C(s.rows * n);
    total += ne * measure([&] { gemm<Counted>(A.data(), s.rows, k, s.op->data.data(), n, C.data(), s.accumulate); });
  }

  // Point-wise bodies at the first solution point.
  physics::State<Counted> q{};
  for (std::size_t v = 0; v < nv; ++v) q[v] = Q[v * ns];
  physics::Flux<Counted> g{};
  const bool visc = d_.flux.viscous;
  const auto adj = d_.adj_at(0, 0);
  const auto& n = d_.normal[0];
  const double dA = d_.area[0];
  const double pts = ne * static_cast<double>(ns);

  total += pts * measure([&] { evaluate_flux_point<Counted>(q, visc ? &g : nullptr, adj, d_.flux); });
  total += pairs * measure([&] {
    std::uint64_t fb = 0;
    common_flux_point<Counted>(q, q, visc ? &g : nullptr, visc ? &g : nullptr, n, dA, d_.flux, &fb);
  });
  const Counted one(1.0), two(2.0);
  total += ne * nfp * measure([&] {
    for (std::size_t v = 0; v < nv; ++v) flux_jump_entry(one, two);
  });
  total += pts * measure([&] {
    for (std::size_t v = 0; v < nv; ++v) sum_divergence_entry(one, two);
  });
  total += pts * measure([&] {
    for (std::size_t v = 0; v < nv; ++v) inverse_jacobian_entry(one, -0.5);
  });
  total += pts * measure([&] {
    for (std::size_t v = 0; v < nv; ++v) add_source_entry(one, two, 0.0, 0.0);
  });
  if (visc) {
    total += pairs * measure([&] { common_solution_point<Counted>(q, q, d_.flux); });
    total += pts * measure([&] {
      for (std::size_t v = 0; v < nv; ++v)
        transform_gradient_point<Counted>({one, two, one}, adj, d_.inv_det[0], d_.dim);
    });
  }
  return total;
}

}  // namespace zfr::solver
