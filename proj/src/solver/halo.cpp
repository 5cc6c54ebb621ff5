#include "zfr/solver/halo.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "zfr/common/bytes.hpp"
#include "zfr/common/error.hpp"
#include "zfr/prep/nbx.hpp"

namespace zfr::solver {

HaloPlan build_halo_plan(std::vector<RemoteFace>& faces, int points_per_edge, int face_dim, int nfaces_per_elem) {
  HaloPlan plan;
  plan.nfp_face = face_dim == 2 ? points_per_edge * points_per_edge : points_per_edge;
  plan.nfp = plan.nfp_face * nfaces_per_elem;
  std::vector<std::size_t> order(faces.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(faces[a].rank, faces[a].key) < std::tie(faces[b].rank, faces[b].key);
  });
  for (std::size_t s = 0; s < order.size(); ++s) {
    auto& f = faces[order[s]];
    f.slot = s;
    if (plan.neighbors.empty() || plan.neighbors.back().rank != f.rank) plan.neighbors.push_back({f.rank, {}});
    HaloPlan::Entry e;
    e.elem = f.elem;
    e.face = f.face;
    e.slot = s;
    const auto perm = mesh::orientation_permutation(f.orientation, points_per_edge, face_dim);
    e.unpack.resize(perm.size());
    if (f.local_is_left) {
      // Partner sends right-side order; right point q sits at left point perm[q].
      for (std::size_t q = 0; q < perm.size(); ++q) e.unpack[static_cast<std::size_t>(perm[q])] = static_cast<int>(q);
    } else {
      for (std::size_t q = 0; q < perm.size(); ++q) e.unpack[q] = perm[q];
    }
    plan.neighbors.back().entries.push_back(std::move(e));
  }
  plan.slots = order.size();
  return plan;
}

void exchange_halo(prep::RankContext* ctx, const HaloPlan& plan, const double* local, int ncomp, double* remote,
                   perf::KernelCounters* counters) {
  if (!ctx || ctx->nranks() == 1) {
    if (!plan.neighbors.empty()) throw ExchangeError("halo plan has neighbors but no transport");
    return;
  }
  const auto nfpf = static_cast<std::size_t>(plan.nfp_face);
  const auto nfp = static_cast<std::size_t>(plan.nfp);
  const auto nc = static_cast<std::size_t>(ncomp);
  std::map<int, Bytes> out;
  std::uint64_t packed = 0;
  for (const auto& nb : plan.neighbors) {
    std::vector<double> buf;
    buf.reserve(nb.entries.size() * nc * nfpf);
    for (const auto& e : nb.entries) {
      const double* base = local + e.elem * nc * nfp + static_cast<std::size_t>(e.face) * nfpf;
      for (std::size_t c = 0; c < nc; ++c) buf.insert(buf.end(), base + c * nfp, base + c * nfp + nfpf);
    }
    packed += buf.size();
    ByteWriter w;
    w.put_span<double>(buf);
    out[nb.rank] = w.bytes();
  }
  auto in = prep::nbx_exchange(*ctx, out);
  for (const auto& nb : plan.neighbors) {
    auto it = in.find(nb.rank);
    if (it == in.end()) throw ExchangeError("no halo data from rank " + std::to_string(nb.rank));
    ByteReader r(it->second);
    const auto vals = r.get_vector<double>();
    if (vals.size() != nb.entries.size() * nc * nfpf)
      throw ExchangeError("halo size mismatch with rank " + std::to_string(nb.rank));
    std::size_t off = 0;
    for (const auto& e : nb.entries) {
      double* dst = remote + e.slot * nc * nfpf;
      for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t q = 0; q < nfpf; ++q) dst[c * nfpf + q] = vals[off + c * nfpf + static_cast<std::size_t>(e.unpack[q])];
      }
      off += nc * nfpf;
    }
    in.erase(it);
  }
  if (!in.empty()) throw ExchangeError("unexpected halo data from rank " + std::to_string(in.begin()->first));
  if (counters) {
    counters->bytes_read += packed * sizeof(double);
    counters->bytes_written += packed * sizeof(double);
    ++counters->invocations;
  }
}

}  // namespace zfr::solver
