#include "zfr/prep/nbx.hpp"

#include <algorithm>

#include "zfr/common/error.hpp"

namespace zfr::prep {

std::map<int, Bytes> nbx_exchange(RankContext& ctx, const std::map<int, Bytes>& sbuffers) {
  auto& t = ctx.transport();
  const int tag = ctx.next_tag();

  std::vector<MessageTransport::Request> sends;
  for (const auto& [dest, buf] : sbuffers) {
    if (dest < 0 || dest >= ctx.nranks()) throw ExchangeError("invalid destination rank " + std::to_string(dest));
    if (buf.empty()) continue;
    sends.push_back(t.issend(dest, tag, buf));
  }

  std::map<int, Bytes> received;
  std::optional<MessageTransport::Request> barrier;
  for (;;) {
    bool progressed = false;
    if (auto env = t.iprobe(tag)) {
      auto data = t.recv(env->source, tag);
      auto& slot = received[env->source];
      slot.insert(slot.end(), data.begin(), data.end());
      progressed = true;
    }
    if (!barrier) {
      sends.erase(std::remove_if(sends.begin(), sends.end(), [&](auto r) { return t.test_send(r); }), sends.end());
      if (sends.empty()) {
        barrier = t.ibarrier();
        progressed = true;
      }
    } else if (t.test_barrier(*barrier)) {
      break;
    }
    if (!progressed) t.wait_for_activity();
  }
  return received;
}

std::vector<Bytes> allgather(RankContext& ctx, const Bytes& payload) {
  // A leading marker byte keeps empty payloads from being skipped.
  Bytes framed;
  framed.reserve(payload.size() + 1);
  framed.push_back(1);
  framed.insert(framed.end(), payload.begin(), payload.end());
  std::map<int, Bytes> out;
  for (int r = 0; r < ctx.nranks(); ++r) out[r] = framed;
  auto in = nbx_exchange(ctx, out);
  std::vector<Bytes> result(static_cast<std::size_t>(ctx.nranks()));
  for (auto& [src, data] : in) {
    if (data.empty()) throw ExchangeError("allgather received an empty frame");
    result[static_cast<std::size_t>(src)].assign(data.begin() + 1, data.end());
  }
  if (in.size() != static_cast<std::size_t>(ctx.nranks())) throw ExchangeError("allgather missed a rank");
  return result;
}

namespace {

std::vector<double> gather_doubles(RankContext& ctx, const std::vector<double>& values) {
  ByteWriter w;
  w.put_span<double>(values);
  auto all = allgather(ctx, w.bytes());
  std::vector<double> flat;
  for (const auto& b : all) {
    ByteReader r(b);
    auto v = r.get_vector<double>();
    if (v.size() != values.size()) throw ExchangeError("reduction length mismatch across ranks");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return flat;
}

}  // namespace

double allreduce_min(RankContext& ctx, double value) {
  if (ctx.nranks() == 1) return value;
  const auto all = gather_doubles(ctx, {value});
  return *std::min_element(all.begin(), all.end());
}

double allreduce_max(RankContext& ctx, double value) {
  if (ctx.nranks() == 1) return value;
  const auto all = gather_doubles(ctx, {value});
  return *std::max_element(all.begin(), all.end());
}

bool any_rank(RankContext& ctx, bool flag) {
  if (ctx.nranks() == 1) return flag;
  return allreduce_max(ctx, flag ? 1.0 : 0.0) > 0.0;
}

std::vector<double> allreduce_sum(RankContext& ctx, const std::vector<double>& values) {
  if (ctx.nranks() == 1) return values;
  const auto all = gather_doubles(ctx, values);
  std::vector<double> sum(values.size(), 0.0);
  for (std::size_t r = 0; r < static_cast<std::size_t>(ctx.nranks()); ++r) {
    for (std::size_t i = 0; i < values.size(); ++i) sum[i] += all[r * values.size() + i];
  }
  return sum;
}

}  // namespace zfr::prep
