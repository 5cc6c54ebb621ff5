#pragma once

#include <map>
#include <vector>

#include "zfr/prep/transport.hpp"

namespace zfr::prep {

/// Sparse dynamic exchange: synchronous sends to every non-empty buffer, probe
/// for incoming messages, and a nonblocking barrier entered once all local sends
/// have been received. Returns the messages addressed to this rank by source.
std::map<int, Bytes> nbx_exchange(RankContext& ctx, const std::map<int, Bytes>& sbuffers);

/// Every rank's payload, indexed by rank.
std::vector<Bytes> allgather(RankContext& ctx, const Bytes& payload);

double allreduce_min(RankContext& ctx, double value);
double allreduce_max(RankContext& ctx, double value);
bool any_rank(RankContext& ctx, bool flag);

/// Element-wise sum accumulated in rank order, so every rank gets the same bits.
std::vector<double> allreduce_sum(RankContext& ctx, const std::vector<double>& values);

}  // namespace zfr::prep
