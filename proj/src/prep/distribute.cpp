#include "zfr/prep/distribute.hpp"

#include <algorithm>
#include <string>

#include "zfr/common/error.hpp"

namespace zfr::prep {

EntityRange distribute_entities(std::int64_t global_count, std::int64_t nranks, std::int64_t rank) {
  if (nranks < 1) throw DomainError("nranks must be >= 1");
  if (rank < 0 || rank >= nranks) throw DomainError("rank " + std::to_string(rank) + " outside [0, nranks)");
  if (global_count < 0) throw DomainError("negative entity count");
  const auto base = global_count / nranks;
  const auto extra = global_count % nranks;
  EntityRange r;
  r.begin = rank * base + std::min(rank, extra);
  r.end = r.begin + base + (rank < extra ? 1 : 0);
  return r;
}

}  // namespace zfr::prep
