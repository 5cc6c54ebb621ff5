#pragma once

#include <cstdint>

namespace zfr::prep {

/// Half-open range [begin, end) of global entity indices read by one rank.
struct EntityRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t size() const { return end - begin; }
  bool intersects(std::int64_t b, std::int64_t e) const { return begin < e && b < end; }
  friend bool operator==(const EntityRange&, const EntityRange&) = default;
};

/// Balanced contiguous split; the first (global_count mod nranks) ranks hold one extra entity.
EntityRange distribute_entities(std::int64_t global_count, std::int64_t nranks, std::int64_t rank);

}  // namespace zfr::prep
