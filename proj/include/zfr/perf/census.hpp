#pragma once

#include <cmath>
#include <cstdint>

namespace zfr::perf {

/// Operation tallies gathered by Counted arithmetic.
struct OpCensus {
  std::uint64_t add = 0;  ///< additions and subtractions
  std::uint64_t mul = 0;
  std::uint64_t div = 0;
  std::uint64_t sqrt = 0;
  std::uint64_t other = 0;  ///< pow and friends, one each

  std::uint64_t total() const { return add + mul + div + sqrt + other; }
};

/// Census target of the calling thread; null disables counting.
OpCensus*& active_census();

/// Scalar that tallies every floating-point operation it takes part in.
/// Negation, comparisons and copies are free.
struct Counted {
  double v = 0.0;

  Counted() = default;
  Counted(double x) : v(x) {}  // NOLINT: implicit so templated code can mix in constants
  explicit operator double() const { return v; }

  static void tally(std::uint64_t OpCensus::*field) {
    if (auto* c = active_census()) ++(c->*field);
  }
};

inline Counted operator+(Counted a, Counted b) { Counted::tally(&OpCensus::add); return a.v + b.v; }
inline Counted operator-(Counted a, Counted b) { Counted::tally(&OpCensus::add); return a.v - b.v; }
inline Counted operator*(Counted a, Counted b) { Counted::tally(&OpCensus::mul); return a.v * b.v; }
inline Counted operator/(Counted a, Counted b) { Counted::tally(&OpCensus::div); return a.v / b.v; }
inline Counted operator-(Counted a) { return -a.v; }
inline Counted& operator+=(Counted& a, Counted b) { return a = a + b; }
inline Counted& operator-=(Counted& a, Counted b) { return a = a - b; }
inline Counted& operator*=(Counted& a, Counted b) { return a = a * b; }

inline bool operator<(Counted a, Counted b) { return a.v < b.v; }
inline bool operator>(Counted a, Counted b) { return a.v > b.v; }
inline bool operator<=(Counted a, Counted b) { return a.v <= b.v; }
inline bool operator>=(Counted a, Counted b) { return a.v >= b.v; }
inline bool operator==(Counted a, Counted b) { return a.v == b.v; }

inline Counted sqrt(Counted a) { Counted::tally(&OpCensus::sqrt); return std::sqrt(a.v); }
inline Counted abs(Counted a) { return std::abs(a.v); }
inline Counted pow(Counted a, double e) { Counted::tally(&OpCensus::other); return std::pow(a.v, e); }

/// Scoped census: counts operations on this thread until destroyed.
class CensusScope {
 public:
  explicit CensusScope(OpCensus& target) : previous_(active_census()) { active_census() = &target; }
  ~CensusScope() { active_census() = previous_; }
  CensusScope(const CensusScope&) = delete;
  CensusScope& operator=(const CensusScope&) = delete;

 private:
  OpCensus* previous_;
};

}  // namespace zfr::perf
