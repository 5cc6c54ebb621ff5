#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <vector>

#include "zfr/prep/transport.hpp"

namespace zfr::prep {

/// In-process ranks, one thread each, over a shared simulated network.
/// Probe results are drawn from a seeded generator per rank: pending messages
/// may be withheld for a while and sources are picked in random order, so the
/// same collective sees many interleavings across seeds.
class SimCluster {
 public:
  struct Options {
    std::uint64_t seed = 1;
    /// Chance that a probe reports an available message (the rest simulate latency).
    double deliver_probability = 0.6;
    std::chrono::milliseconds deadlock_timeout{30000};
  };

  explicit SimCluster(int nranks) : SimCluster(nranks, Options{}) {}
  SimCluster(int nranks, Options options);

  /// Runs `body` once per rank and joins. Rethrows the first exception.
  void run(const std::function<void(RankContext&)>& body);

  int size() const { return nranks_; }

 private:
  int nranks_;
  Options options_;
};

/// Ranks as forked processes connected by local stream sockets. `body`
/// returns the child's exit status; the vector holds one status per rank
/// (a rank that throws reports 70).
class SocketCluster {
 public:
  explicit SocketCluster(int nranks, std::chrono::milliseconds deadlock_timeout = std::chrono::milliseconds{30000});

  std::vector<int> run(const std::function<int(RankContext&)>& body);

 private:
  int nranks_;
  std::chrono::milliseconds timeout_;
};

}  // namespace zfr::prep
