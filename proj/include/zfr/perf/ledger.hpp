#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace zfr::perf {

struct KernelCounters {
  double flops = 0.0;
  std::uint64_t bytes_read = 0;
  std::uint64_t bytes_written = 0;
  std::uint64_t invocations = 0;
  std::uint64_t prefetches = 0;  ///< staged block loads issued ahead of compute
  std::vector<double> seconds;   ///< optional per-invocation wall times

  std::uint64_t bytes_moved() const { return bytes_read + bytes_written; }
  void merge(const KernelCounters& o);
};

struct RunMetadata {
  int p = 0;
  std::int64_t elements = 0;
  int ranks = 1;
  int workers = 1;
  bool fusion = false;
};

/// Per-kernel counters plus per-step wall times. Counters only grow during a run.
class PerfLedger {
 public:
  KernelCounters& kernel(const std::string& name) { return kernels_[name]; }
  const std::map<std::string, KernelCounters>& kernels() const { return kernels_; }

  void merge(const PerfLedger& other);
  void record_step(double seconds) { step_seconds_.push_back(seconds); }
  const std::vector<double>& step_seconds() const { return step_seconds_; }

  double total_flops() const;
  std::uint64_t total_bytes_read() const;
  std::uint64_t total_bytes_written() const;
  std::uint64_t total_bytes_moved() const { return total_bytes_read() + total_bytes_written(); }
  std::uint64_t total_prefetches() const;

  RunMetadata meta;

 private:
  std::map<std::string, KernelCounters> kernels_;
  std::vector<double> step_seconds_;
};

}  // namespace zfr::perf
