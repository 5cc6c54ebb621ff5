#include "zfr/perf/ledger.hpp"

#include "zfr/perf/census.hpp"

namespace zfr::perf {

OpCensus*& active_census() {
  thread_local OpCensus* census = nullptr;
  return census;
}

void KernelCounters::merge(const KernelCounters& o) {
  flops += o.flops;
  bytes_read += o.bytes_read;
  bytes_written += o.bytes_written;
  invocations += o.invocations;
  prefetches += o.prefetches;
  seconds.insert(seconds.end(), o.seconds.begin(), o.seconds.end());
}

void PerfLedger::merge(const PerfLedger& other) {
  for (const auto& [name, k] : other.kernels_) kernels_[name].merge(k);
  step_seconds_.insert(step_seconds_.end(), other.step_seconds_.begin(), other.step_seconds_.end());
}

double PerfLedger::total_flops() const {
  double s = 0.0;
  for (const auto& [name, k] : kernels_) s += k.flops;
  return s;
}

std::uint64_t PerfLedger::total_bytes_read() const {
  std::uint64_t s = 0;
  for (const auto& [name, k] : kernels_) s += k.bytes_read;
  return s;
}

std::uint64_t PerfLedger::total_bytes_written() const {
  std::uint64_t s = 0;
  for (const auto& [name, k] : kernels_) s += k.bytes_written;
  return s;
}

std::uint64_t PerfLedger::total_prefetches() const {
  std::uint64_t s = 0;
  for (const auto& [name, k] : kernels_) s += k.prefetches;
  return s;
}

}  // namespace zfr::perf
