#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zfr::perf {

/// One benchmark run; serialized as a row of the bench CSV.
struct BenchRecord {
  int ranks = 1;
  int workers = 1;
  std::int64_t elements = 0;
  int p = 0;
  bool fusion = false;
  double mean_step_s = 0.0;
  double flops = 0.0;  ///< per step
  double gflops_rate = 0.0;
  std::uint64_t bytes_moved = 0;  ///< per step

  int resources() const { return ranks * workers; }
};

/// "ranks,workers,elements,p,fusion,mean_step_s,flops,gflops_rate,bytes_moved"
std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& r);
/// Parses a CSV with the bench header; throws FormatError on a bad header or row.
std::vector<BenchRecord> parse_bench_csv(const std::string& text);

enum class ScalingMode { Strong, Weak };
ScalingMode scaling_mode_from_string(const std::string& s);

struct ScalingRecord {
  ScalingMode mode = ScalingMode::Strong;
  std::vector<int> resources;
  std::vector<double> mean_step_s;
  std::vector<double> speedup;     ///< t0 / t_i
  std::vector<double> efficiency;  ///< strong: speedup / resource ratio; weak: t0 / t_i
  std::vector<double> time_ratio;  ///< t_i / t0
  bool superlinear = false;        ///< some efficiency above 1
};

/// Baseline is the smallest resource count. Throws DomainError for fewer than
/// two runs, repeated resource counts, non-positive times, or a series that
/// mixes cases (strong: differing elements or p; weak: differing elements per
/// resource or p).
ScalingRecord scaling_report(std::vector<BenchRecord> runs, ScalingMode mode);

/// "resources,mean_step_s,speedup,efficiency,time_ratio"
std::string scaling_csv(const ScalingRecord& rec);

}  // namespace zfr::perf
