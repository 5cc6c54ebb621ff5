#include "zfr/perf/scaling.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "zfr/common/error.hpp"

namespace zfr::perf {

std::string bench_csv_header() {
  return "ranks,workers,elements,p,fusion,mean_step_s,flops,gflops_rate,bytes_moved";
}

std::string bench_csv_row(const BenchRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%d,%lld,%d,%s,%.17g,%.17g,%.17g,%llu", r.ranks, r.workers,
                static_cast<long long>(r.elements), r.p, r.fusion ? "on" : "off", r.mean_step_s, r.flops,
                r.gflops_rate, static_cast<unsigned long long>(r.bytes_moved));
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <class F>
auto parse_field(const std::string& s, std::size_t line, F conv) {
  try {
    std::size_t used = 0;
    auto v = conv(s, &used);
    if (used != s.size()) throw ParseError(line, "trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(line, "bad number '" + s + "'");
  }
}

}  // namespace

std::vector<BenchRecord> parse_bench_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<BenchRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != bench_csv_header()) throw ParseError(lineno, "unexpected bench CSV header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) throw ParseError(lineno, "expected 9 fields");
    BenchRecord r;
    auto to_int = [](const std::string& s, std::size_t* u) { return std::stoi(s, u); };
    auto to_ll = [](const std::string& s, std::size_t* u) { return std::stoll(s, u); };
    auto to_ull = [](const std::string& s, std::size_t* u) { return std::stoull(s, u); };
    auto to_d = [](const std::string& s, std::size_t* u) { return std::stod(s, u); };
    r.ranks = parse_field(f[0], lineno, to_int);
    r.workers = parse_field(f[1], lineno, to_int);
    r.elements = parse_field(f[2], lineno, to_ll);
    r.p = parse_field(f[3], lineno, to_int);
    if (f[4] != "on" && f[4] != "off") throw ParseError(lineno, "fusion must be on or off");
    r.fusion = f[4] == "on";
    r.mean_step_s = parse_field(f[5], lineno, to_d);
    r.flops = parse_field(f[6], lineno, to_d);
    r.gflops_rate = parse_field(f[7], lineno, to_d);
    r.bytes_moved = parse_field(f[8], lineno, to_ull);
    out.push_back(r);
  }
  if (!header) throw FormatError("empty bench CSV");
  return out;
}

ScalingMode scaling_mode_from_string(const std::string& s) {
  if (s == "strong") return ScalingMode::Strong;
  if (s == "weak") return ScalingMode::Weak;
  throw DomainError("scaling mode must be strong or weak, got '" + s + "'");
}

ScalingRecord scaling_report(std::vector<BenchRecord> runs, ScalingMode mode) {
  if (runs.size() < 2) throw DomainError("scaling series needs at least two runs");
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.resources() < b.resources(); });
  const auto& base = runs.front();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    if (r.resources() < 1) throw DomainError("resource count must be positive");
    if (i > 0 && r.resources() == runs[i - 1].resources()) throw DomainError("repeated resource count in series");
    if (!(r.mean_step_s > 0.0)) throw DomainError("step time must be positive");
    if (r.p != base.p) throw DomainError("series mixes polynomial degrees");
    if (mode == ScalingMode::Strong && r.elements != base.elements)
      throw DomainError("strong series must keep the total element count fixed");
    if (mode == ScalingMode::Weak &&
        r.elements * static_cast<std::int64_t>(base.resources()) != base.elements * r.resources())
      throw DomainError("weak series must keep elements per resource fixed");
  }
  ScalingRecord rec;
  rec.mode = mode;
  for (const auto& r : runs) {
    const double speedup = base.mean_step_s / r.mean_step_s;
    const double ratio = static_cast<double>(r.resources()) / base.resources();
    const double eff = mode == ScalingMode::Strong ? speedup / ratio : speedup;
    rec.resources.push_back(r.resources());
    rec.mean_step_s.push_back(r.mean_step_s);
    rec.speedup.push_back(speedup);
    rec.efficiency.push_back(eff);
    rec.time_ratio.push_back(r.mean_step_s / base.mean_step_s);
    if (eff > 1.0) rec.superlinear = true;
  }
  return rec;
}

std::string scaling_csv(const ScalingRecord& rec) {
  std::string out = "resources,mean_step_s,speedup,efficiency,time_ratio\n";
  char buf[256];
  for (std::size_t i = 0; i < rec.resources.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", rec.resources[i], rec.mean_step_s[i],
                  rec.speedup[i], rec.efficiency[i], rec.time_ratio[i]);
    out += buf;
  }
  return out;
}

}  // namespace zfr::perf
