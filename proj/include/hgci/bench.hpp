// Construction-time benchmark grid.
//
// One record per (method, design) cell.  Wall time wraps table construction
// only -- audits and serialization happen outside the clock -- and the
// reported figure is the median of the repeat runs on a monotonic clock.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hgci/errors.hpp"
#include "hgci/hg_dist.hpp"
#include "hgci/procedures.hpp"

namespace hgci {

struct BenchRecord {
  std::string method;
  long N = 0;
  long n = 0;
  double alpha = 0.0;
  double wall_time_seconds = 0.0;
  long long total_size = 0;
  double min_coverage = 0.0;
  double asymmetry_proportion = 0.0;
  bool failed = false;
  std::string error;
};

inline constexpr const char* kBenchCsvHeader =
    "method,N,n,alpha,wall_time_seconds,total_size,min_coverage,"
    "asymmetry_proportion";

/// How the sample size is derived from N for each grid cell.
enum class NRule { half, quarter, explicit_list };

inline NRule parse_n_rule(const std::string& name) {
  if (name == "half") return NRule::half;
  if (name == "quarter") return NRule::quarter;
  if (name == "explicit") return NRule::explicit_list;
  throw std::invalid_argument("bench: unknown n-rule '" + name + "'");
}

/// Bench grid description.  Defaults mirror the desk-scale comparison:
/// alpha = 0.05, N in {200, 400}, n = N/2, both curve methods.
struct BenchSpec {
  std::vector<Method> methods{Method::symmetric_opt, Method::lco_style};
  std::vector<long> N_list{200, 400};
  NRule n_rule = NRule::half;
  std::vector<long> n_list;  // used when n_rule == explicit_list
  double alpha = 0.05;
  int repeats = 3;
  bool allow_long_runs = false;
  bool parallel_cells = false;
};

namespace detail {

inline double median_seconds(std::vector<double> times) {
  std::sort(times.begin(), times.end());
  std::size_t m = times.size() / 2;
  if (times.size() % 2 == 1) return times[m];
  return 0.5 * (times[m - 1] + times[m]);
}

}  // namespace detail

/// Runs one cell: `repeats` timed constructions, then one untimed audit.
/// Construction failures are captured in the record, not thrown.
inline BenchRecord bench_cell(Method method, const Design& d, int repeats) {
  if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
  BenchRecord rec;
  rec.method = method_name(method);
  rec.N = d.N;
  rec.n = d.n;
  rec.alpha = d.alpha;
  try {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repeats));
    ProcedureTable table;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      ProcedureTable built = make_table(method, d);
      auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::max(
          1e-9, std::chrono::duration<double>(t1 - t0).count()));
      table = std::move(built);
    }
    rec.wall_time_seconds = detail::median_seconds(std::move(times));
    AuditReport audit = full_audit(table);
    rec.total_size = audit.total_size;
    rec.min_coverage = audit.min_coverage;
    rec.asymmetry_proportion = audit.asymmetry_proportion;
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.wall_time_seconds = std::numeric_limits<double>::quiet_NaN();
    rec.min_coverage = std::numeric_limits<double>::quiet_NaN();
    rec.asymmetry_proportion = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

/// Runs the whole grid, methods outer, N inner, in deterministic order.
/// Long lco_style runs (N >= 600 at n = N/2) require allow_long_runs.
/// With parallel_cells, cells run concurrently but each timed construction
/// stays single-threaded; record order is unchanged.
inline std::vector<BenchRecord> run_bench(const BenchSpec& spec) {
  if (spec.repeats < 1)
    throw std::invalid_argument("bench: repeats must be >= 1");
  if (spec.n_rule == NRule::explicit_list &&
      spec.n_list.size() != spec.N_list.size())
    throw std::invalid_argument(
        "bench: explicit n-rule needs one n per N (got " +
        std::to_string(spec.n_list.size()) + " for " +
        std::to_string(spec.N_list.size()) + " N values)");

  std::vector<std::pair<Method, Design>> cells;
  for (Method method : spec.methods) {
    for (std::size_t i = 0; i < spec.N_list.size(); ++i) {
      long N = spec.N_list[i];
      long n = spec.n_rule == NRule::half      ? N / 2
               : spec.n_rule == NRule::quarter ? (N + 3) / 4
                                               : spec.n_list[i];
      Design d{N, n, spec.alpha};
      validate(d);
      if (method == Method::lco_style && N >= 600 && 2 * n == N &&
          !spec.allow_long_runs)
        throw std::invalid_argument(
            "bench: lco_style at N >= 600 with n = N/2 needs "
            "--allow-long-runs");
      cells.push_back({method, d});
    }
  }

  std::vector<BenchRecord> records;
  records.reserve(cells.size());
  if (spec.parallel_cells) {
    std::vector<std::future<BenchRecord>> futures;
    futures.reserve(cells.size());
    for (const auto& [method, d] : cells)
      futures.push_back(std::async(std::launch::async, bench_cell, method, d,
                                   spec.repeats));
    for (auto& f : futures) records.push_back(f.get());
  } else {
    for (const auto& [method, d] : cells)
      records.push_back(bench_cell(method, d, spec.repeats));
  }
  return records;
}

}  // namespace hgci
