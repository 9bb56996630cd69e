// End-to-end acceptance checks for the whole library: seven independent
// criteria, each printed as one [PASS]/[FAIL] line with the measured
// numbers and the pinned tolerance next to them.  The process exit code is
// the number of failed criteria, so a green run exits 0.
//
// Criteria 3 and 4 compare against external reference behaviour of the
// original left-anchored construction.  Two of those sub-targets are known
// not to hold for this implementation (mirror ties at n = N/2 resolve
// differently, and gap repair is too rare to dominate the runtime); they
// are reported honestly rather than loosened.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "hgci/hgci.hpp"

namespace {

using hgci::Design;
using hgci::ExactFraction;
using hgci::Method;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

const std::vector<Method> kAllMethods = {
    Method::lco_style, Method::symmetric_opt, Method::tail_baseline};

std::vector<Design> coverage_grid() {
  std::vector<Design> grid;
  for (long N : {20L, 50L, 100L, 200L}) {
    for (long n : {(N + 3) / 4, N / 2}) {
      for (double alpha : {0.01, 0.05, 0.1}) grid.push_back({N, n, alpha});
    }
  }
  return grid;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double time_build(Method m, const Design& d, int repeats) {
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    const double t0 = now_seconds();
    const auto t = hgci::make_table(m, d);
    const double t1 = now_seconds();
    if (t.sets.empty()) std::abort();  // keep the build observable
    times.push_back(t1 - t0);
  }
  return median_of(times);
}

// Criterion 1: every construction holds the nominal coverage level on a
// grid of designs, up to a one-sided 1e-9 audit tolerance.
Outcome criterion_coverage() {
  Outcome o;
  double worst = 1.0;
  int cells = 0;
  std::string worst_at;
  for (const Design& d : coverage_grid()) {
    for (Method m : kAllMethods) {
      const auto a = hgci::coverage_audit(hgci::make_table(m, d));
      const double margin = a.min_coverage - (1.0 - d.alpha);
      ++cells;
      if (margin < worst) {
        worst = margin;
        worst_at = std::string(hgci::method_name(m)) + " N=" +
                   std::to_string(d.N) +
                   " n=" + std::to_string(d.n) +
                   " alpha=" + fmt("%g", d.alpha);
      }
      if (margin < -1e-9) o.pass = false;
    }
  }
  o.detail = "worst coverage margin " + fmt("%.3e", worst) + " (" + worst_at +
             ") over " + std::to_string(cells) + " cells, limit -1e-9";
  return o;
}

// Criterion 2: symmetric tables mirror exactly -- zero asymmetric pairs,
// and relabelling the population (M -> N - M, x -> n - x) reproduces the
// table bit for bit.
Outcome criterion_symmetry() {
  Outcome o;
  int cells = 0;
  long bad_pairs = 0;
  long relabel_mismatches = 0;
  for (const Design& d : coverage_grid()) {
    const auto t = hgci::symmetric_table(d);
    bad_pairs += hgci::asymmetry_audit(t).asymmetric_count;
    const auto& w = t.curve->windows;
    for (long M = 0; M <= d.N; ++M) {
      const auto& lo = w[static_cast<std::size_t>(M)];
      const auto& hi = w[static_cast<std::size_t>(d.N - M)];
      if (lo.a != d.n - hi.b || lo.b != d.n - hi.a ||
          lo.coverage != hi.coverage)
        ++relabel_mismatches;
    }
    ++cells;
  }
  o.pass = bad_pairs == 0 && relabel_mismatches == 0;
  o.detail = std::to_string(bad_pairs) + " asymmetric pairs and " +
             std::to_string(relabel_mismatches) +
             " relabelling mismatches over " + std::to_string(cells) +
             " cells (want 0 and 0)";
  return o;
}

// Criterion 3: the left-anchored construction reproduces the reference
// asymmetry proportions at n = N/2, within 15 percentage points and in any
// case above one half.
Outcome criterion_reference_asymmetry() {
  Outcome o;
  struct Target {
    long N;
    double want;
  };
  const std::vector<Target> targets = {{200, 0.802}, {400, 0.761}};
  std::string parts;
  for (const auto& tgt : targets) {
    const Design d{tgt.N, tgt.N / 2, 0.05};
    const auto a = hgci::asymmetry_audit(hgci::lco_table(d));
    const double p = a.asymmetry_proportion;
    const bool ok = std::fabs(p - tgt.want) <= 0.15 && p > 0.5;
    if (!ok) o.pass = false;
    if (!parts.empty()) parts += "; ";
    parts += fmt("%.1f", 100.0 * p) + "% at N=" + std::to_string(tgt.N) +
             " (want " + fmt("%.1f", 100.0 * tgt.want) + "% +/- 15.0, > 50)";
  }
  o.detail = parts;
  return o;
}

// Criterion 4: construction speed.  The symmetric table must be fast in
// absolute terms, and the left-anchored construction at least ten times
// slower at the half-population design.
Outcome criterion_timing() {
  Outcome o;
  const Design d200{200, 100, 0.05};
  const double t_sym = time_build(Method::symmetric_opt, d200, 5);
  const double t_lco = time_build(Method::lco_style, d200, 5);
  const double t_sym_1000 =
      time_build(Method::symmetric_opt, Design{1000, 500, 0.05}, 5);
  const double ratio = t_lco / t_sym;
  const bool sym_fast = t_sym < 1.0;
  const bool sym_1000_fast = t_sym_1000 < 10.0;
  const bool ratio_ok = ratio >= 10.0;
  o.pass = sym_fast && sym_1000_fast && ratio_ok;
  o.detail = "symmetric " + fmt("%.4f", t_sym) +
             "s at N=200 (limit 1s), " + fmt("%.4f", t_sym_1000) +
             "s at N=1000 (limit 10s), left-anchored/symmetric ratio " +
             fmt("%.2f", ratio) + " (want >= 10)";
  return o;
}

// Criterion 5: on every design the exhaustive search can certify, the
// greedy symmetric table is exactly feasible in rational arithmetic and
// its total size lands in [optimum, optimum + (n + 1)]; at the five
// percent level it is within one point per observation.
Outcome criterion_optimality() {
  Outcome o;
  int cells = 0;
  long worst_excess_05 = 0;
  long worst_excess_20 = 0;
  long long worst_total_gap = 0;
  bool coverage_ok = true;
  bool totals_ok = true;
  for (long N = 1; N <= 12; ++N) {
    for (long n = 0; n <= N; ++n) {
      for (double alpha : {0.05, 0.2}) {
        const Design d{N, n, alpha};
        const auto best = hgci::exhaustive_optimal_symmetric(d);
        const auto greedy = hgci::symmetric_table(d);
        const ExactFraction level =
            1 - ExactFraction(1, alpha == 0.05 ? 20 : 5);
        for (long M = 0; M <= N; ++M) {
          if (hgci::exact_table_coverage(greedy, M) < level)
            coverage_ok = false;
        }
        const auto c = hgci::compare_to_oracle(greedy, d);
        if (c.table_total < c.optimal_total ||
            c.table_total > c.optimal_total + (n + 1))
          totals_ok = false;
        worst_total_gap =
            std::max(worst_total_gap, c.table_total - c.optimal_total);
        if (alpha == 0.05)
          worst_excess_05 = std::max(worst_excess_05, c.max_excess);
        else
          worst_excess_20 = std::max(worst_excess_20, c.max_excess);
        ++cells;
      }
    }
  }
  o.pass = coverage_ok && totals_ok && worst_excess_05 <= 1;
  o.detail = std::string("exact coverage ") +
             (coverage_ok ? "holds" : "FAILS") + " with zero slack, total" +
             " within [opt, opt+n+1] " + (totals_ok ? "holds" : "FAILS") +
             " (max gap " + std::to_string(worst_total_gap) +
             "), per-observation excess " + std::to_string(worst_excess_05) +
             " at alpha=0.05 (limit 1; " + std::to_string(worst_excess_20) +
             " at alpha=0.2, tie-shape only) over " + std::to_string(cells) +
             " cells";
  return o;
}

// Criterion 6: structural soundness of every published table -- no empty
// sets, no gaps, anchored extremes, and monotone interval endpoints for
// the interval-valued constructions.
Outcome criterion_structure() {
  Outcome o;
  int cells = 0;
  long defects = 0;
  for (const Design& d : coverage_grid()) {
    for (Method m : kAllMethods) {
      const auto t = hgci::make_table(m, d);
      if (!hgci::detect_gaps(t.sets).empty()) ++defects;
      for (const auto& s : t.sets)
        if (s.empty()) ++defects;
      if (!t.sets.front().contains(0)) ++defects;
      if (!t.sets.back().contains(d.N)) ++defects;
      if (m != Method::lco_style) {
        long lo = 0;
        long hi = 0;
        for (std::size_t i = 0; i < t.sets.size(); ++i) {
          if (!t.sets[i].is_interval) ++defects;
          if (i > 0 && (t.sets[i].lo < lo || t.sets[i].hi < hi)) ++defects;
          lo = t.sets[i].lo;
          hi = t.sets[i].hi;
        }
      }
      ++cells;
    }
  }
  o.pass = defects == 0;
  o.detail = std::to_string(defects) + " structural defects over " +
             std::to_string(cells) + " tables (want 0)";
  return o;
}

// Criterion 7: the floating-point distribution layer agrees with exact
// rational arithmetic to 1e-12 relative error, and pmf rows stay
// normalised to 1e-12 up to N = 10000.
Outcome criterion_numerics() {
  Outcome o;
  double worst_rel = 0.0;
  for (long N = 1; N <= 30; ++N) {
    for (long n = 0; n <= N; ++n) {
      const Design d{N, n, 0.05};
      for (long M = 0; M <= N; ++M) {
        ExactFraction run = 0;
        for (long x = 0; x <= n; ++x) {
          const ExactFraction e = hgci::exact_pmf(d, M, x);
          run += e;
          const double p = hgci::hg_pmf(d, M, x);
          const double c = hgci::hg_cdf(d, M, x);
          if (e == 0) {
            if (p != 0.0) o.pass = false;
          } else {
            const double want = e.convert_to<double>();
            worst_rel = std::max(worst_rel,
                                 std::fabs(p - want) / std::fabs(want));
          }
          if (run == 0) {
            if (c != 0.0) o.pass = false;
          } else {
            const double cwant = run.convert_to<double>();
            worst_rel =
                std::max(worst_rel, std::fabs(c - cwant) / std::fabs(cwant));
          }
        }
        const auto s = hgci::support(d, M);
        const ExactFraction w =
            hgci::exact_window_coverage(d, M, s.lo + 1, s.hi - 1);
        if (w != 0) {
          const double got =
              hgci::window_coverage(d, M, s.lo + 1, s.hi - 1);
          const double want = w.convert_to<double>();
          worst_rel = std::max(worst_rel,
                               std::fabs(got - want) / std::fabs(want));
        }
      }
    }
  }

  double worst_norm = 0.0;
  for (long N : {100L, 1000L, 10000L}) {
    const Design d{N, N / 2, 0.05};
    for (long M : {0L, N / 7, N / 3, N / 2, N - 1, N}) {
      long double s = 0.0L;
      for (long x = 0; x <= d.n; ++x) s += hgci::hg_pmf(d, M, x);
      worst_norm =
          std::max(worst_norm, std::fabs(static_cast<double>(s) - 1.0));
    }
  }

  if (worst_rel > 1e-12 || worst_norm > 1e-12) o.pass = false;
  o.detail = "worst exact-agreement error " + fmt("%.3e", worst_rel) +
             " (all N <= 30), worst normalisation error " +
             fmt("%.3e", worst_norm) + " (N <= 10000), limit 1e-12";
  return o;
}

}  // namespace

int main() {
  struct Item {
    const char* label;
    Outcome (*check)();
  };
  const std::vector<Item> items = {
      {"coverage floor", criterion_coverage},
      {"exact mirror symmetry", criterion_symmetry},
      {"reference asymmetry levels", criterion_reference_asymmetry},
      {"construction timing", criterion_timing},
      {"small-design optimality", criterion_optimality},
      {"table structure", criterion_structure},
      {"numeric agreement", criterion_numerics},
  };

  int failures = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double t0 = now_seconds();
    const Outcome o = items[i].check();
    const double dt = now_seconds() - t0;
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %zu (%s): %s [%.2fs]\n",
                o.pass ? "PASS" : "FAIL", i + 1, items[i].label,
                o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(items.size()) - failures, items.size());
  return failures;
}
