// Confidence-table procedures and audits.
//
// Three constructions over the same design:
//   lco_style     - every parameter takes its highest-coverage minimal-span
//                   window; inversion gaps are repaired by stepping the
//                   responsible parameters to their next-ranked windows
//                   (span escalating once a span is exhausted) until the
//                   table is gap-free.
//   symmetric_opt - reflection-symmetric table: greedy minimal windows on
//                   the lower half, endpoint-monotone repair by minimal
//                   enlargement of the upper endpoint, junction
//                   symmetrization at the middle parameter, then mirroring.
//                   Gap-free by construction.
//   tail_baseline - equal-tail inversion: M enters C(x) while both tail
//                   probabilities stay strictly above alpha / 2.
#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hgci/acceptance.hpp"
#include "hgci/errors.hpp"
#include "hgci/hg_dist.hpp"
#include "hgci/invert.hpp"

namespace hgci {

enum class Method { lco_style, symmetric_opt, tail_baseline };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::lco_style: return "lco_style";
    case Method::symmetric_opt: return "symmetric_opt";
    case Method::tail_baseline: return "tail_baseline";
  }
  throw std::invalid_argument("method: unknown enumerator");
}

inline Method parse_method(const std::string& name) {
  if (name == "lco_style") return Method::lco_style;
  if (name == "symmetric_opt") return Method::symmetric_opt;
  if (name == "tail_baseline") return Method::tail_baseline;
  throw std::invalid_argument("method: unknown name '" + name + "'");
}

/// One gap-repair event: parameter M moved to window rank `rank`.
struct RepairStep {
  long M = 0;
  long rank = 0;

  friend bool operator==(const RepairStep&, const RepairStep&) = default;
};

/// A finished procedure: confidence sets for every observable count, plus
/// the acceptance curve for curve-based methods and the repair history.
struct ProcedureTable {
  Method method = Method::symmetric_opt;
  Design design;
  std::optional<AcceptanceCurve> curve;  // absent for tail_baseline
  std::vector<ConfidenceSet> sets;       // indexed by x = 0..n
  std::vector<RepairStep> repair_log;
};

namespace detail {

inline void check_monotone_endpoints(const AcceptanceCurve& curve,
                                     const char* who) {
  for (std::size_t M = 1; M < curve.windows.size(); ++M) {
    if (curve.windows[M].a < curve.windows[M - 1].a ||
        curve.windows[M].b < curve.windows[M - 1].b)
      throw construction_error(std::string(who) +
                               ": endpoint monotonicity failed at M = " +
                               std::to_string(M));
  }
}

}  // namespace detail

/// Highest-coverage minimal-span table with rank-stepping gap repair.
/// Each round rebuilds the curve at the current ranks, inverts it, and if
/// any confidence set has gaps, advances every causing parameter to its
/// next-ranked window (ascending M within a round).  Throws
/// divergence_error when the total number of replacements exceeds
/// 10 * (N + 1).
inline ProcedureTable lco_table(const Design& d) {
  validate(d);
  HgKernel k(d);
  std::vector<long> ranks(static_cast<std::size_t>(d.N) + 1, 0);
  std::vector<RepairStep> log;
  const long cap = 10 * (d.N + 1);
  long replacements = 0;
  for (;;) {
    AcceptanceCurve curve{d, {}};
    curve.windows.reserve(static_cast<std::size_t>(d.N) + 1);
    for (long M = 0; M <= d.N; ++M)
      curve.windows.push_back(
          select_window(k, M, ranks[static_cast<std::size_t>(M)]));
    std::vector<ConfidenceSet> sets = invert(curve);
    if (detect_gaps(sets).empty())
      return {Method::lco_style, d, std::move(curve), std::move(sets),
              std::move(log)};
    std::vector<long> causers = gap_causers(sets, curve);
    if (causers.empty())
      throw construction_error("lco: gapped sets but no addressable causer");
    for (long M : causers) {
      long rank = ++ranks[static_cast<std::size_t>(M)];
      log.push_back({M, rank});
      if (++replacements > cap)
        throw divergence_error("lco: replacement budget 10 * (N + 1) "
                               "exhausted without closing all gaps");
    }
  }
}

namespace detail {

// Best feasible self-symmetric window (b = n - a) for the middle parameter
// of an even-N design, escalating the span until one exists.
inline AcceptanceWindow best_self_symmetric(const WindowScan& scan, long M,
                                            long n, double alpha) {
  for (long s = minimal_span_scan(scan, n, alpha); s <= n; ++s) {
    if ((n - s) % 2 != 0) continue;
    long a = (n - s) / 2;
    double cov = scan.coverage(a, a + s);
    if (feasible_coverage(cov, alpha)) return {M, a, a + s, cov};
  }
  throw construction_error("symmetric: no feasible self-symmetric window");
}

}  // namespace detail

/// Reflection-symmetric endpoint-monotone table.  Greedy best windows on
/// M = 0..N/2, monotone repair (endpoints clamped up to the predecessor's,
/// then the upper endpoint enlarged until feasible), junction
/// symmetrization in the middle, lower endpoints cascaded back down, and
/// the upper half mirrored from the lower.  The result is gap-free.
inline ProcedureTable symmetric_table(const Design& d) {
  validate(d);
  HgKernel k(d);
  const long n = d.n;
  const long h = d.N / 2;
  std::vector<AcceptanceWindow> w(static_cast<std::size_t>(d.N) + 1);

  for (long M = 0; M <= h; ++M) {
    detail::WindowScan scan(k, M);
    AcceptanceWindow cur =
        (2 * M == d.N)
            ? detail::best_self_symmetric(scan, M, n, d.alpha)
            : detail::select_window_scan(scan, M, n, d.alpha, 0);
    if (M > 0) {
      const AcceptanceWindow& prev = w[static_cast<std::size_t>(M - 1)];
      long a = std::max(cur.a, prev.a);
      long b = std::max(cur.b, prev.b);
      double cov = scan.coverage(a, b);
      while (b < n && !feasible_coverage(cov, d.alpha)) {
        ++b;
        cov = scan.coverage(a, b);
      }
      cur = {M, a, b, cov};
    }
    w[static_cast<std::size_t>(M)] = cur;
  }

  // Junction: the middle window must not cross its own reflection.  For
  // even N it is forced self-symmetric (monotone repair may have pushed b
  // past n - a); for odd N it must satisfy a + b <= n so the mirrored half
  // continues monotonically.  Both fixes only enlarge the window, so
  // feasibility is preserved.
  AcceptanceWindow& mid = w[static_cast<std::size_t>(h)];
  if (d.N % 2 == 0) {
    long a = std::min(mid.a, n - mid.b);
    if (a != mid.a || n - a != mid.b) {
      detail::WindowScan scan(k, h);
      mid = {h, a, n - a, scan.coverage(a, n - a)};
    }
  } else if (mid.a + mid.b > n) {
    long a = n - mid.b;
    detail::WindowScan scan(k, h);
    mid = {h, a, mid.b, scan.coverage(a, mid.b)};
  }

  // The junction fix can lower the middle lower endpoint below its
  // predecessors'; cascade the reduction down (again enlargement-only).
  for (long M = h; M-- > 0;) {
    AcceptanceWindow& cur = w[static_cast<std::size_t>(M)];
    long cap = w[static_cast<std::size_t>(M + 1)].a;
    if (cur.a > cap) {
      detail::WindowScan scan(k, M);
      cur = {M, cap, cur.b, scan.coverage(cap, cur.b)};
    }
  }

  for (long M = h + 1; M <= d.N; ++M) {
    const AcceptanceWindow& base = w[static_cast<std::size_t>(d.N - M)];
    w[static_cast<std::size_t>(M)] = {M, n - base.b, n - base.a,
                                      base.coverage};
  }

  AcceptanceCurve curve{d, std::move(w)};
  detail::check_monotone_endpoints(curve, "symmetric");
  std::vector<ConfidenceSet> sets = invert(curve);
  if (!detect_gaps(sets).empty())
    throw construction_error("symmetric: monotone curve produced a gap");
  return {Method::symmetric_opt, d, std::move(curve), std::move(sets), {}};
}

/// Equal-tail table: C(x) = { M : P(X >= x | M) > alpha/2 and
/// P(X <= x | M) > alpha/2 }.  Both boundaries are strict, and both are
/// nondecreasing in x, so the sweep uses two forward pointers.  The lower
/// tail is evaluated through the reflection identity
/// P(X <= x | M) = P(X >= n - x | N - M), which makes both boundary
/// predicates share one code path and the table mirror-symmetric bit for
/// bit, not merely up to summation noise.
inline ProcedureTable tail_table(const Design& d) {
  validate(d);
  HgKernel k(d);
  const double half = d.alpha / 2.0;
  std::vector<ConfidenceSet> sets;
  sets.reserve(static_cast<std::size_t>(d.n) + 1);
  long ml = 0;
  long mu = 0;
  for (long x = 0; x <= d.n; ++x) {
    while (ml <= d.N && !(k.window_coverage(ml, x, d.n) > half)) ++ml;
    while (mu < d.N &&
           k.window_coverage(d.N - (mu + 1), d.n - x, d.n) > half)
      ++mu;
    if (ml > mu)
      throw construction_error("tail: empty confidence set at x = " +
                               std::to_string(x));
    std::vector<long> members(static_cast<std::size_t>(mu - ml) + 1);
    std::iota(members.begin(), members.end(), ml);
    sets.push_back(make_confidence_set(x, std::move(members)));
  }
  return {Method::tail_baseline, d, std::nullopt, std::move(sets), {}};
}

inline ProcedureTable make_table(Method m, const Design& d) {
  switch (m) {
    case Method::lco_style: return lco_table(d);
    case Method::symmetric_opt: return symmetric_table(d);
    case Method::tail_baseline: return tail_table(d);
  }
  throw std::invalid_argument("method: unknown enumerator");
}

/// Audit results.  Each audit fills its own fields; full_audit fills all.
struct AuditReport {
  std::vector<double> coverage;  // realized coverage per M
  double min_coverage = 1.0;
  long argmin_M = 0;  // smallest M attaining the minimum
  long long total_size = 0;
  double mean_length = 0.0;  // average of (hi - lo) over x
  long asymmetric_count = 0;
  double asymmetry_proportion = 0.0;
};

/// Realized coverage P(M in C(X) | M) for every parameter value, with the
/// minimum and where it is attained.
inline AuditReport coverage_audit(const ProcedureTable& t) {
  HgKernel k(t.design);
  AuditReport audit;
  audit.coverage.resize(static_cast<std::size_t>(t.design.N) + 1);
  for (long M = 0; M <= t.design.N; ++M) {
    long double sum = 0.0L;
    for (long x = 0; x <= t.design.n; ++x)
      if (t.sets[static_cast<std::size_t>(x)].contains(M)) sum += k.pmf(M, x);
    double cov = std::min(1.0, static_cast<double>(sum));
    audit.coverage[static_cast<std::size_t>(M)] = cov;
    if (M == 0 || cov < audit.min_coverage) {
      audit.min_coverage = cov;
      audit.argmin_M = M;
    }
  }
  return audit;
}

/// Total cardinality across all x plus mean envelope length (hi - lo).
inline AuditReport size_audit(const ProcedureTable& t) {
  AuditReport audit;
  long long envelope = 0;
  for (const ConfidenceSet& s : t.sets) {
    audit.total_size += s.size();
    if (!s.empty()) envelope += s.hi - s.lo;
  }
  audit.mean_length =
      static_cast<double>(envelope) / static_cast<double>(t.sets.size());
  return audit;
}

/// Counts observed counts x whose set is not the mirror image of the set
/// at n - x.  Each endpoint of a broken pair counts separately.
inline AuditReport asymmetry_audit(const ProcedureTable& t) {
  AuditReport audit;
  for (long x = 0; x <= t.design.n; ++x) {
    const ConfidenceSet& here = t.sets[static_cast<std::size_t>(x)];
    const ConfidenceSet& mirror =
        t.sets[static_cast<std::size_t>(t.design.n - x)];
    if (!is_symmetric_pair(here, mirror, t.design)) ++audit.asymmetric_count;
  }
  audit.asymmetry_proportion = static_cast<double>(audit.asymmetric_count) /
                               static_cast<double>(t.design.n + 1);
  return audit;
}

inline AuditReport full_audit(const ProcedureTable& t) {
  AuditReport audit = coverage_audit(t);
  AuditReport size = size_audit(t);
  AuditReport sym = asymmetry_audit(t);
  audit.total_size = size.total_size;
  audit.mean_length = size.mean_length;
  audit.asymmetric_count = sym.asymmetric_count;
  audit.asymmetry_proportion = sym.asymmetry_proportion;
  return audit;
}

}  // namespace hgci
