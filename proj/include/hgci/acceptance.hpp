// Acceptance windows: minimal feasible span search, coverage-ranked
// candidate enumeration with span escalation, and reflection-symmetric
// window pairs.
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hgci/errors.hpp"
#include "hgci/hg_dist.hpp"

namespace hgci {

/// Accepted count window [a, b] for one parameter value M.
struct AcceptanceWindow {
  long M = 0;
  long a = 0;
  long b = 0;
  double coverage = 0.0;

  long span() const { return b - a; }

  friend bool operator==(const AcceptanceWindow&, const AcceptanceWindow&) =
      default;
};

/// Feasible windows of one span for one M, ranked best-first: coverage
/// descending, ties broken toward the smaller lower endpoint.
struct CandidateList {
  long M = 0;
  long span = 0;
  std::vector<AcceptanceWindow> windows;
};

namespace detail {

// pmf row prefix sums for one M; window coverage in O(1).  Prefixes are
// nondecreasing by construction, so a superset window can never score below
// a subset even at the last ulp.
class WindowScan {
 public:
  WindowScan(const HgKernel& k, long M)
      : M_(M), n_(k.design().n),
        prefix_(static_cast<std::size_t>(k.design().n) + 2, 0.0L) {
    for (long x = 0; x <= n_; ++x)
      prefix_[static_cast<std::size_t>(x) + 1] =
          prefix_[static_cast<std::size_t>(x)] +
          static_cast<long double>(k.pmf(M, x));
  }

  long M() const { return M_; }

  double coverage(long a, long b) const {
    a = std::max(a, 0L);
    b = std::min(b, n_);
    if (a > b) return 0.0;
    return static_cast<double>(prefix_[static_cast<std::size_t>(b) + 1] -
                               prefix_[static_cast<std::size_t>(a)]);
  }

 private:
  long M_;
  long n_;
  std::vector<long double> prefix_;
};

inline long minimal_span_scan(const WindowScan& scan, long n, double alpha) {
  for (long s = 0; s <= n; ++s)
    for (long a = 0; a + s <= n; ++a)
      if (feasible_coverage(scan.coverage(a, a + s), alpha)) return s;
  // [0, n] always covers the whole support, so the loop cannot fall through
  // for any alpha inside (0, 1).
  return n;
}

inline std::vector<AcceptanceWindow> ranked_windows_at_span(
    const WindowScan& scan, long M, long n, double alpha, long s) {
  std::vector<AcceptanceWindow> out;
  for (long a = 0; a + s <= n; ++a) {
    double cov = scan.coverage(a, a + s);
    if (feasible_coverage(cov, alpha)) out.push_back({M, a, a + s, cov});
  }
  std::sort(out.begin(), out.end(),
            [](const AcceptanceWindow& u, const AcceptanceWindow& v) {
              if (u.coverage != v.coverage) return u.coverage > v.coverage;
              return u.a < v.a;
            });
  return out;
}

// Windows of rank `rank` in the span-escalating order: all feasible windows
// at the minimal span first (best coverage first), then span+1, and so on.
inline AcceptanceWindow select_window_scan(const WindowScan& scan, long M,
                                           long n, double alpha, long rank) {
  long remaining = rank;
  long s = minimal_span_scan(scan, n, alpha);
  for (; s <= n; ++s) {
    std::vector<AcceptanceWindow> ranked =
        ranked_windows_at_span(scan, M, n, alpha, s);
    if (remaining < static_cast<long>(ranked.size()))
      return ranked[static_cast<std::size_t>(remaining)];
    remaining -= static_cast<long>(ranked.size());
  }
  throw construction_error("acceptance: replacement rank exhausted at M = " +
                           std::to_string(M));
}

}  // namespace detail

/// Smallest window width b - a whose best window is feasible at M.
inline long minimal_span(const HgKernel& k, long M) {
  if (M < 0 || M > k.design().N)
    throw std::out_of_range("acceptance: parameter M outside 0..N");
  detail::WindowScan scan(k, M);
  return detail::minimal_span_scan(scan, k.design().n, k.design().alpha);
}

inline long minimal_span(const Design& d, long M) {
  return minimal_span(HgKernel(d), M);
}

/// All feasible windows at the minimal feasible span, ranked best-first.
inline CandidateList enumerate_minimal_span_windows(const HgKernel& k,
                                                    long M) {
  if (M < 0 || M > k.design().N)
    throw std::out_of_range("acceptance: parameter M outside 0..N");
  const Design& d = k.design();
  detail::WindowScan scan(k, M);
  long s = detail::minimal_span_scan(scan, d.n, d.alpha);
  return {M, s, detail::ranked_windows_at_span(scan, M, d.n, d.alpha, s)};
}

inline CandidateList enumerate_minimal_span_windows(const Design& d, long M) {
  return enumerate_minimal_span_windows(HgKernel(d), M);
}

/// Window of the given rank for M.  Rank 0 is the best window at minimal
/// span; once a span's feasible windows are exhausted the span escalates by
/// one and ranking continues, so every rank up to the escalation limit is
/// well defined.
inline AcceptanceWindow select_window(const HgKernel& k, long M, long rank) {
  if (M < 0 || M > k.design().N)
    throw std::out_of_range("acceptance: parameter M outside 0..N");
  if (rank < 0) throw std::invalid_argument("acceptance: rank must be >= 0");
  detail::WindowScan scan(k, M);
  return detail::select_window_scan(scan, M, k.design().n, k.design().alpha,
                                    rank);
}

inline AcceptanceWindow select_window(const Design& d, long M, long rank) {
  return select_window(HgKernel(d), M, rank);
}

/// Windows for M and its mirror N - M, constrained to be reflections of one
/// another: a' = n - b, b' = n - a, with identical coverage.  Requires
/// 2M <= N.  When 2M == N the window itself must be self-symmetric
/// (b = n - a); if no self-symmetric window is feasible at the minimal span,
/// the span escalates until one is.
inline std::pair<AcceptanceWindow, AcceptanceWindow> symmetric_window_pair(
    const HgKernel& k, long M, long rank = 0) {
  const Design& d = k.design();
  if (M < 0 || M > d.N)
    throw std::out_of_range("acceptance: parameter M outside 0..N");
  if (2 * M > d.N)
    throw std::invalid_argument(
        "acceptance: symmetric pair anchor needs 2M <= N");
  if (rank < 0) throw std::invalid_argument("acceptance: rank must be >= 0");
  detail::WindowScan scan(k, M);
  if (2 * M == d.N) {
    long remaining = rank;
    for (long s = detail::minimal_span_scan(scan, d.n, d.alpha); s <= d.n;
         ++s) {
      if ((d.n - s) % 2 != 0) continue;  // b = n - a forces this parity
      long a = (d.n - s) / 2;
      double cov = scan.coverage(a, a + s);
      if (!feasible_coverage(cov, d.alpha)) continue;
      if (remaining == 0) {
        AcceptanceWindow w{M, a, a + s, cov};
        return {w, w};
      }
      --remaining;
    }
    throw construction_error(
        "acceptance: self-symmetric rank exhausted at M = " +
        std::to_string(M));
  }
  AcceptanceWindow w =
      detail::select_window_scan(scan, M, d.n, d.alpha, rank);
  AcceptanceWindow mirror{d.N - M, d.n - w.b, d.n - w.a, w.coverage};
  return {w, mirror};
}

inline std::pair<AcceptanceWindow, AcceptanceWindow> symmetric_window_pair(
    const Design& d, long M, long rank = 0) {
  return symmetric_window_pair(HgKernel(d), M, rank);
}

}  // namespace hgci
