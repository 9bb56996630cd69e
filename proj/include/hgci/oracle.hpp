// Exact-arithmetic verification oracle.
//
// Rational pmf/coverage over big integers, plus an exhaustive search for
// the size-optimal reflection-symmetric endpoint-monotone table at tiny N.
// Everything here is independent of the floating kernel so it can stand as
// a reference against it: feasibility is decided with exact fractions and
// zero slack.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hgci/errors.hpp"
#include "hgci/hg_dist.hpp"
#include "hgci/invert.hpp"
#include "hgci/procedures.hpp"

namespace hgci {

using BigInt = boost::multiprecision::cpp_int;
using ExactFraction = boost::multiprecision::cpp_rational;

/// Largest N accepted by the exact coverage routines.
inline constexpr long kOracleExactBound = 200;
/// Largest N accepted by the exhaustive optimal search.
inline constexpr long kOracleSearchBound = 12;

/// C(m, k) as an exact integer; 0 outside 0..m.
inline BigInt exact_choose(long m, long k) {
  if (m < 0) throw std::invalid_argument("exact_choose: m must be >= 0");
  if (k < 0 || k > m) return 0;
  k = std::min(k, m - k);
  BigInt c = 1;
  // Multiply before dividing: every prefix is itself a binomial
  // coefficient, so the division is always exact.
  for (long i = 1; i <= k; ++i) {
    c *= m - k + i;
    c /= i;
  }
  return c;
}

/// P(X = x | M) as an exact fraction.
inline ExactFraction exact_pmf(const Design& d, long M, long x) {
  validate(d);
  if (M < 0 || M > d.N)
    throw std::out_of_range("oracle: parameter M outside 0..N");
  if (x < 0 || x > d.n) return 0;
  return ExactFraction(exact_choose(M, x) * exact_choose(d.N - M, d.n - x),
                       exact_choose(d.N, d.n));
}

/// P(a <= X <= b | M) as an exact fraction.  Bounded to N <= 200 to keep
/// the arithmetic practical.
inline ExactFraction exact_window_coverage(const Design& d, long M, long a,
                                           long b) {
  validate(d);
  if (d.N > kOracleExactBound)
    throw oracle_bound_error("oracle: exact coverage limited to N <= " +
                             std::to_string(kOracleExactBound));
  if (M < 0 || M > d.N)
    throw std::out_of_range("oracle: parameter M outside 0..N");
  if (a > b) return 0;
  Support s = support(d, M);
  long lo = std::max(a, s.lo);
  long hi = std::min(b, s.hi);
  BigInt numer = 0;
  for (long x = lo; x <= hi; ++x)
    numer += exact_choose(M, x) * exact_choose(d.N - M, d.n - x);
  return ExactFraction(numer, exact_choose(d.N, d.n));
}

/// Realized coverage P(M in C(X) | M) of a finished table, exactly.
inline ExactFraction exact_table_coverage(const ProcedureTable& t, long M) {
  const Design& d = t.design;
  validate(d);
  if (d.N > kOracleExactBound)
    throw oracle_bound_error("oracle: exact coverage limited to N <= " +
                             std::to_string(kOracleExactBound));
  if (M < 0 || M > d.N)
    throw std::out_of_range("oracle: parameter M outside 0..N");
  BigInt numer = 0;
  for (long x = 0; x <= d.n; ++x)
    if (t.sets[static_cast<std::size_t>(x)].contains(M))
      numer += exact_choose(M, x) * exact_choose(d.N - M, d.n - x);
  return ExactFraction(numer, exact_choose(d.N, d.n));
}

/// Result of the exhaustive tiny-N search: the minimal total confidence-set
/// size over all reflection-symmetric endpoint-monotone tables whose every
/// window is exactly feasible, plus the lexicographically smallest witness.
struct OptimalSymmetric {
  long long total_size = 0;
  ProcedureTable witness;
};

namespace detail {

struct OracleSearch {
  Design d;
  long n = 0;
  long h = 0;  // N / 2, the last free parameter
  ExactFraction threshold;
  // feasible[M] lists exactly-feasible windows as (a, b), a ascending then
  // b ascending -- the DFS visits them in this order, which makes the first
  // optimum found the lexicographically smallest witness.
  std::vector<std::vector<std::pair<long, long>>> feasible;
  std::vector<long long> suffix_lb;  // lower bound on cost of levels >= M
  std::vector<std::pair<long, long>> chosen;
  std::vector<std::pair<long, long>> best_choice;
  long long best_cost = std::numeric_limits<long long>::max();

  long long weight(long M) const {
    return (d.N % 2 == 0 && M == h) ? 1 : 2;
  }

  bool admissible(long M, long a, long b) const {
    if (d.N % 2 == 0 && M == h && a + b != n) return false;
    if (d.N % 2 != 0 && M == h && a + b > n) return false;
    return true;
  }

  void dfs(long M, long a_min, long b_min, long long cost) {
    if (cost + suffix_lb[static_cast<std::size_t>(M)] >= best_cost) return;
    if (M > h) {
      best_cost = cost;
      best_choice = chosen;
      return;
    }
    for (const auto& [a, b] : feasible[static_cast<std::size_t>(M)]) {
      if (a < a_min || b < b_min || !admissible(M, a, b)) continue;
      chosen.push_back({a, b});
      dfs(M + 1, a, b, cost + weight(M) * (b - a + 1));
      chosen.pop_back();
    }
  }
};

}  // namespace detail

/// Exhaustively minimizes total confidence-set size over all
/// reflection-symmetric endpoint-monotone tables with exactly-feasible
/// windows.  Bounded to N <= 12.  Deterministic: the witness is the
/// lexicographically smallest optimal endpoint sequence.
inline OptimalSymmetric exhaustive_optimal_symmetric(const Design& d) {
  validate(d);
  if (d.N > kOracleSearchBound)
    throw oracle_bound_error("oracle: exhaustive search limited to N <= " +
                             std::to_string(kOracleSearchBound));

  detail::OracleSearch search;
  search.d = d;
  search.n = d.n;
  search.h = d.N / 2;
  search.threshold = ExactFraction(1) - ExactFraction(d.alpha);

  search.feasible.resize(static_cast<std::size_t>(search.h) + 1);
  search.suffix_lb.assign(static_cast<std::size_t>(search.h) + 2, 0);
  for (long M = 0; M <= search.h; ++M) {
    long min_len = d.n + 1;
    for (long a = 0; a <= d.n; ++a)
      for (long b = a; b <= d.n; ++b)
        if (exact_window_coverage(d, M, a, b) >= search.threshold) {
          search.feasible[static_cast<std::size_t>(M)].push_back({a, b});
          min_len = std::min(min_len, b - a + 1);
        }
    if (search.feasible[static_cast<std::size_t>(M)].empty())
      throw construction_error("oracle: no feasible window at M = " +
                               std::to_string(M));
    search.suffix_lb[static_cast<std::size_t>(M)] =
        search.weight(M) * min_len;
  }
  for (long M = search.h; M >= 0; --M)
    search.suffix_lb[static_cast<std::size_t>(M)] +=
        search.suffix_lb[static_cast<std::size_t>(M) + 1];

  search.dfs(0, 0, 0, 0);
  if (search.best_cost == std::numeric_limits<long long>::max())
    throw construction_error("oracle: no symmetric monotone table exists");

  // Materialize the witness as a full table.
  HgKernel k(d);
  AcceptanceCurve curve{d, {}};
  curve.windows.resize(static_cast<std::size_t>(d.N) + 1);
  for (long M = 0; M <= search.h; ++M) {
    auto [a, b] = search.best_choice[static_cast<std::size_t>(M)];
    curve.windows[static_cast<std::size_t>(M)] = {M, a, b,
                                                  k.window_coverage(M, a, b)};
    long Mr = d.N - M;
    curve.windows[static_cast<std::size_t>(Mr)] = {
        Mr, d.n - b, d.n - a, k.window_coverage(Mr, d.n - b, d.n - a)};
  }
  std::vector<ConfidenceSet> sets = invert(curve);
  return {search.best_cost,
          {Method::symmetric_opt, d, std::move(curve), std::move(sets), {}}};
}

/// Per-x cardinality excess of a table over the exhaustive optimum.
struct OracleComparison {
  std::vector<long> per_x_excess;  // |C_table(x)| - |C_witness(x)|
  long max_excess = 0;
  long long table_total = 0;
  long long optimal_total = 0;
};

inline OracleComparison compare_to_oracle(const ProcedureTable& t,
                                          const Design& d) {
  if (t.design != d)
    throw std::invalid_argument("oracle: table design does not match");
  OptimalSymmetric opt = exhaustive_optimal_symmetric(d);
  OracleComparison cmp;
  cmp.per_x_excess.reserve(static_cast<std::size_t>(d.n) + 1);
  for (long x = 0; x <= d.n; ++x) {
    long excess = t.sets[static_cast<std::size_t>(x)].size() -
                  opt.witness.sets[static_cast<std::size_t>(x)].size();
    cmp.per_x_excess.push_back(excess);
    cmp.max_excess = std::max(cmp.max_excess, excess);
    cmp.table_total += t.sets[static_cast<std::size_t>(x)].size();
    cmp.optimal_total += opt.witness.sets[static_cast<std::size_t>(x)].size();
  }
  return cmp;
}

}  // namespace hgci
