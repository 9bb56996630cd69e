// Acceptance-curve inversion: confidence sets per observed count, gap
// detection and attribution, and reflection/symmetry checks.
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hgci/acceptance.hpp"
#include "hgci/errors.hpp"
#include "hgci/hg_dist.hpp"

namespace hgci {

/// One acceptance window per parameter value M = 0..N.
struct AcceptanceCurve {
  Design design;
  std::vector<AcceptanceWindow> windows;
};

/// Confidence set for one observed count x: all M whose windows accept x.
struct ConfidenceSet {
  long x = 0;
  std::vector<long> members;  // strictly increasing
  bool is_interval = true;
  long lo = -1;  // -1 when empty
  long hi = -1;

  bool empty() const { return members.empty(); }
  long size() const { return static_cast<long>(members.size()); }

  bool contains(long M) const {
    if (members.empty()) return false;
    if (is_interval) return lo <= M && M <= hi;
    return std::binary_search(members.begin(), members.end(), M);
  }

  friend bool operator==(const ConfidenceSet&, const ConfidenceSet&) = default;
};

/// Builds a set from strictly increasing members, deriving the interval
/// flag and envelope.
inline ConfidenceSet make_confidence_set(long x, std::vector<long> members) {
  ConfidenceSet s;
  s.x = x;
  s.members = std::move(members);
  if (s.members.empty()) {
    s.is_interval = true;
    s.lo = s.hi = -1;
  } else {
    s.lo = s.members.front();
    s.hi = s.members.back();
    s.is_interval = (s.hi - s.lo + 1) == s.size();
  }
  return s;
}

namespace detail {

inline void check_curve(const AcceptanceCurve& curve) {
  validate(curve.design);
  long N = curve.design.N;
  long n = curve.design.n;
  if (static_cast<long>(curve.windows.size()) != N + 1)
    throw construction_error("invert: curve must hold exactly N + 1 windows");
  for (long M = 0; M <= N; ++M) {
    const AcceptanceWindow& w = curve.windows[static_cast<std::size_t>(M)];
    if (w.M != M)
      throw construction_error("invert: window at slot " + std::to_string(M) +
                               " is labeled M = " + std::to_string(w.M));
    if (w.a < 0 || w.a > w.b || w.b > n)
      throw construction_error("invert: window at M = " + std::to_string(M) +
                               " violates 0 <= a <= b <= n");
  }
}

}  // namespace detail

/// Inverts an acceptance curve into one confidence set per x = 0..n.
/// Throws construction_error if any set would be empty: an empty set means
/// the curve fails to assign x to any parameter and must be repaired, never
/// silently accepted.
inline std::vector<ConfidenceSet> invert(const AcceptanceCurve& curve) {
  detail::check_curve(curve);
  long N = curve.design.N;
  long n = curve.design.n;
  std::vector<std::vector<long>> members(static_cast<std::size_t>(n) + 1);
  for (long M = 0; M <= N; ++M) {
    const AcceptanceWindow& w = curve.windows[static_cast<std::size_t>(M)];
    for (long x = w.a; x <= w.b; ++x)
      members[static_cast<std::size_t>(x)].push_back(M);
  }
  std::vector<ConfidenceSet> sets;
  sets.reserve(static_cast<std::size_t>(n) + 1);
  for (long x = 0; x <= n; ++x) {
    if (members[static_cast<std::size_t>(x)].empty())
      throw construction_error("invert: confidence set empty at x = " +
                               std::to_string(x));
    sets.push_back(
        make_confidence_set(x, std::move(members[static_cast<std::size_t>(x)])));
  }
  return sets;
}

/// Observed counts whose confidence sets are not contiguous.
inline std::vector<long> detect_gaps(const std::vector<ConfidenceSet>& sets) {
  std::vector<long> gapped;
  for (const ConfidenceSet& s : sets)
    if (!s.is_interval) gapped.push_back(s.x);
  return gapped;
}

/// Parameters responsible for gaps: every M strictly inside some gapped
/// set's envelope that is missing from the set because its window excludes
/// that x.  Sorted ascending, duplicates removed.
inline std::vector<long> gap_causers(const std::vector<ConfidenceSet>& sets,
                                     const AcceptanceCurve& curve) {
  detail::check_curve(curve);
  std::vector<long> causers;
  for (const ConfidenceSet& s : sets) {
    if (s.is_interval) continue;
    for (long M = s.lo + 1; M < s.hi; ++M) {
      if (s.contains(M)) continue;
      const AcceptanceWindow& w = curve.windows[static_cast<std::size_t>(M)];
      if (s.x < w.a || s.x > w.b) causers.push_back(M);
    }
  }
  std::sort(causers.begin(), causers.end());
  causers.erase(std::unique(causers.begin(), causers.end()), causers.end());
  return causers;
}

/// Image of a confidence set under the relabeling M -> N - M, x -> n - x.
inline ConfidenceSet reflect_set(const ConfidenceSet& s, const Design& d) {
  std::vector<long> members;
  members.reserve(s.members.size());
  for (auto it = s.members.rbegin(); it != s.members.rend(); ++it)
    members.push_back(d.N - *it);
  return make_confidence_set(d.n - s.x, std::move(members));
}

/// True when the set at x and the set at n - x are exact mirror images.
/// The two sets must actually sit at mirrored counts.
inline bool is_symmetric_pair(const ConfidenceSet& at_x,
                              const ConfidenceSet& at_mirror,
                              const Design& d) {
  if (at_x.x + at_mirror.x != d.n)
    throw std::invalid_argument(
        "symmetry: sets are not at mirrored counts x and n - x");
  return reflect_set(at_mirror, d).members == at_x.members;
}

}  // namespace hgci
