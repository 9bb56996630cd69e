// Exception taxonomy shared across the library.
#pragma once

#include <stdexcept>

namespace hgci {

/// Invalid (N, n, alpha) triple.
struct invalid_design : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A procedure could not be completed: empty confidence set, repair rank
/// exhaustion, or a structurally broken acceptance curve.
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gap resolution exceeded its replacement budget.
struct divergence_error : construction_error {
  using construction_error::construction_error;
};

/// Exact-arithmetic request beyond the oracle's practicality bound.
struct oracle_bound_error : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace hgci
