// Exact model counting by COPY-tensor branching: every assignment of the
// COPY-tensors leaves a forest whose value is a product of per-clause
// contractions, and #f is the sum over all 2^c assignments.
#pragma once

#include "tnsharp/cnf.hpp"
#include "tnsharp/network.hpp"

#include <chrono>

namespace tnsharp {

struct CountOptions {
  enum class Path : std::uint8_t {
    // Closed-form value of each per-clause component of the residual forest.
    Fast,
    // Builds and contracts every residual forest tensor by tensor.
    Contract,
  };

  std::size_t max_branch_vars = 30;
  bool force = false;
  unsigned threads = 1;  // 0 = hardware concurrency
  Path path = Path::Fast;
};

struct CountResult {
  BigInt model_count = 0;
  bool satisfiable = false;
  NetworkStats stats;
  BigInt branches_evaluated = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// #f by summing the 2^c residual forests in lexicographic COPY order
/// (variable ascending, 0 before 1). Throws BranchGuardExceeded when
/// c > max_branch_vars and `force` is not set.
CountResult count_models(const Formula& f, const CountOptions& options = {});

/// model_count > 0, stopping at the first branch with a nonzero value.
bool is_satisfiable(const Formula& f, const CountOptions& options = {});

struct RofCheck {
  bool satisfiable = false;
  double normalized_value = 0.0;  // <1|zeta^dagger zeta|1>
};

/// Satisfiability of a read-once expression by contracting its normalized
/// network, which must collapse to exactly 1. Throws InvalidArgument if `e`
/// is not read-once and InvariantViolation if the contraction is not 1.
RofCheck rof_satisfiable(const BoolExpr& e);

/// Reporting surrogate for the branching cost: (g + c*d) * 2^c.
BigInt predicted_cost(const NetworkStats& stats);

}  // namespace tnsharp
