// Brute-force ground truth: evaluates every assignment directly. Kept
// deliberately simple and independent of the tensor-network code paths.
#pragma once

#include "tnsharp/cnf.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tnsharp {

inline constexpr Var kOracleMaxVars = 24;

/// Enumerates assignments 0 .. 2^n-1 in increasing order; variable v is bit
/// (v-1) of the current value.
class AssignmentIterator {
 public:
  explicit AssignmentIterator(Var n);

  bool done() const noexcept { return cursor_ >= end_; }
  std::uint64_t operator*() const noexcept { return cursor_; }
  AssignmentIterator& operator++() noexcept {
    ++cursor_;
    return *this;
  }
  bool value(Var v) const noexcept { return ((cursor_ >> (v - 1)) & 1U) != 0; }

 private:
  std::uint64_t cursor_ = 0;
  std::uint64_t end_ = 0;
};

/// Clause-by-clause evaluation with bit masks.
bool evaluate(const Formula& f, std::uint64_t assignment);

/// #f. Throws TooLarge when n > 24.
BigInt brute_force_count(const Formula& f, unsigned threads = 1);

/// Number of assignments that violate some clause (the count of not-f).
BigInt brute_force_count_unsat(const Formula& f);

/// Assignments consistent with `fixed` (fixed[v] = 0/1, nullopt = free;
/// index 0 unused) that satisfy f.
BigInt brute_force_count_partial(const Formula& f, const std::vector<std::optional<bool>>& fixed);

/// #e by evaluating the expression tree at every assignment of its n
/// variables.
BigInt brute_force_count_expr(const BoolExpr& e);

}  // namespace tnsharp
