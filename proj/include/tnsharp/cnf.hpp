// Formula data model: CNF formulas, Boolean expression trees, DIMACS and
// expression parsing, and the seeded instance generators.
#pragma once

#include "tnsharp/common.hpp"

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tnsharp {

using Var = std::uint32_t;  // 1-based variable index

struct Literal {
  Var var = 0;
  bool positive = true;

  static Literal from_dimacs(std::int64_t value);
  std::int64_t to_dimacs() const { return positive ? std::int64_t{var} : -std::int64_t{var}; }

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// CNF over variables 1..num_vars. Clauses are kept normalized: literals
/// sorted by (variable, polarity) without duplicates, tautologies removed.
class Formula {
 public:
  Formula() = default;

  /// Normalizes `clauses`. Throws InvalidArgument when a literal refers to a
  /// variable outside [1, num_vars] or to variable 0.
  Formula(Var num_vars, std::vector<Clause> clauses);

  /// Convenience form taking DIMACS-style signed integers.
  static Formula from_dimacs_clauses(Var num_vars, const std::vector<std::vector<std::int64_t>>& clauses);

  Var num_vars() const noexcept { return num_vars_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }

  /// Number of tautological clauses dropped during normalization.
  std::size_t dropped_tautologies() const noexcept { return dropped_tautologies_; }

  /// Appends a clause (normalized the same way as in the constructor).
  Formula with_clause(Clause clause) const;

  bool operator==(const Formula& other) const {
    return num_vars_ == other.num_vars_ && clauses_ == other.clauses_;
  }

 private:
  Var num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::size_t dropped_tautologies_ = 0;
};

/// Occurrence count per variable (index 0 unused). occurrences[v] is the
/// number of clauses that mention v in either polarity.
struct VarProfile {
  std::vector<std::size_t> occurrences;

  std::size_t total() const;
  std::size_t unused_variables() const;
};

VarProfile var_profile(const Formula& f);

struct DimacsDocument {
  Formula formula;
  std::vector<std::string> warnings;
};

DimacsDocument parse_dimacs(std::string_view text);
std::string to_dimacs(const Formula& f);

// --- Boolean expressions -------------------------------------------------

enum class ExprKind : std::uint8_t { Var, Not, And, Or };

/// Expression tree stored as an arena; node 0..size-1, children by index.
class BoolExpr {
 public:
  struct Node {
    ExprKind kind = ExprKind::Var;
    Var var = 0;                         // ExprKind::Var only
    std::vector<std::uint32_t> children;  // Not: 1, And/Or: >= 2
  };

  BoolExpr() = default;

  // Builders. Each returns the index of the new node.
  std::uint32_t add_var(Var v);
  std::uint32_t add_not(std::uint32_t child);
  std::uint32_t add_gate(ExprKind kind, std::vector<std::uint32_t> children);

  /// Marks `root` as the root and fixes the variable count (at least the
  /// largest index used). Validates the tree; throws InvalidArgument.
  void finish(std::uint32_t root, Var num_vars = 0);

  std::uint32_t root() const noexcept { return root_; }
  Var num_vars() const noexcept { return num_vars_; }
  const Node& node(std::uint32_t id) const { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::size_t leaf_count() const;
  std::size_t gate_count() const;
  bool is_read_once() const;

  /// Leaf occurrences per variable (index 0 unused).
  VarProfile profile() const;

  /// Evaluates at `assignment`, bit (v-1) holding variable v.
  bool evaluate(std::uint64_t assignment) const;

  std::string to_string() const;

 private:
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
  Var num_vars_ = 0;
  bool finished_ = false;
};

/// Grammar: `x<digits>` variables, `!` > `&` > `|`, parentheses.
/// Same-operator runs at one nesting level become one n-ary node.
BoolExpr parse_expression(std::string_view text);

bool expr_to_cnf_readonce_check(const BoolExpr& e);

/// Mechanical rewrite of a CNF as AND-of-ORs. Requires at least one clause and
/// no empty clause (the expression language has no constants).
BoolExpr formula_to_expression(const Formula& f);

// --- Generators ----------------------------------------------------------

/// Seeded generator used by every instance generator: std::mt19937_64
/// constructed with the seed, and unbiased bounded draws by rejection
/// (draw 64 bits, reject values >= the largest multiple of `bound`, reduce
/// modulo `bound`). Polarity is the top bit of one 64-bit draw.
class InstanceRng {
 public:
  explicit InstanceRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// m clauses, each over k distinct variables (partial Fisher-Yates over
/// 1..n) with uniform polarities.
Formula generate_random_ksat(Var n, std::size_t m, std::size_t k, std::uint64_t seed);

/// Clauses of exactly r distinct variables where no variable appears in
/// more than s clauses. Clauses are placed greedily until fewer than r
/// variables have spare capacity.
Formula generate_rs_sat(Var n, std::size_t r, std::size_t s, std::uint64_t seed);

/// Random read-once expression over `leaves` variables in negation normal
/// form: AND/OR internal nodes, NOT only directly above leaves.
BoolExpr generate_random_rof(std::size_t leaves, std::uint64_t seed);

}  // namespace tnsharp
