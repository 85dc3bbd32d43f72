#include "tnsharp/oracle.hpp"

#include <thread>

namespace tnsharp {

namespace {

struct MaskClause {
  std::uint32_t positive = 0;
  std::uint32_t negative = 0;
};

void check_size(Var n) {
  if (n > kOracleMaxVars) {
    throw TooLarge("brute force is limited to " + std::to_string(kOracleMaxVars) + " variables, got " +
                   std::to_string(n));
  }
}

std::vector<MaskClause> masks(const Formula& f) {
  std::vector<MaskClause> out;
  out.reserve(f.num_clauses());
  for (const auto& clause : f.clauses()) {
    MaskClause mc;
    for (const auto& lit : clause) (lit.positive ? mc.positive : mc.negative) |= std::uint32_t{1} << (lit.var - 1);
    out.push_back(mc);
  }
  return out;
}

bool satisfies(const std::vector<MaskClause>& clauses, std::uint32_t x) {
  for (const auto& c : clauses) {
    if (((x & c.positive) | (~x & c.negative)) == 0) return false;
  }
  return true;
}

}  // namespace

AssignmentIterator::AssignmentIterator(Var n) {
  check_size(n);
  end_ = std::uint64_t{1} << n;
}

bool evaluate(const Formula& f, std::uint64_t assignment) {
  for (const auto& clause : f.clauses()) {
    bool sat = false;
    for (const auto& lit : clause) {
      if ((((assignment >> (lit.var - 1)) & 1U) != 0) == lit.positive) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

BigInt brute_force_count(const Formula& f, unsigned threads) {
  check_size(f.num_vars());
  const auto clauses = masks(f);
  const std::uint64_t total = std::uint64_t{1} << f.num_vars();
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::uint64_t> partial(threads, 0);
  auto work = [&](unsigned w) {
    std::uint64_t count = 0;
    for (std::uint64_t x = w; x < total; x += threads) count += satisfies(clauses, static_cast<std::uint32_t>(x));
    partial[w] = count;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  std::uint64_t sum = 0;
  for (auto p : partial) sum += p;
  return BigInt(sum);
}

BigInt brute_force_count_unsat(const Formula& f) {
  check_size(f.num_vars());
  std::uint64_t count = 0;
  for (AssignmentIterator it(f.num_vars()); !it.done(); ++it) count += !evaluate(f, *it);
  return BigInt(count);
}

BigInt brute_force_count_partial(const Formula& f, const std::vector<std::optional<bool>>& fixed) {
  check_size(f.num_vars());
  std::uint64_t count = 0;
  for (AssignmentIterator it(f.num_vars()); !it.done(); ++it) {
    bool consistent = true;
    for (Var v = 1; v < fixed.size() && v <= f.num_vars(); ++v) {
      if (fixed[v] && it.value(v) != *fixed[v]) {
        consistent = false;
        break;
      }
    }
    if (consistent && evaluate(f, *it)) ++count;
  }
  return BigInt(count);
}

BigInt brute_force_count_expr(const BoolExpr& e) {
  check_size(e.num_vars());
  std::uint64_t count = 0;
  for (AssignmentIterator it(e.num_vars()); !it.done(); ++it) count += e.evaluate(*it);
  return BigInt(count);
}

}  // namespace tnsharp
