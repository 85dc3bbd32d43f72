#include "tnsharp/cnf.hpp"

#include <algorithm>
#include <numeric>

namespace tnsharp {

std::uint64_t InstanceRng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("empty range");
  // 2^64 mod bound; draws in the top `excess` values are redrawn.
  const std::uint64_t excess = (UINT64_MAX % bound + 1) % bound;
  const std::uint64_t limit = std::uint64_t{0} - excess;  // 2^64 - excess
  for (;;) {
    const std::uint64_t x = next();
    if (excess == 0 || x < limit) return x % bound;
  }
}

namespace {

// Moves k distinct uniformly chosen elements of `pool` to its front.
template <typename T>
void partial_shuffle(std::vector<T>& pool, std::size_t k, InstanceRng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace

Formula generate_random_ksat(Var n, std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw InvalidArgument("clause width k must be at least 1");
  if (k > n) throw InvalidArgument("clause width k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  InstanceRng rng(seed);
  std::vector<Var> pool(n);
  std::iota(pool.begin(), pool.end(), Var{1});
  std::vector<Clause> clauses;
  clauses.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::iota(pool.begin(), pool.end(), Var{1});
    partial_shuffle(pool, k, rng);
    Clause clause;
    for (std::size_t i = 0; i < k; ++i) clause.push_back(Literal{pool[i], rng.coin()});
    clauses.push_back(std::move(clause));
  }
  return Formula(n, std::move(clauses));
}

Formula generate_rs_sat(Var n, std::size_t r, std::size_t s, std::uint64_t seed) {
  if (r == 0 || s == 0) throw InvalidArgument("r and s must be at least 1");
  if (r > n) {
    throw InvalidArgument("infeasible r,s-SAT: clause width r=" + std::to_string(r) + " exceeds n=" + std::to_string(n));
  }
  InstanceRng rng(seed);
  std::vector<std::size_t> capacity(std::size_t{n} + 1, s);
  std::vector<Var> available(n);
  std::iota(available.begin(), available.end(), Var{1});
  std::vector<Clause> clauses;
  while (available.size() >= r) {
    partial_shuffle(available, r, rng);
    Clause clause;
    for (std::size_t i = 0; i < r; ++i) {
      clause.push_back(Literal{available[i], rng.coin()});
      --capacity[available[i]];
    }
    clauses.push_back(std::move(clause));
    std::erase_if(available, [&](Var v) { return capacity[v] == 0; });
  }
  return Formula(n, std::move(clauses));
}

BoolExpr generate_random_rof(std::size_t leaves, std::uint64_t seed) {
  if (leaves == 0) throw InvalidArgument("a read-once expression needs at least one leaf");
  if (leaves > UINT32_MAX) throw InvalidArgument("too many leaves");
  InstanceRng rng(seed);
  std::vector<Var> order(leaves);
  std::iota(order.begin(), order.end(), Var{1});
  partial_shuffle(order, leaves, rng);

  BoolExpr e;
  std::vector<std::uint32_t> roots;
  roots.reserve(leaves);
  for (auto v : order) {
    auto leaf = e.add_var(v);
    roots.push_back(rng.coin() ? e.add_not(leaf) : leaf);
  }
  // Merge two random subtrees under a random AND/OR until one remains.
  while (roots.size() > 1) {
    const auto i = static_cast<std::size_t>(rng.below(roots.size()));
    auto j = static_cast<std::size_t>(rng.below(roots.size() - 1));
    if (j >= i) ++j;
    const auto kind = rng.coin() ? ExprKind::And : ExprKind::Or;
    roots[i] = e.add_gate(kind, {roots[i], roots[j]});
    roots[j] = roots.back();
    roots.pop_back();
  }
  e.finish(roots.front(), static_cast<Var>(leaves));
  return e;
}

}  // namespace tnsharp
