#include "tnsharp/counter.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace tnsharp {

namespace {

// A clause after the COPY variables are fixed: the shared literals decide
// whether it is already satisfied, and its `free_inputs` degree-1 literals
// contribute 2^m (satisfied) or 2^m - 1 (not yet satisfied).
struct ResidualClause {
  std::uint64_t positive_mask = 0;  // COPY bits that satisfy it when 1
  std::uint64_t negative_mask = 0;  // COPY bits that satisfy it when 0
  std::uint32_t free_inputs = 0;
};

struct BranchPlan {
  std::size_t copies = 0;
  std::vector<ResidualClause> clauses;
  std::size_t unconstrained = 0;
};

BranchPlan plan_branches(const Formula& f) {
  const auto profile = var_profile(f);
  // COPY index in branching order; the first COPY is the most significant bit.
  std::vector<std::int64_t> copy_index(profile.occurrences.size(), -1);
  BranchPlan plan;
  for (Var v = 1; v < profile.occurrences.size(); ++v) {
    if (profile.occurrences[v] >= 2) copy_index[v] = static_cast<std::int64_t>(plan.copies++);
  }
  plan.unconstrained = profile.unused_variables();
  if (plan.copies > 63) return plan;
  plan.clauses.reserve(f.num_clauses());
  for (const auto& clause : f.clauses()) {
    ResidualClause rc;
    for (const auto& lit : clause) {
      const auto idx = copy_index[lit.var];
      if (idx < 0) {
        ++rc.free_inputs;
        continue;
      }
      const std::uint64_t bit = std::uint64_t{1} << (plan.copies - 1 - static_cast<std::size_t>(idx));
      (lit.positive ? rc.positive_mask : rc.negative_mask) |= bit;
    }
    plan.clauses.push_back(rc);
  }
  return plan;
}

// Multiplies many small factors into a BigInt, batching them in a machine
// word so the big multiplication happens once per ~64 bits of product.
class ProductAccumulator {
 public:
  void times_pow2(std::uint64_t k) { shift_ += k; }

  void times(std::uint64_t factor) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(batch_) * factor;
    if (wide >> 64) {
      value_ *= batch_;
      batch_ = factor;
    } else {
      batch_ = static_cast<std::uint64_t>(wide);
    }
  }

  void times(const BigInt& factor) { value_ *= factor; }

  BigInt take() {
    value_ *= batch_;
    value_ <<= static_cast<unsigned>(shift_);
    return std::move(value_);
  }

 private:
  BigInt value_ = 1;
  std::uint64_t batch_ = 1;
  std::uint64_t shift_ = 0;
};

// Value of the residual forest for one COPY assignment, without the
// unconstrained-variable factor. Zero as soon as a clause has no way left
// to be satisfied.
BigInt branch_value_fast(const BranchPlan& plan, std::uint64_t assignment) {
  ProductAccumulator product;
  for (const auto& rc : plan.clauses) {
    const bool satisfied = ((assignment & rc.positive_mask) | (~assignment & rc.negative_mask)) != 0;
    if (satisfied) {
      product.times_pow2(rc.free_inputs);
    } else if (rc.free_inputs == 0) {
      return 0;
    } else if (rc.free_inputs < 64) {
      product.times((std::uint64_t{1} << rc.free_inputs) - 1);
    } else {
      product.times(BigInt(pow2(rc.free_inputs) - 1));
    }
  }
  return product.take();
}

bool branch_nonzero_fast(const BranchPlan& plan, std::uint64_t assignment) {
  for (const auto& rc : plan.clauses) {
    const bool satisfied = ((assignment & rc.positive_mask) | (~assignment & rc.negative_mask)) != 0;
    if (!satisfied && rc.free_inputs == 0) return false;
  }
  return true;
}

unsigned worker_count(unsigned requested, std::uint64_t branches) {
  unsigned t = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
  if (branches < t) t = static_cast<unsigned>(std::max<std::uint64_t>(branches, 1));
  return t;
}

void check_guard(std::size_t copies, const CountOptions& options) {
  if (copies > options.max_branch_vars && !options.force) throw BranchGuardExceeded(copies, options.max_branch_vars);
  if (copies > 62) throw TooLarge("cannot enumerate 2^" + std::to_string(copies) + " COPY assignments");
}

// Sums `value(a)` over a in [0, branches) on `threads` workers, each owning a
// contiguous block. Integer addition makes the result schedule-independent.
template <typename ValueFn>
BigInt parallel_sum(std::uint64_t branches, unsigned threads, const ValueFn& value) {
  std::vector<BigInt> partial(threads);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = branches / threads * w + std::min<std::uint64_t>(w, branches % threads);
    const std::uint64_t len = branches / threads + (w < branches % threads ? 1 : 0);
    BigInt sum = 0;
    for (std::uint64_t a = begin; a < begin + len; ++a) sum += value(a);
    partial[w] = std::move(sum);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  BigInt total = 0;
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace

CountResult count_models(const Formula& f, const CountOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CountResult result;
  const Network net = build_boolean_network(f);
  result.stats = network_stats(net);
  check_guard(result.stats.c, options);

  const std::uint64_t branches = std::uint64_t{1} << result.stats.c;
  const unsigned threads = worker_count(options.threads, branches);

  if (options.path == CountOptions::Path::Fast) {
    const BranchPlan plan = plan_branches(f);
    if (plan.copies != result.stats.c) throw InvariantViolation("branch plan disagrees with the network");
    result.model_count = parallel_sum(branches, threads, [&](std::uint64_t a) { return branch_value_fast(plan, a); });
    result.model_count <<= static_cast<unsigned>(plan.unconstrained);
  } else {
    result.model_count =
        parallel_sum(branches, threads, [&](std::uint64_t a) { return contract_forest(fix_copies(net, a)).exact(); });
  }
  result.branches_evaluated = branches;
  result.satisfiable = result.model_count > 0;

  if (result.model_count > pow2(f.num_vars())) throw InvariantViolation("model count exceeds 2^n");
  if (result.branches_evaluated != result.stats.branch_bound) throw InvariantViolation("branch accounting mismatch");
  result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return result;
}

bool is_satisfiable(const Formula& f, const CountOptions& options) {
  const Network net = build_boolean_network(f);
  const auto stats = network_stats(net);
  check_guard(stats.c, options);
  const std::uint64_t branches = std::uint64_t{1} << stats.c;
  const unsigned threads = worker_count(options.threads, branches);

  std::function<bool(std::uint64_t)> nonzero;
  BranchPlan plan;
  if (options.path == CountOptions::Path::Fast) {
    plan = plan_branches(f);
    nonzero = [&](std::uint64_t a) { return branch_nonzero_fast(plan, a); };
  } else {
    nonzero = [&](std::uint64_t a) { return contract_forest(fix_copies(net, a)).exact() > 0; };
  }

  std::atomic<bool> found{false};
  auto work = [&](unsigned w) {
    for (std::uint64_t a = w; a < branches && !found.load(std::memory_order_relaxed); a += threads) {
      if (nonzero(a)) found.store(true, std::memory_order_relaxed);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  return found.load();
}

RofCheck rof_satisfiable(const BoolExpr& e) {
  if (!e.is_read_once()) throw InvalidArgument("expression is not read-once");
  const Network net = build_expr_network(e);
  const double value = contract_norm_tree(net, true).real();
  if (!(std::abs(value - 1.0) <= 1e-9)) {
    throw InvariantViolation("normalized read-once contraction gave " + std::to_string(value) + ", expected 1");
  }
  return RofCheck{true, value};
}

BigInt predicted_cost(const NetworkStats& stats) {
  return (BigInt(stats.g) + BigInt(stats.c) * stats.d) * pow2(stats.c);
}

}  // namespace tnsharp
