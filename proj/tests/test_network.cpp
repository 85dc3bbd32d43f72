#include "reference.hpp"
#include "tnsharp/network.hpp"
#include "tnsharp/oracle.hpp"

#include <gtest/gtest.h>

using namespace tnsharp;

namespace {

Formula formula(Var n, const std::vector<std::vector<std::int64_t>>& clauses) {
  return Formula::from_dimacs_clauses(n, clauses);
}

std::vector<std::vector<std::int64_t>> widen(const ref::Clauses& raw) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& c : raw) out.emplace_back(c.begin(), c.end());
  return out;
}

std::size_t count_role(const Network& n, NodeRole role) {
  std::size_t k = 0;
  for (const auto& node : n.nodes()) k += node.role == role ? 1 : 0;
  return k;
}

// Balanced AND/OR tree over leaves x1..x8: seven gates.
BoolExpr seven_gate_tree() {
  BoolExpr e;
  std::vector<std::uint32_t> level;
  for (Var v = 1; v <= 8; ++v) level.push_back(e.add_var(v));
  bool use_and = true;
  while (level.size() > 1) {
    std::vector<std::uint32_t> next;
    for (std::size_t i = 0; i < level.size(); i += 2) {
      next.push_back(e.add_gate(use_and ? ExprKind::And : ExprKind::Or, {level[i], level[i + 1]}));
    }
    level = next;
    use_and = !use_and;
  }
  e.finish(level[0]);
  return e;
}

BigInt value(const Network& n) { return network_value(n).exact(); }

}  // namespace

TEST(BuildNetwork, SingleUnitClause) {
  const auto net = build_boolean_network(formula(1, {{1}}));
  net.validate();
  EXPECT_EQ(count_role(net, NodeRole::Gate), 1U);
  EXPECT_EQ(count_role(net, NodeRole::VariableCap), 1U);
  EXPECT_EQ(count_role(net, NodeRole::Cap), 1U);
  EXPECT_EQ(count_role(net, NodeRole::Copy), 0U);
  EXPECT_TRUE(net.closed());
  EXPECT_EQ(contract_forest(net).exact(), 1);
}

TEST(BuildNetwork, SharedVariableGetsCopy) {
  const auto net = build_boolean_network(formula(3, {{1, 2}, {-1, 3}}));
  const auto s = network_stats(net);
  EXPECT_EQ(s.g, 2U);
  EXPECT_EQ(s.c, 1U);
  EXPECT_EQ(s.d, 2U);
  EXPECT_EQ(s.n, 3U);
  EXPECT_EQ(s.m, 2U);
  EXPECT_EQ(s.branch_bound, 2);
  const auto copies = net.copy_nodes();
  ASSERT_EQ(copies.size(), 1U);
  EXPECT_EQ(net.node(copies[0]).var, 1U);
  EXPECT_EQ(value(net), 4);
}

TEST(BuildNetwork, ContradictionIsZero) {
  const auto net = build_boolean_network(formula(1, {{1}, {-1}}));
  EXPECT_EQ(network_stats(net).c, 1U);
  EXPECT_EQ(value(net), 0);
}

TEST(BuildNetwork, EmptyFormulaIsTwoToTheN) {
  const auto net = build_boolean_network(formula(5, {}));
  EXPECT_TRUE(net.nodes().empty());
  EXPECT_EQ(net.unconstrained_vars(), 5U);
  EXPECT_EQ(contract_forest(net).exact(), 32);
}

TEST(BuildNetwork, AbsentVariablesDoubleTheValue) {
  EXPECT_EQ(contract_forest(build_boolean_network(formula(5, {{1}}))).exact(), 16);
}

TEST(BuildNetwork, EmptyClauseIsZero) {
  const Formula f(2, {Clause{}, Clause{Literal{1, true}}});
  EXPECT_EQ(value(build_boolean_network(f)), 0);
}

TEST(BuildNetwork, DegreeOneVariablesGiveTrees) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = generate_rs_sat(12, 1 + rng() % 3, 1, rng());
    const auto net = build_boolean_network(f);
    EXPECT_EQ(network_stats(net).c, 0U);
    EXPECT_TRUE(is_tree(net));
  }
}

TEST(BuildNetwork, DegreeTenVariable) {
  std::vector<std::vector<std::int64_t>> clauses;
  for (int i = 0; i < 10; ++i) clauses.push_back({1, i + 2});
  const auto s = network_stats(build_boolean_network(formula(11, clauses)));
  EXPECT_EQ(s.c, 1U);
  EXPECT_EQ(s.d, 10U);
}

TEST(ExprNetwork, ReadOnceIsCopyFreeTree) {
  const auto net = build_expr_network(parse_expression("(x1 | x2) & !x3"));
  const auto s = network_stats(net);
  EXPECT_EQ(s.c, 0U);
  EXPECT_EQ(s.g, 3U);
  EXPECT_TRUE(is_tree(net));
  EXPECT_EQ(contract_forest(net).exact(), 3);
}

TEST(ExprNetwork, ContradictionHasOneCopy) {
  const auto net = build_expr_network(parse_expression("x1 & !x1"));
  EXPECT_EQ(network_stats(net).c, 1U);
  EXPECT_EQ(value(net), 0);
}

TEST(ExprNetwork, SingleLeaf) {
  const auto net = build_expr_network(parse_expression("x1"));
  EXPECT_EQ(network_stats(net).g, 0U);
  EXPECT_EQ(contract_forest(net).exact(), 1);
}

TEST(ExprNetwork, ValueMatchesExpressionOracle) {
  std::mt19937_64 rng(9);
  const char* texts[] = {"x1 | x2 & x1", "(x1 | x2) & (!x1 | x3) & (x2 | !x3)", "!(x1 & x2) | (x3 & !x1)",
                         "x1 & (x2 | !x2)"};
  for (const char* t : texts) {
    const auto e = parse_expression(t);
    EXPECT_EQ(value(build_expr_network(e)), brute_force_count_expr(e)) << t;
  }
  for (int trial = 0; trial < 30; ++trial) {
    const auto e = generate_random_rof(1 + rng() % 12, rng());
    EXPECT_EQ(contract_forest(build_expr_network(e)).exact(), brute_force_count_expr(e));
  }
}

TEST(Stats, SevenGateTree) {
  const auto s = network_stats(build_expr_network(seven_gate_tree()));
  EXPECT_EQ(s.g, 7U);
  EXPECT_EQ(s.c, 0U);
  EXPECT_EQ(s.d, 0U);
  EXPECT_EQ(s.branch_bound, 1);
}

TEST(Stats, GateCountLinearInLeaves) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t leaves = 1 + rng() % 60;
    const auto s = network_stats(build_expr_network(generate_random_rof(leaves, rng())));
    EXPECT_LE(s.g, 2 * leaves);
    EXPECT_EQ(s.c, 0U);
  }
}

TEST(Stats, CopyCountBoundedByVariables) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = generate_random_ksat(1 + rng() % 15, rng() % 30, 1, rng());
    const auto s = network_stats(build_boolean_network(f));
    EXPECT_LE(s.c, s.n);
    EXPECT_LE(s.d, s.m);
  }
}

TEST(IsTree, Examples) {
  EXPECT_TRUE(is_tree(build_expr_network(parse_expression("(x1 | x2) & !x3"))));
  // Both variables are shared by both clauses: COPY x1 - clause - COPY x2 - clause - COPY x1.
  EXPECT_FALSE(is_tree(build_boolean_network(formula(2, {{1, 2}, {-1, 2}}))));
  EXPECT_TRUE(is_tree(build_boolean_network(formula(2, {{1, 2}}))));
}

TEST(ContractForest, SingleOrClause) {
  EXPECT_EQ(contract_forest(build_boolean_network(formula(2, {{1, 2}}))).exact(), 3);
}

TEST(ContractForest, DisjointComponentsMultiply) {
  const auto net = build_boolean_network(formula(3, {{1, 2}, {3}}));
  EXPECT_EQ(contract_forest(net).exact(), 3);
}

TEST(ContractForest, NormalizedReadOnceTreeIsOne) {
  const auto e = parse_expression("(x1 | x2) & !x3");
  const auto net = build_expr_network(e);
  EXPECT_NEAR(contract_norm_tree(net, true).real(), 1.0, 1e-9);
  // Unnormalized, the doubled fold is <psi|psi> = #e.
  EXPECT_EQ(contract_norm_tree(net, false).exact(), 3);
}

TEST(ContractForest, RejectsCyclesAndOpenNetworks) {
  EXPECT_THROW(contract_forest(build_boolean_network(formula(2, {{1, 2}, {-1, 2}}))), InvalidArgument);
  EXPECT_THROW(contract_forest(build_boolean_state(formula(2, {{1, 2}}))), InvalidArgument);
}

TEST(ContractForest, NeverNegative) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto f = formula(static_cast<Var>(n), widen(ref::random_clauses(rng, n, static_cast<int>(rng() % 12), 2)));
    const auto net = build_boolean_network(f);
    const auto c = net.copy_nodes().size();
    if (c > 6) continue;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << c); ++a) EXPECT_GE(contract_forest(fix_copies(net, a)).exact(), 0);
  }
}

TEST(BranchOnCopy, SplitsTheCount) {
  const auto net = build_boolean_network(formula(3, {{1, 2}, {-1, 3}}));
  const auto [zero, one] = branch_on_copy(net, net.copy_nodes()[0]);
  EXPECT_EQ(contract_forest(zero).exact(), 2);
  EXPECT_EQ(contract_forest(one).exact(), 2);
  EXPECT_EQ(network_stats(zero).c, 0U);
}

TEST(BranchOnCopy, ContradictionBranchesAreZero) {
  const auto net = build_boolean_network(formula(1, {{1}, {-1}}));
  const auto [zero, one] = branch_on_copy(net, net.copy_nodes()[0]);
  EXPECT_EQ(contract_forest(zero).exact(), 0);
  EXPECT_EQ(contract_forest(one).exact(), 0);
}

TEST(BranchOnCopy, TwoLevelsMatchOracle) {
  const auto f = formula(5, {{1, 2}, {-1, -2, 3}, {2, 4}, {1, 5}});
  const auto net = build_boolean_network(f);
  ASSERT_EQ(net.copy_nodes().size(), 2U);
  BigInt total = 0;
  int leaves = 0;
  const auto [n0, n1] = branch_on_copy(net, net.copy_nodes()[0]);
  for (const auto* half : {&n0, &n1}) {
    const auto [a, b] = branch_on_copy(*half, half->copy_nodes()[0]);
    for (const auto* q : {&a, &b}) {
      total += value(*q);
      ++leaves;
    }
  }
  EXPECT_EQ(leaves, 4);
  EXPECT_EQ(total, ref::count(5, {{1, 2}, {-1, -2, 3}, {2, 4}, {1, 5}}));
}

TEST(BranchOnCopy, RejectsNonCopy) {
  const auto net = build_boolean_network(formula(3, {{1, 2}, {-1, 3}}));
  NodeId gate = 0;
  while (net.node(gate).role != NodeRole::Gate) ++gate;
  EXPECT_THROW(branch_on_copy(net, gate), InvalidArgument);
}

TEST(SumRule, RandomFormulas) {
  std::mt19937_64 rng(14);
  int checked = 0;
  while (checked < 150) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const int m = static_cast<int>(rng() % (2 * n + 1));
    const int k = 1 + static_cast<int>(rng() % 3);
    const auto raw = ref::random_clauses(rng, n, m, k);
    const auto net = build_boolean_network(formula(static_cast<Var>(n), widen(raw)));
    const auto c = net.copy_nodes().size();
    if (c > 8) continue;
    BigInt sum = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << c); ++a) sum += contract_forest(fix_copies(net, a)).exact();
    EXPECT_EQ(sum, ref::count(n, raw));
    ++checked;
  }
}

TEST(OpenStates, JoinedStateNormIsTheCount) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto raw = ref::random_clauses(rng, n, static_cast<int>(rng() % 8), 2);
    const auto f = formula(static_cast<Var>(n), widen(raw));
    const auto state = build_boolean_state(f);
    EXPECT_FALSE(state.closed());
    ASSERT_EQ(state.dangling_signature().size(), static_cast<std::size_t>(n));
    const auto joined = join(state, state);
    EXPECT_TRUE(joined.closed());
    const auto fused = fuse_copies(joined);
    EXPECT_LE(fused.copy_nodes().size(), static_cast<std::size_t>(n));
    EXPECT_EQ(value(fused), ref::count(n, raw));
    EXPECT_EQ(value(joined), ref::count(n, raw));
  }
}

TEST(OpenStates, JoinRejectsMismatchedSignatures) {
  EXPECT_THROW(join(build_boolean_state(formula(2, {{1}})), build_boolean_state(formula(3, {{1}}))),
               InvalidArgument);
}

TEST(Normalized, GatesBecomeReal) {
  const auto net = build_expr_network(parse_expression("(x1 | x2) & (x3 | !x4)")).normalized();
  for (NodeId id = 0; id < net.nodes().size(); ++id) EXPECT_EQ(net.tensor(id).backend(), Backend::Real);
}

TEST(Dump, AdjacencyFormat) {
  const auto text = dump(build_boolean_network(formula(3, {{1, 2}, {-1, 3}})));
  EXPECT_NE(text.find("copy deg=3 var=1 ->"), std::string::npos);
  EXPECT_NE(text.find("gate deg=3 ->"), std::string::npos);
  const auto open = dump(build_boolean_state(formula(1, {{1}})));
  EXPECT_NE(open.find("*1"), std::string::npos);
}
