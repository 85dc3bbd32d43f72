// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
#include "reference.hpp"
#include "tnsharp/counter.hpp"
#include "tnsharp/oracle.hpp"
#include "tnsharp/state.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace tnsharp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Formula from_ref(int n, const ref::Clauses& raw) {
  std::vector<std::vector<std::int64_t>> wide;
  for (const auto& c : raw) wide.emplace_back(c.begin(), c.end());
  return Formula::from_dimacs_clauses(static_cast<Var>(n), wide);
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 3) messages_ << (messages_.tellp() > 0 ? "; " : "") << what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + messages_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream messages_;
};

struct Instance {
  int n;
  ref::Clauses raw;
  Formula f;
};

// Criterion 1 population, shared with criterion 5.
std::vector<Instance> oracle_suite() {
  std::vector<Instance> out;
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 520; ++i) {
    const int n = 1 + static_cast<int>(rng() % 16);
    const int m = static_cast<int>(rng() % (3 * n + 1));
    const int k = 1 + static_cast<int>(rng() % 3);
    auto raw = ref::random_clauses(rng, n, m, k);
    auto f = from_ref(n, raw);
    out.push_back({n, std::move(raw), std::move(f)});
  }
  return out;
}

Outcome oracle_equivalence(const std::vector<Instance>& suite) {
  Check check;
  const auto start = Clock::now();
  CountOptions o;
  o.force = true;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& inst = suite[i];
    const auto got = count_models(inst.f, o).model_count;
    check.expect(got == brute_force_count(inst.f), "instance " + std::to_string(i) + " differs from brute force");
    check.expect(got == ref::count(inst.n, inst.raw), "instance " + std::to_string(i) + " differs from reference");
  }
  const double secs = seconds_since(start);
  check.expect(secs < 120, "took " + std::to_string(secs) + " s");
  return check.done(std::to_string(suite.size()) + " formulas, n in [1,16], m in [0,3n], k in {1,2,3}; " +
                    std::to_string(secs).substr(0, 5) + " s");
}

Outcome zero_value_example() {
  Check check;
  const auto f = Formula::from_dimacs_clauses(1, {{1}, {-1}});
  const auto r = count_models(f);
  check.expect(r.model_count == 0, "counter gave " + to_decimal(r.model_count));
  check.expect(!r.satisfiable, "counter reports satisfiable");
  const auto s = dense_state(f);
  check.expect(s.norm_squared() == 0.0 && s.is_zero(), "dense state is not the zero vector");
  check.expect(network_value(build_expr_network(parse_expression("x1 & !x1"))).exact() == 0,
               "expression network is nonzero");
  return check.done("x & !x: count 0, dense norm 0, expression network 0");
}

// Counts of a read-once expression by composing (zeros, ones) pairs up the
// tree. Valid only because read-once children are independent.
std::pair<BigInt, BigInt> read_once_counts(const BoolExpr& e, std::uint32_t id) {
  const auto& node = e.node(id);
  switch (node.kind) {
    case ExprKind::Var: return {1, 1};
    case ExprKind::Not: {
      auto [z, o] = read_once_counts(e, node.children[0]);
      return {o, z};
    }
    case ExprKind::And:
    case ExprKind::Or: {
      BigInt total = 1;
      BigInt decided = 1;  // ones for AND, zeros for OR
      for (auto c : node.children) {
        auto [z, o] = read_once_counts(e, c);
        total *= z + o;
        decided *= node.kind == ExprKind::And ? o : z;
      }
      BigInt rest = total - decided;
      return node.kind == ExprKind::And ? std::pair{rest, decided} : std::pair{decided, rest};
    }
  }
  return {0, 0};
}

Outcome read_once_satisfiability() {
  Check check;
  double worst = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::size_t leaves = 1 + i % 50;
    const auto e = generate_random_rof(leaves, 1000 + i);
    check.expect(e.is_read_once(), "generator produced a repeated variable");
    const auto r = rof_satisfiable(e);
    worst = std::max(worst, std::abs(r.normalized_value - 1.0));
    check.expect(r.satisfiable, "expression " + std::to_string(i) + " reported unsatisfiable");
    check.expect(std::abs(r.normalized_value - 1.0) <= 1e-9, "normalized value off by " + std::to_string(worst));
    const BigInt ones = read_once_counts(e, e.root()).second;
    check.expect(ones > 0, "expression " + std::to_string(i) + " has no model");
    if (leaves <= 20) check.expect(brute_force_count_expr(e) == ones, "expression oracle disagrees");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", worst);
  return check.done("200 expressions up to 50 leaves; max |value - 1| = " + std::string(buf));
}

Outcome rs_sat_property() {
  Check check;
  std::mt19937_64 rng(77001);
  for (int i = 0; i < 100; ++i) {
    const std::size_t r = 1 + rng() % 4;
    const std::size_t s = 1 + rng() % r;
    const Var n = static_cast<Var>(r + rng() % (17 - r));
    const auto f = generate_rs_sat(n, r, s, rng());
    CountOptions o;
    o.force = true;
    const auto counted = count_models(f, o);
    check.expect(counted.satisfiable && is_satisfiable(f, o), "counter: instance " + std::to_string(i) + " unsat");
    check.expect(brute_force_count(f) > 0, "oracle: instance " + std::to_string(i) + " unsat");
  }
  return check.done("100 r,s-SAT instances with s <= r <= 4, n <= 16");
}

Outcome branch_sum_rule(const std::vector<Instance>& suite) {
  Check check;
  int used = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto net = build_boolean_network(suite[i].f);
    const auto c = net.copy_nodes().size();
    if (c > 12) continue;
    ++used;
    BigInt sum = 0;
    std::uint64_t trees = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << c); ++a, ++trees) {
      sum += contract_forest(fix_copies(net, a)).exact();
    }
    const auto r = count_models(suite[i].f);
    check.expect(sum == r.model_count, "instance " + std::to_string(i) + ": branch sum differs from count");
    check.expect(r.branches_evaluated == pow2(c) && BigInt(trees) == pow2(c),
                 "instance " + std::to_string(i) + ": branches_evaluated != 2^c");
  }
  return check.done(std::to_string(used) + " instances with c <= 12");
}

// Ten shared variables, each clause = one shared literal + two fresh
// degree-1 variables. Exact count per shared variable i with p positive and
// q negative occurrences: 4^p 3^q + 3^p 4^q.
struct Family {
  Formula f;
  BigInt expected;
};

Family crafted_family(int degree_one_vars) {
  const int clauses = degree_one_vars / 2;
  std::vector<std::vector<std::int64_t>> raw;
  std::array<int, 10> pos{};
  std::array<int, 10> neg{};
  for (int j = 0; j < clauses; ++j) {
    const int shared = j % 10;
    const bool positive = (j / 10) % 3 != 0;
    (positive ? pos : neg)[shared]++;
    const std::int64_t lit = positive ? shared + 1 : -(shared + 1);
    raw.push_back({lit, 11 + 2 * j, 12 + 2 * j});
  }
  BigInt expected = 1;
  for (int i = 0; i < 10; ++i) {
    BigInt a = 1;
    BigInt b = 1;
    for (int k = 0; k < pos[i]; ++k) {
      a *= 4;
      b *= 3;
    }
    for (int k = 0; k < neg[i]; ++k) {
      a *= 3;
      b *= 4;
    }
    expected *= a + b;
  }
  return {Formula::from_dimacs_clauses(static_cast<Var>(10 + 2 * clauses), raw), expected};
}

Outcome efficiency_family() {
  Check check;
  std::vector<double> times;
  std::string summary;
  for (int n : {1000, 10000}) {
    const auto fam = crafted_family(n);
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
      const auto r = count_models(fam.f);
      best = std::min(best, std::chrono::duration<double>(r.elapsed).count());
      check.expect(r.model_count == fam.expected, "n=" + std::to_string(n) + ": wrong count");
      check.expect(r.stats.c == 10, "n=" + std::to_string(n) + ": c=" + std::to_string(r.stats.c));
      check.expect(r.stats.d == static_cast<std::size_t>(n / 20), "n=" + std::to_string(n) + ": unexpected d");
    }
    times.push_back(best);
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%d: %.3f s; ", n, best);
    summary += buf;
  }
  const double ratio = times[1] / std::max(times[0], 1e-6);
  check.expect(times[1] < 10.0, "n=10^4 took " + std::to_string(times[1]) + " s");
  check.expect(ratio < 100.0, "time ratio " + std::to_string(ratio) + " is not subquadratic");
  char buf[64];
  std::snprintf(buf, sizeof buf, "growth x%.1f for 10x n", ratio);
  return check.done("c=10, d=n/20: " + summary + buf);
}

Outcome resolution_of_identity() {
  Check check;
  for (std::size_t k = 1; k <= 6; ++k) {
    for (std::uint32_t w = 0; w <= k; ++w) {
      const auto plus = cap(CapKind::Plus).relabeled({wire(w)});
      const auto reduced = contract_shared(copy_tensor(k), plus);
      std::vector<Wire> ws;
      for (std::uint32_t i = 0; i < k; ++i) ws.push_back(wire(i));
      const auto expected = k == 1 ? cap(CapKind::Plus) : copy_tensor(k - 1);
      check.expect(reduced.relabeled(ws) == expected, "k=" + std::to_string(k) + " wire " + std::to_string(w));
    }
  }
  return check.done("k = 1..6, plus-cap on every wire");
}

Outcome diagonal_map_law() {
  Check check;
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    TruthTable t(4);
    for (int x = 0; x < 4; ++x) t[x] = static_cast<std::uint8_t>((bits >> x) & 1U);
    const auto [zeros, ones] = ref::preimages(t);
    const auto d = diagonal_map(gate_tensor(t));
    const bool ok = d.rank() == 2 && d.at(std::uint64_t{0}).exact() == zeros && d.at(std::uint64_t{3}).exact() == ones &&
                    d.at(std::uint64_t{1}).exact() == 0 && d.at(std::uint64_t{2}).exact() == 0;
    check.expect(ok, "gate " + std::to_string(bits));
  }
  return check.done("all 16 two-input gates");
}

// Satisfiable formulas are planted (every clause agrees with a hidden
// assignment); unsatisfiable ones contain all eight sign patterns on three
// variables.
Outcome entropy_satisfiability() {
  Check check;
  std::mt19937_64 rng(909);
  int unique = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const bool want_sat = i % 2 == 0;
    ref::Clauses raw;
    const std::uint64_t planted = rng() & ((std::uint64_t{1} << n) - 1);
    for (const auto& c : ref::random_clauses(rng, n, 2 * n, 3)) {
      if (!want_sat || ref::satisfies({c}, planted)) raw.push_back(c);
    }
    if (want_sat && i % 4 == 0) {
      for (int v = 1; v <= n; ++v) raw.push_back({((planted >> (v - 1)) & 1U) ? v : -v});
    }
    if (!want_sat) {
      std::vector<int> vars{1, 2, 3};
      for (int s = 0; s < 8; ++s) {
        raw.push_back({(s & 1) ? vars[0] : -vars[0], (s & 2) ? vars[1] : -vars[1], (s & 4) ? vars[2] : -vars[2]});
      }
    }
    const auto f = from_ref(n, raw);
    const auto count = brute_force_count(f);
    check.expect((count > 0) == want_sat, "formula " + std::to_string(i) + " has the wrong satisfiability");
    const auto state = dense_state(f);
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    const std::uint64_t masks[3] = {1, full >> 1, 1 + rng() % (full - 1)};
    if (count == 1) ++unique;
    for (auto mask : masks) {
      for (double q : {0.0, 2.0}) {
        const auto h = renyi_entropy(state, Bipartition(static_cast<Var>(n), mask), q);
        check.expect(h.defined() == (count > 0), "formula " + std::to_string(i) + ": definedness mismatch");
        if (count == 1 && h.defined()) check.expect(std::abs(*h.nats) <= 1e-9, "unique solution with nonzero entropy");
      }
    }
  }
  check.expect(unique >= 10, "too few unique-solution instances");
  return check.done("50 formulas (25 unsatisfiable, " + std::to_string(unique) +
                    " with a unique solution), q in {0,2}, 3 bipartitions each");
}

Outcome partition_limit() {
  Check check;
  std::mt19937_64 rng(1010);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto f = from_ref(n, ref::random_clauses(rng, n, static_cast<int>(rng() % (3 * n + 1)), 3));
    const double count = brute_force_count(f).convert_to<double>();
    const double diff = std::abs(partition_trace(f, 50) - count);
    worst = std::max(worst, diff);
    check.expect(diff < 1e-6, "formula " + std::to_string(i) + " off by " + std::to_string(diff));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", worst);
  return check.done("20 formulas, beta = 50, diagonal H; max error " + std::string(buf));
}

Outcome cauchy_schwarz() {
  Check check;
  std::mt19937_64 rng(1111);
  int strict = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto raw = ref::random_clauses(rng, n, static_cast<int>(rng() % (2 * n + 2)), 1 + static_cast<int>(rng() % 3));
    ref::Clauses left;
    ref::Clauses right;
    for (const auto& c : raw) (rng() & 1U ? left : right).push_back(c);
    const auto x = build_boolean_state(from_ref(n, left));
    const auto y = build_boolean_state(from_ref(n, right));
    const auto r = cauchy_schwarz_check(x, y);
    check.expect(r.holds, "split " + std::to_string(i) + " violates the inequality");
    check.expect(r.cross == ref::count(n, raw) && r.xx == ref::count(n, left) && r.yy == ref::count(n, right),
                 "split " + std::to_string(i) + ": inner products disagree with the reference");
    check.expect(r.equality == (r.cross * r.cross == r.xx * r.yy), "equality flag inconsistent");
    if (!r.equality) ++strict;
    const auto same = cauchy_schwarz_check(x, x);
    check.expect(same.holds && same.equality, "identical halves not detected as equality");
    if (same.xx > 0) check.expect(same.cos_theta && *same.cos_theta == 1.0, "cos theta of identical halves != 1");
  }
  return check.done("100 random splits (" + std::to_string(strict) + " strict), equality on identical halves");
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + TNSHARP_CLI + "' " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return "";
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return "exit failure: " + out;
  return out;
}

std::string without_elapsed(const std::string& line) {
  auto j = nlohmann::ordered_json::parse(line);
  j.erase("elapsed_ms");
  return j.dump();
}

Outcome cli_determinism() {
  Check check;
  const auto dir = std::filesystem::temp_directory_path() / ("tnsharp_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string cnf = (dir / "instance.cnf").string();
  {
    std::ofstream out(cnf);
    out << to_dimacs(generate_random_ksat(14, 40, 3, 12));
  }
  const std::string path = "'" + cnf + "'";
  const std::vector<std::string> commands = {
      "count --json --threads 1 " + path,
      "count --json --threads 4 " + path,
      "count --json --contract --threads 2 " + path,
      "solve --json --threads 3 " + path,
      "stats --json " + path,
      "oracle --json --threads 2 " + path,
      "entropy --json --bipartition 1,3,5 --q 2 " + path,
      "entropy --json --bipartition 2 --q 1 " + path,
      "physics --json --beta 50 " + path,
      "gen --json --mode ksat --n 20 --m 50 --k 3 --seed 9",
      "gen --json --mode rssat --n 16 --r 3 --s 3 --seed 9",
      "gen --json --mode rof --leaves 30 --seed 9",
  };
  for (const auto& c : commands) {
    const auto first = run_cli(c);
    const auto second = run_cli(c);
    try {
      check.expect(without_elapsed(first) == without_elapsed(second), "outputs differ for: " + c);
    } catch (const std::exception&) {
      check.expect(false, "not JSON for: " + c + " -> " + first.substr(0, 80));
    }
  }
  std::filesystem::remove_all(dir);
  return check.done(std::to_string(commands.size()) + " commands run twice, elapsed_ms excluded");
}

}  // namespace

int main() {
  const auto suite = oracle_suite();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", [&] { return oracle_equivalence(suite); }},
      {"x & !x contracts to 0", zero_value_example},
      {"read-once satisfiability", read_once_satisfiability},
      {"r,s-SAT with s <= r is satisfiable", rs_sat_property},
      {"branch accounting and sum rule", [&] { return branch_sum_rule(suite); }},
      {"polynomial regime for fixed c", efficiency_family},
      {"COPY resolution of identity", resolution_of_identity},
      {"diagonal-map law", diagonal_map_law},
      {"entropy defined iff satisfiable", entropy_satisfiability},
      {"partition-function limit", partition_limit},
      {"Cauchy-Schwarz", cauchy_schwarz},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " -- "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
