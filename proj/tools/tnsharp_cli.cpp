// tnsharp-cli: command-line front end over the tnsharp C API.
//
// Exit codes: 0 success, 1 parse/usage/input error, 2 branch guard exceeded,
// 3 internal error.

#include "tnsharp/tnsharp.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(tns_status s) {
  switch (s) {
    case TNS_OK: return 0;
    case TNS_BRANCH_GUARD: return 2;
    case TNS_INTERNAL_ERROR: return 3;
    default: return 1;
  }
}

void check(tns_status s) {
  if (s != TNS_OK) throw CliError{exit_code_for(s), tns_last_error()};
}

struct FormulaDeleter {
  void operator()(tns_formula* f) const { tns_formula_free(f); }
};
struct ExprDeleter {
  void operator()(tns_expr* e) const { tns_expr_free(e); }
};
struct ResultDeleter {
  void operator()(tns_count_result* r) const { tns_count_result_free(r); }
};
using FormulaPtr = std::unique_ptr<tns_formula, FormulaDeleter>;
using ExprPtr = std::unique_ptr<tns_expr, ExprDeleter>;
using ResultPtr = std::unique_ptr<tns_count_result, ResultDeleter>;

std::string take_string(char* s) {
  std::string out(s);
  tns_string_free(s);
  return out;
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{1, "cannot open " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string describe(const std::string& path) { return path.empty() || path == "-" ? "<stdin>" : path; }

struct Loaded {
  FormulaPtr formula;
  std::vector<std::string> warnings;
};

Loaded load(const std::string& path) {
  const std::string text = read_input(path);
  tns_formula* raw = nullptr;
  check(tns_formula_parse_dimacs(text.data(), text.size(), &raw));
  Loaded l{FormulaPtr(raw), {}};
  for (size_t i = 0; i < tns_formula_warning_count(raw); ++i) l.warnings.emplace_back(tns_formula_warning(raw, i));
  return l;
}

void put_stats(Json& j, const tns_stats& s) {
  j["n"] = s.n;
  j["m"] = s.m;
  j["g"] = s.g;
  j["c"] = s.c;
  j["d"] = s.d;
}

void emit(const Json& report, bool json, const std::vector<std::string>& warnings, const std::string& human) {
  if (json) {
    std::cout << report.dump() << '\n';
  } else {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    std::cout << human;
  }
}

std::string stats_line(const tns_stats& s) {
  std::ostringstream out;
  out << "variables: " << s.n << "  clauses: " << s.m << "\n"
      << "network: g=" << s.g << " c=" << s.c << " d=" << s.d << "\n";
  return out.str();
}

std::string format_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f ms", ms);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct CountFlags {
  unsigned max_branch_vars = 30;
  bool force = false;
  unsigned threads = 1;
  bool contract = false;

  tns_count_options options() const {
    tns_count_options o;
    tns_count_options_init(&o);
    o.max_branch_vars = max_branch_vars;
    o.force = force ? 1 : 0;
    o.threads = threads;
    o.contract_path = contract ? 1 : 0;
    return o;
  }
};

void add_count_flags(CLI::App* cmd, CountFlags& flags) {
  cmd->add_option("--max-branch-vars", flags.max_branch_vars, "refuse networks with more COPY-tensors (default 30)");
  cmd->add_flag("--force", flags.force, "ignore --max-branch-vars");
  cmd->add_option("--threads", flags.threads, "branch workers, 0 = auto (default 1)");
  cmd->add_flag("--contract", flags.contract, "contract every residual forest tensor by tensor");
}

void run_count(const std::string& path, const CountFlags& flags, bool json) {
  auto in = load(path);
  const auto opts = flags.options();
  tns_count_result* raw = nullptr;
  check(tns_count(in.formula.get(), &opts, &raw));
  ResultPtr r(raw);
  tns_stats s;
  tns_count_result_stats(r.get(), &s);
  const bool sat = tns_count_result_satisfiable(r.get()) != 0;

  Json j;
  j["command"] = "count";
  j["input"] = describe(path);
  put_stats(j, s);
  j["model_count"] = tns_count_result_model_count(r.get());
  j["satisfiable"] = sat;
  j["branches_evaluated"] = tns_count_result_branches_evaluated(r.get());
  j["predicted_cost"] = tns_count_result_predicted_cost(r.get());
  j["elapsed_ms"] = tns_count_result_elapsed_ms(r.get());
  j["warnings"] = in.warnings;

  std::ostringstream h;
  h << stats_line(s) << "model count: " << tns_count_result_model_count(r.get()) << "\n"
    << "satisfiable: " << (sat ? "yes" : "no") << "\n"
    << "branches evaluated: " << tns_count_result_branches_evaluated(r.get()) << "\n"
    << "predicted cost: " << tns_count_result_predicted_cost(r.get()) << "\n"
    << "elapsed: " << format_ms(tns_count_result_elapsed_ms(r.get())) << "\n";
  emit(j, json, in.warnings, h.str());
}

void run_solve(const std::string& path, const CountFlags& flags, bool json) {
  const auto start = std::chrono::steady_clock::now();
  auto in = load(path);
  const auto opts = flags.options();
  tns_stats s;
  char* cost = nullptr;
  check(tns_network_stats(in.formula.get(), &s, nullptr, &cost));
  const std::string predicted = take_string(cost);
  int sat = 0;
  check(tns_is_satisfiable(in.formula.get(), &opts, &sat));
  const double ms = elapsed_since(start);

  Json j;
  j["command"] = "solve";
  j["input"] = describe(path);
  put_stats(j, s);
  j["satisfiable"] = sat != 0;
  j["predicted_cost"] = predicted;
  j["elapsed_ms"] = ms;
  j["warnings"] = in.warnings;

  std::ostringstream h;
  h << stats_line(s) << "satisfiable: " << (sat ? "yes" : "no") << "\n"
    << "elapsed: " << format_ms(ms) << "\n";
  emit(j, json, in.warnings, h.str());
}

void run_stats(const std::string& path, bool json) {
  auto in = load(path);
  tns_stats s;
  char* bound = nullptr;
  char* cost = nullptr;
  check(tns_network_stats(in.formula.get(), &s, &bound, &cost));
  const std::string branch_bound = take_string(bound);
  const std::string predicted = take_string(cost);

  Json j;
  j["command"] = "stats";
  j["input"] = describe(path);
  put_stats(j, s);
  j["branch_bound"] = branch_bound;
  j["predicted_cost"] = predicted;
  j["warnings"] = in.warnings;

  std::ostringstream h;
  h << stats_line(s) << "branch bound: " << branch_bound << "\n"
    << "predicted cost: " << predicted << "\n";
  emit(j, json, in.warnings, h.str());
}

void run_oracle(const std::string& path, unsigned threads, bool json) {
  const auto start = std::chrono::steady_clock::now();
  auto in = load(path);
  char* raw = nullptr;
  check(tns_oracle_count(in.formula.get(), threads, &raw));
  const std::string count = take_string(raw);
  const double ms = elapsed_since(start);
  const bool sat = count != "0";

  Json j;
  j["command"] = "oracle";
  j["input"] = describe(path);
  j["n"] = tns_formula_num_vars(in.formula.get());
  j["m"] = tns_formula_num_clauses(in.formula.get());
  j["model_count"] = count;
  j["satisfiable"] = sat;
  j["elapsed_ms"] = ms;
  j["warnings"] = in.warnings;

  std::ostringstream h;
  h << "model count: " << count << "\n"
    << "satisfiable: " << (sat ? "yes" : "no") << "\n"
    << "elapsed: " << format_ms(ms) << "\n";
  emit(j, json, in.warnings, h.str());
}

std::vector<uint32_t> parse_var_list(const std::string& text) {
  std::vector<uint32_t> vars;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw CliError{1, "empty entry in --bipartition"};
    size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v == 0 || v > UINT32_MAX) throw CliError{1, "bad variable in --bipartition: " + item};
    vars.push_back(static_cast<uint32_t>(v));
  }
  return vars;
}

void run_entropy(const std::string& path, const std::string& bipartition, double q, bool json) {
  const auto start = std::chrono::steady_clock::now();
  auto in = load(path);
  const auto traced = parse_var_list(bipartition);
  int defined = 0;
  double nats = 0.0;
  check(tns_renyi_entropy(in.formula.get(), traced.data(), traced.size(), q, &defined, &nats));
  const double ms = elapsed_since(start);

  Json j;
  j["command"] = "entropy";
  j["input"] = describe(path);
  j["n"] = tns_formula_num_vars(in.formula.get());
  j["m"] = tns_formula_num_clauses(in.formula.get());
  j["bipartition"] = traced;
  j["q"] = q;
  j["defined"] = defined != 0;
  j["entropy"] = defined ? Json(nats) : Json(nullptr);
  j["elapsed_ms"] = ms;
  j["warnings"] = in.warnings;

  std::ostringstream h;
  h << "traced out: " << bipartition << "\n"
    << "q: " << q << "\n";
  if (defined) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", nats);
    h << "entropy: " << buf << " nats\n";
  } else {
    h << "entropy: undefined (zero state, unsatisfiable)\n";
  }
  emit(j, json, in.warnings, h.str());
}

void run_physics(const std::string& path, double beta, bool json) {
  const auto start = std::chrono::steady_clock::now();
  auto in = load(path);
  double trace = 0.0;
  check(tns_partition_trace(in.formula.get(), beta, &trace));
  char* raw = nullptr;
  check(tns_oracle_count(in.formula.get(), 1, &raw));
  const std::string count = take_string(raw);
  const double ms = elapsed_since(start);

  Json j;
  j["command"] = "physics";
  j["input"] = describe(path);
  j["n"] = tns_formula_num_vars(in.formula.get());
  j["m"] = tns_formula_num_clauses(in.formula.get());
  j["beta"] = beta;
  j["partition_trace"] = trace;
  j["model_count"] = count;
  j["elapsed_ms"] = ms;
  j["warnings"] = in.warnings;

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", trace);
  std::ostringstream h;
  h << "beta: " << beta << "\n"
    << "Tr exp(-beta H): " << buf << "\n"
    << "model count: " << count << "\n";
  emit(j, json, in.warnings, h.str());
}

struct GenFlags {
  std::string mode;
  unsigned n = 0;
  unsigned m = 0;
  unsigned k = 3;
  unsigned r = 3;
  unsigned s = 3;
  unsigned leaves = 0;
  uint64_t seed = 0;
};

void run_gen(const GenFlags& g, bool json) {
  std::string text;
  if (g.mode == "rof") {
    tns_expr* raw = nullptr;
    check(tns_generate_rof(g.leaves, g.seed, &raw));
    ExprPtr e(raw);
    char* s = nullptr;
    check(tns_expr_to_string(e.get(), &s));
    text = take_string(s) + "\n";
  } else {
    tns_formula* raw = nullptr;
    if (g.mode == "ksat") {
      check(tns_generate_ksat(g.n, g.m, g.k, g.seed, &raw));
    } else if (g.mode == "rssat") {
      check(tns_generate_rssat(g.n, g.r, g.s, g.seed, &raw));
    } else {
      throw CliError{1, "unknown --mode " + g.mode + " (expected ksat, rssat or rof)"};
    }
    FormulaPtr f(raw);
    char* s = nullptr;
    check(tns_formula_to_dimacs(f.get(), &s));
    text = take_string(s);
  }
  if (json) {
    Json j;
    j["command"] = "gen";
    j["mode"] = g.mode;
    j["seed"] = g.seed;
    j["text"] = text;
    std::cout << j.dump() << '\n';
  } else {
    std::cout << text;
  }
}

void run_dump(const std::string& path) {
  auto in = load(path);
  char* raw = nullptr;
  check(tns_network_dump(in.formula.get(), &raw));
  for (const auto& w : in.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << take_string(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact #SAT model counting by COPY-tensor branching"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tns_version()));

  bool json = false;
  std::string path;
  CountFlags count_flags;
  unsigned oracle_threads = 1;
  std::string bipartition;
  double q = 2.0;
  double beta = 50.0;
  GenFlags gen;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("input", path, "DIMACS file, '-' or omitted for stdin");
    cmd->add_flag("--json", json, "print a one-line JSON report");
  };

  auto* count = app.add_subcommand("count", "exact model count");
  add_input(count);
  add_count_flags(count, count_flags);

  auto* solve = app.add_subcommand("solve", "satisfiability only, stops at the first nonzero branch");
  add_input(solve);
  add_count_flags(solve, count_flags);

  auto* stats = app.add_subcommand("stats", "network statistics and predicted cost");
  add_input(stats);

  auto* oracle = app.add_subcommand("oracle", "brute-force count (n <= 24)");
  add_input(oracle);
  oracle->add_option("--threads", oracle_threads, "workers, 0 = auto (default 1)");

  auto* entropy = app.add_subcommand("entropy", "Renyi entropy of the reduced Boolean state (n <= 14)");
  add_input(entropy);
  entropy->add_option("--bipartition", bipartition, "comma-separated variables traced out")->required();
  entropy->add_option("--q", q, "Renyi order, 1 = von Neumann (default 2)")->check(CLI::NonNegativeNumber);

  auto* physics = app.add_subcommand("physics", "low-temperature partition trace (n <= 14)");
  add_input(physics);
  physics->add_option("--beta", beta, "inverse temperature (default 50)")->check(CLI::NonNegativeNumber);

  auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
  gen_cmd->add_option("--mode", gen.mode, "ksat, rssat or rof")->required();
  gen_cmd->add_option("--n", gen.n, "variables");
  gen_cmd->add_option("--m", gen.m, "clauses (ksat)");
  gen_cmd->add_option("--k", gen.k, "clause width (ksat, default 3)");
  gen_cmd->add_option("--r", gen.r, "clause width (rssat, default 3)");
  gen_cmd->add_option("--s", gen.s, "max occurrences per variable (rssat, default 3)");
  gen_cmd->add_option("--leaves", gen.leaves, "leaves (rof)");
  gen_cmd->add_option("--seed", gen.seed, "generator seed (default 0)");
  gen_cmd->add_flag("--json", json, "wrap the output in a JSON object");

  auto* dump = app.add_subcommand("dump", "print the network adjacency list");
  dump->add_option("input", path, "DIMACS file, '-' or omitted for stdin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (count->parsed()) run_count(path, count_flags, json);
    else if (solve->parsed()) run_solve(path, count_flags, json);
    else if (stats->parsed()) run_stats(path, json);
    else if (oracle->parsed()) run_oracle(path, oracle_threads, json);
    else if (entropy->parsed()) run_entropy(path, bipartition, q, json);
    else if (physics->parsed()) run_physics(path, beta, json);
    else if (gen_cmd->parsed()) run_gen(gen, json);
    else if (dump->parsed()) run_dump(path);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
