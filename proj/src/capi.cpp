#include "tnsharp/tnsharp.h"

#include "tnsharp/counter.hpp"
#include "tnsharp/oracle.hpp"
#include "tnsharp/state.hpp"

#include <cmath>
#include <cstring>
#include <string>

struct tns_formula {
  tnsharp::Formula formula;
  std::vector<std::string> warnings;
};

struct tns_expr {
  tnsharp::BoolExpr expr;
};

struct tns_count_result {
  std::string model_count;
  std::string branches_evaluated;
  std::string predicted_cost;
  bool satisfiable = false;
  tns_stats stats{};
  double elapsed_ms = 0.0;
};

namespace {

thread_local std::string g_last_error;

tns_status fail(tns_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
tns_status guarded(Fn&& fn) {
  try {
    fn();
    return TNS_OK;
  } catch (const tnsharp::ParseError& e) {
    return fail(TNS_PARSE_ERROR, e.what());
  } catch (const tnsharp::BranchGuardExceeded& e) {
    return fail(TNS_BRANCH_GUARD, e.what());
  } catch (const tnsharp::TooLarge& e) {
    return fail(TNS_TOO_LARGE, e.what());
  } catch (const tnsharp::InvalidArgument& e) {
    return fail(TNS_INVALID_ARGUMENT, e.what());
  } catch (const tnsharp::InvariantViolation& e) {
    return fail(TNS_INTERNAL_ERROR, std::string("internal invariant violated: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(TNS_TOO_LARGE, "out of memory");
  } catch (const std::exception& e) {
    return fail(TNS_INTERNAL_ERROR, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw tnsharp::InvalidArgument(std::string(what) + " must not be NULL");
}

tns_stats to_c(const tnsharp::NetworkStats& s) { return tns_stats{s.n, s.m, s.g, s.c, s.d}; }

tnsharp::CountOptions from_c(const tns_count_options* options) {
  tns_count_options o;
  tns_count_options_init(&o);
  if (options != nullptr) o = *options;
  tnsharp::CountOptions out;
  out.max_branch_vars = o.max_branch_vars;
  out.force = o.force != 0;
  out.threads = o.threads;
  out.path = o.contract_path != 0 ? tnsharp::CountOptions::Path::Contract : tnsharp::CountOptions::Path::Fast;
  return out;
}

}  // namespace

extern "C" {

const char* tns_version(void) { return "1.0.0"; }

const char* tns_last_error(void) { return g_last_error.c_str(); }

void tns_string_free(char* s) { std::free(s); }

tns_status tns_formula_parse_dimacs(const char* text, size_t length, tns_formula** out) {
  return guarded([&] {
    require(out, "out");
    require(text, "text");
    auto doc = tnsharp::parse_dimacs(std::string_view(text, length));
    *out = new tns_formula{std::move(doc.formula), std::move(doc.warnings)};
  });
}

tns_status tns_formula_to_dimacs(const tns_formula* f, char** out) {
  return guarded([&] {
    require(f, "formula");
    require(out, "out");
    *out = duplicate(tnsharp::to_dimacs(f->formula));
  });
}

void tns_formula_free(tns_formula* f) { delete f; }

uint32_t tns_formula_num_vars(const tns_formula* f) { return f ? f->formula.num_vars() : 0; }

size_t tns_formula_num_clauses(const tns_formula* f) { return f ? f->formula.num_clauses() : 0; }

size_t tns_formula_warning_count(const tns_formula* f) { return f ? f->warnings.size() : 0; }

const char* tns_formula_warning(const tns_formula* f, size_t index) {
  if (f == nullptr || index >= f->warnings.size()) return nullptr;
  return f->warnings[index].c_str();
}

tns_status tns_generate_ksat(uint32_t n, size_t m, size_t k, uint64_t seed, tns_formula** out) {
  return guarded([&] {
    require(out, "out");
    *out = new tns_formula{tnsharp::generate_random_ksat(n, m, k, seed), {}};
  });
}

tns_status tns_generate_rssat(uint32_t n, size_t r, size_t s, uint64_t seed, tns_formula** out) {
  return guarded([&] {
    require(out, "out");
    *out = new tns_formula{tnsharp::generate_rs_sat(n, r, s, seed), {}};
  });
}

tns_status tns_expr_parse(const char* text, size_t length, tns_expr** out) {
  return guarded([&] {
    require(out, "out");
    require(text, "text");
    *out = new tns_expr{tnsharp::parse_expression(std::string_view(text, length))};
  });
}

tns_status tns_generate_rof(size_t leaves, uint64_t seed, tns_expr** out) {
  return guarded([&] {
    require(out, "out");
    *out = new tns_expr{tnsharp::generate_random_rof(leaves, seed)};
  });
}

tns_status tns_expr_to_string(const tns_expr* e, char** out) {
  return guarded([&] {
    require(e, "expr");
    require(out, "out");
    *out = duplicate(e->expr.to_string());
  });
}

void tns_expr_free(tns_expr* e) { delete e; }

uint32_t tns_expr_num_vars(const tns_expr* e) { return e ? e->expr.num_vars() : 0; }

int tns_expr_is_read_once(const tns_expr* e) { return e && tnsharp::expr_to_cnf_readonce_check(e->expr) ? 1 : 0; }

tns_status tns_rof_satisfiable(const tns_expr* e, int* satisfiable, double* normalized_value) {
  return guarded([&] {
    require(e, "expr");
    const auto check = tnsharp::rof_satisfiable(e->expr);
    if (satisfiable) *satisfiable = check.satisfiable ? 1 : 0;
    if (normalized_value) *normalized_value = check.normalized_value;
  });
}

tns_status tns_expr_oracle_count(const tns_expr* e, char** count) {
  return guarded([&] {
    require(e, "expr");
    require(count, "count");
    *count = duplicate(tnsharp::to_decimal(tnsharp::brute_force_count_expr(e->expr)));
  });
}

tns_status tns_network_stats(const tns_formula* f, tns_stats* stats, char** branch_bound, char** predicted_cost) {
  return guarded([&] {
    require(f, "formula");
    const auto s = tnsharp::network_stats(tnsharp::build_boolean_network(f->formula));
    if (stats) *stats = to_c(s);
    if (branch_bound) *branch_bound = duplicate(tnsharp::to_decimal(s.branch_bound));
    if (predicted_cost) *predicted_cost = duplicate(tnsharp::to_decimal(tnsharp::predicted_cost(s)));
  });
}

tns_status tns_network_dump(const tns_formula* f, char** out) {
  return guarded([&] {
    require(f, "formula");
    require(out, "out");
    *out = duplicate(tnsharp::dump(tnsharp::build_boolean_network(f->formula)));
  });
}

void tns_count_options_init(tns_count_options* options) {
  if (options == nullptr) return;
  options->max_branch_vars = 30;
  options->force = 0;
  options->threads = 1;
  options->contract_path = 0;
}

tns_status tns_count(const tns_formula* f, const tns_count_options* options, tns_count_result** out) {
  return guarded([&] {
    require(f, "formula");
    require(out, "out");
    const auto r = tnsharp::count_models(f->formula, from_c(options));
    auto* result = new tns_count_result;
    result->model_count = tnsharp::to_decimal(r.model_count);
    result->branches_evaluated = tnsharp::to_decimal(r.branches_evaluated);
    result->predicted_cost = tnsharp::to_decimal(tnsharp::predicted_cost(r.stats));
    result->satisfiable = r.satisfiable;
    result->stats = to_c(r.stats);
    result->elapsed_ms = std::chrono::duration<double, std::milli>(r.elapsed).count();
    *out = result;
  });
}

void tns_count_result_free(tns_count_result* r) { delete r; }

const char* tns_count_result_model_count(const tns_count_result* r) { return r ? r->model_count.c_str() : nullptr; }

const char* tns_count_result_branches_evaluated(const tns_count_result* r) {
  return r ? r->branches_evaluated.c_str() : nullptr;
}

const char* tns_count_result_predicted_cost(const tns_count_result* r) {
  return r ? r->predicted_cost.c_str() : nullptr;
}

int tns_count_result_satisfiable(const tns_count_result* r) { return r && r->satisfiable ? 1 : 0; }

void tns_count_result_stats(const tns_count_result* r, tns_stats* stats) {
  if (r && stats) *stats = r->stats;
}

double tns_count_result_elapsed_ms(const tns_count_result* r) { return r ? r->elapsed_ms : 0.0; }

tns_status tns_is_satisfiable(const tns_formula* f, const tns_count_options* options, int* satisfiable) {
  return guarded([&] {
    require(f, "formula");
    require(satisfiable, "satisfiable");
    *satisfiable = tnsharp::is_satisfiable(f->formula, from_c(options)) ? 1 : 0;
  });
}

tns_status tns_oracle_count(const tns_formula* f, uint32_t threads, char** count) {
  return guarded([&] {
    require(f, "formula");
    require(count, "count");
    *count = duplicate(tnsharp::to_decimal(tnsharp::brute_force_count(f->formula, threads)));
  });
}

tns_status tns_renyi_entropy(const tns_formula* f, const uint32_t* traced, size_t traced_count, double q, int* defined,
                             double* nats) {
  return guarded([&] {
    require(f, "formula");
    require(defined, "defined");
    if (traced_count > 0) require(traced, "traced");
    std::vector<tnsharp::Var> vars(traced, traced + traced_count);
    const auto state = tnsharp::dense_state(f->formula);
    const auto part = tnsharp::Bipartition::tracing_out(f->formula.num_vars(), vars);
    const auto h = q == 1.0 ? tnsharp::von_neumann_entropy(state, part) : tnsharp::renyi_entropy(state, part, q);
    *defined = h.defined() ? 1 : 0;
    if (h.defined() && nats) *nats = *h.nats;
  });
}

tns_status tns_partition_trace(const tns_formula* f, double beta, double* trace) {
  return guarded([&] {
    require(f, "formula");
    require(trace, "trace");
    *trace = tnsharp::partition_trace(f->formula, beta);
  });
}

}  // extern "C"
