/*
 * tnsharp C API: exact #SAT by COPY-tensor branching over Boolean-state
 * tensor networks.
 *
 * Objects are opaque handles created by tns_* constructors and released by
 * the matching *_free function. Every fallible call returns a tns_status;
 * on failure tns_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread). Strings returned through char**
 * out-parameters are owned by the caller and released with tns_string_free.
 * Exact integers (counts, costs) cross the boundary as decimal strings.
 */
#ifndef TNSHARP_TNSHARP_H
#define TNSHARP_TNSHARP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TNS_API __declspec(dllexport)
#else
#define TNS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tns_status {
  TNS_OK = 0,
  TNS_PARSE_ERROR = 1,
  TNS_BRANCH_GUARD = 2,
  TNS_INTERNAL_ERROR = 3,
  TNS_INVALID_ARGUMENT = 4,
  TNS_TOO_LARGE = 5
} tns_status;

TNS_API const char* tns_version(void);
TNS_API const char* tns_last_error(void);
TNS_API void tns_string_free(char* s);

/* ---- CNF formulas ---- */

typedef struct tns_formula tns_formula;

TNS_API tns_status tns_formula_parse_dimacs(const char* text, size_t length, tns_formula** out);
TNS_API tns_status tns_formula_to_dimacs(const tns_formula* f, char** out);
TNS_API void tns_formula_free(tns_formula* f);
TNS_API uint32_t tns_formula_num_vars(const tns_formula* f);
TNS_API size_t tns_formula_num_clauses(const tns_formula* f);
/* Non-fatal parse diagnostics (header count mismatch, dropped tautologies). */
TNS_API size_t tns_formula_warning_count(const tns_formula* f);
TNS_API const char* tns_formula_warning(const tns_formula* f, size_t index);

TNS_API tns_status tns_generate_ksat(uint32_t n, size_t m, size_t k, uint64_t seed, tns_formula** out);
TNS_API tns_status tns_generate_rssat(uint32_t n, size_t r, size_t s, uint64_t seed, tns_formula** out);

/* ---- Boolean expressions ---- */

typedef struct tns_expr tns_expr;

TNS_API tns_status tns_expr_parse(const char* text, size_t length, tns_expr** out);
TNS_API tns_status tns_generate_rof(size_t leaves, uint64_t seed, tns_expr** out);
TNS_API tns_status tns_expr_to_string(const tns_expr* e, char** out);
TNS_API void tns_expr_free(tns_expr* e);
TNS_API uint32_t tns_expr_num_vars(const tns_expr* e);
TNS_API int tns_expr_is_read_once(const tns_expr* e);
/* Read-once satisfiability via the normalized tree contraction. */
TNS_API tns_status tns_rof_satisfiable(const tns_expr* e, int* satisfiable, double* normalized_value);
TNS_API tns_status tns_expr_oracle_count(const tns_expr* e, char** count);

/* ---- Network statistics ---- */

typedef struct tns_stats {
  uint64_t n; /* variables */
  uint64_t m; /* clauses */
  uint64_t g; /* gate tensors */
  uint64_t c; /* COPY-tensors */
  uint64_t d; /* largest COPY degree */
} tns_stats;

/* branch_bound (2^c) and predicted_cost ((g + c*d) 2^c) may be NULL. */
TNS_API tns_status tns_network_stats(const tns_formula* f, tns_stats* stats, char** branch_bound,
                                     char** predicted_cost);
TNS_API tns_status tns_network_dump(const tns_formula* f, char** out);

/* ---- Counting ---- */

typedef struct tns_count_options {
  uint32_t max_branch_vars; /* default 30 */
  int force;                /* nonzero: ignore max_branch_vars */
  uint32_t threads;         /* 0 = hardware concurrency */
  int contract_path;        /* nonzero: contract each residual forest tensor by tensor */
} tns_count_options;

TNS_API void tns_count_options_init(tns_count_options* options);

typedef struct tns_count_result tns_count_result;

/* options may be NULL for defaults. */
TNS_API tns_status tns_count(const tns_formula* f, const tns_count_options* options, tns_count_result** out);
TNS_API void tns_count_result_free(tns_count_result* r);
/* Decimal strings owned by the result. */
TNS_API const char* tns_count_result_model_count(const tns_count_result* r);
TNS_API const char* tns_count_result_branches_evaluated(const tns_count_result* r);
TNS_API const char* tns_count_result_predicted_cost(const tns_count_result* r);
TNS_API int tns_count_result_satisfiable(const tns_count_result* r);
TNS_API void tns_count_result_stats(const tns_count_result* r, tns_stats* stats);
TNS_API double tns_count_result_elapsed_ms(const tns_count_result* r);

TNS_API tns_status tns_is_satisfiable(const tns_formula* f, const tns_count_options* options, int* satisfiable);

/* Brute force over all 2^n assignments (n <= 24). */
TNS_API tns_status tns_oracle_count(const tns_formula* f, uint32_t threads, char** count);

/* ---- Dense-state analytics (n <= 14) ---- */

/* traced lists the variables of side A. *defined is 0 for the zero state,
 * in which case *nats is left untouched. q == 1 gives von Neumann entropy. */
TNS_API tns_status tns_renyi_entropy(const tns_formula* f, const uint32_t* traced, size_t traced_count, double q,
                                     int* defined, double* nats);
TNS_API tns_status tns_partition_trace(const tns_formula* f, double beta, double* trace);

#ifdef __cplusplus
}
#endif

#endif /* TNSHARP_TNSHARP_H */
