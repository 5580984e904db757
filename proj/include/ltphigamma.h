/* ltphigamma: Lubin-Tate (phi, Gamma) operator calculus, C interface.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function.  Strings returned through char** are allocated by
 * the library and released with ltpg_string_free.  Every call returns an
 * ltpg_status; on failure ltpg_last_error() describes the problem (the message
 * is thread local and valid until the next failing call on the same thread).
 */
#ifndef LTPHIGAMMA_H
#define LTPHIGAMMA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LTPG_API __declspec(dllexport)
#else
#define LTPG_API __attribute__((visibility("default")))
#endif

#define LTPG_ABI_VERSION 1
#define LTPG_REPORT_SCHEMA "ltpg-report/1"

typedef enum ltpg_status {
  LTPG_OK = 0,
  LTPG_E_INV_OF_ZERO,
  LTPG_E_PRECISION_EXHAUSTED,
  LTPG_E_DOMAIN,
  LTPG_E_EMPTY_WINDOW,
  LTPG_E_COMPOSITION_DOMAIN,
  LTPG_E_NOT_REVERSIBLE,
  LTPG_E_NON_INTEGRAL_SCALAR,
  LTPG_E_DEGREE_BUDGET,
  LTPG_E_INV_OF_NON_UNIT,
  LTPG_E_LEVEL_MISMATCH,
  LTPG_E_NON_UNIT_SCALAR,
  LTPG_E_NOT_IN_MAXIMAL_IDEAL,
  LTPG_E_UNSOLVABLE,
  LTPG_E_OPERATOR_DIVERGES,
  LTPG_E_OBSTRUCTED_EXACTLY,
  LTPG_E_IMAGE_OBSTRUCTION,
  LTPG_E_WINDOW_TOO_SMALL,
  LTPG_E_NON_INVERTIBLE_PHI,
  LTPG_E_COMMUTATION_FAILURE,
  LTPG_E_NOT_SUBGROUP,
  LTPG_E_SINGULAR,
  LTPG_E_OBSTRUCTION_NONZERO,
  LTPG_E_KERNEL_AMBIGUITY,
  LTPG_E_JET_ORDER_EXCEEDED,
  LTPG_E_POLE_UNCANCELLED,
  LTPG_E_RESIDUE_OBSTRUCTION,
  LTPG_E_UNSUPPORTED_BASE,
  LTPG_E_INFEASIBLE,
  LTPG_E_PARSE,
  LTPG_E_INVALID_ARGUMENT,
  LTPG_E_NULL_ARGUMENT = 100,
  LTPG_E_INTERNAL = 101
} ltpg_status;

typedef struct ltpg_config {
  int p;                  /* residue characteristic */
  int f;                  /* residue degree, q = p^f */
  int N;                  /* pi-adic working precision */
  int M;                  /* T-adic truncation order */
  int nmax;               /* top tower level for Kummer sequences */
  int jet_order;          /* t-jet order for big-exponential reports */
  uint64_t seed;          /* seed of the randomized suites and fixtures */
  const int64_t* unit_u;  /* coordinates of the unit u in [pi](T) = T^q + pi T; NULL for 1 */
  size_t unit_u_len;
} ltpg_config;

typedef struct ltpg_ctx ltpg_ctx;
typedef struct ltpg_series ltpg_series;
typedef struct ltpg_elem ltpg_elem;

LTPG_API int ltpg_abi_version(void);
LTPG_API void ltpg_config_default(ltpg_config* cfg);
LTPG_API const char* ltpg_status_name(ltpg_status s);
LTPG_API const char* ltpg_last_error(void);
LTPG_API void ltpg_string_free(char* s);

LTPG_API ltpg_status ltpg_ctx_new(const ltpg_config* cfg, ltpg_ctx** out);
LTPG_API void ltpg_ctx_free(ltpg_ctx* ctx);
/* q and pi as strings, the configuration echoed back as JSON. */
LTPG_API ltpg_status ltpg_ctx_describe(const ltpg_ctx* ctx, char** json);

/* Series literals: "c_k*T^k + ... + O(T^M)", coefficients in w, pi, p, q and rationals.
 * Literals passed to this interface are exact unless they carry a "mod pi^k" suffix. */
LTPG_API ltpg_status ltpg_series_parse(ltpg_ctx* ctx, const char* literal, ltpg_series** out);
LTPG_API ltpg_status ltpg_series_str(const ltpg_series* s, char** out);
/* Minimum valuation of the coefficients with exponent in [lo, hi). */
LTPG_API ltpg_status ltpg_series_valuation(const ltpg_series* s, int lo, int hi, int* out);
LTPG_API ltpg_status ltpg_series_sub(const ltpg_series* a, const ltpg_series* b, ltpg_series** out);
LTPG_API void ltpg_series_free(ltpg_series* s);

/* op: phi, psi_q (psi), gamma (arg: unit of O_F), partial (d), nabla, res, antiderivative,
 * theta_b, t, x0.  res returns the residue as a constant series.  arg may be NULL. */
LTPG_API ltpg_status ltpg_apply(ltpg_ctx* ctx, const char* op, const ltpg_series* in, const char* arg,
                                ltpg_series** out);
/* Same, with a JSON report (inputs, output, precision ledger). */
LTPG_API ltpg_status ltpg_apply_report(ltpg_ctx* ctx, const char* op, const char* series, const char* arg,
                                       char** json);

/* kind: psi-a ((psi - a) g = f) or one-minus-aphi ((a phi - 1) g = f).  report may be NULL. */
LTPG_API ltpg_status ltpg_solve(ltpg_ctx* ctx, const char* kind, const ltpg_series* f, const char* a,
                                ltpg_series** out, char** report);

/* Tower elements: "poly in u @level n". */
LTPG_API ltpg_status ltpg_elem_parse(ltpg_ctx* ctx, const char* literal, ltpg_elem** out);
LTPG_API ltpg_status ltpg_elem_str(const ltpg_elem* x, char** out);
LTPG_API void ltpg_elem_free(ltpg_elem* x);
LTPG_API ltpg_status ltpg_tower_eval(ltpg_ctx* ctx, const ltpg_series* f, int level, ltpg_elem** out);
LTPG_API ltpg_status ltpg_tower_trace(ltpg_ctx* ctx, const ltpg_elem* x, int level, ltpg_elem** out);
LTPG_API ltpg_status ltpg_tower_galois(ltpg_ctx* ctx, const char* a, const ltpg_elem* x, ltpg_elem** out);

/* what: log, exp, pi, torsion (arg: level), scalar (arg: element of O_F), law.  JSON with the
 * series (law: coefficient table to total degree order). */
LTPG_API ltpg_status ltpg_lt(ltpg_ctx* ctx, const char* what, int order, const char* arg, char** json);

/* Verification suites ("all" runs every suite).  *passed is set to 1 when every check holds;
 * a failing suite is not an error. */
LTPG_API ltpg_status ltpg_suite_names(char** json);
LTPG_API ltpg_status ltpg_verify(ltpg_ctx* ctx, const char* suite, char** json, int* passed);

/* Big exponential of a filtered phi-module given as JSON
 * {"dim": r, "phi": [[a_11, ...], ...], "h": k, "f": [series, ...]} (h < 0 keeps the fixture h;
 * f defaults to a seeded psi = 0 element). */
LTPG_API ltpg_status ltpg_bigexp(ltpg_ctx* ctx, const char* fixture_json, int h, char** json, int* passed);

/* action: build {"z": elem, "nmax": n}, interp {"x": [elem, ...], "window": W},
 * check {"z": elem} or {"x": [...]}.  Residuals are compared with N - 5. */
LTPG_API ltpg_status ltpg_kummer(ltpg_ctx* ctx, const char* action, const char* input_json, char** json,
                                 int* passed);

#ifdef __cplusplus
}
#endif

#endif /* LTPHIGAMMA_H */
