#ifndef KONTACT_KONTACT_H
#define KONTACT_KONTACT_H

/* C interface to the kontact library. Every call returns a status code; on a
   nonzero status kontact_last_error() describes the failure (per thread).
   Strings returned through out-parameters are released with kontact_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KONTACT_API __declspec(dllexport)
#else
#define KONTACT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kontact_status {
  KONTACT_OK = 0,
  KONTACT_SYNTAX_ERROR,
  KONTACT_UNKNOWN_SYMBOL,
  KONTACT_ZERO_DENOMINATOR,
  KONTACT_POLE_AT_POINT,
  KONTACT_UNBOUND_SYMBOL,
  KONTACT_CHART_MISMATCH,
  KONTACT_DEGREE_ZERO,
  KONTACT_LENGTH_MISMATCH,
  KONTACT_RANK_OVERFLOW,
  KONTACT_NOT_KCONTACT,
  KONTACT_SINGULAR_SOLVE,
  KONTACT_NOT_HAMILTONIAN,
  KONTACT_NO_ANNIHILATOR,
  KONTACT_SYMMETRY_FAILURE,
  KONTACT_SPAN_FAILURE,
  KONTACT_NOT_MAX_NONINTEGRABLE,
  KONTACT_NOT_PROJECTABLE,
  KONTACT_NOT_CLOSED,
  KONTACT_DEGENERATE_FRAME,
  KONTACT_LAMBDA_NOT_CONSTANT,
  KONTACT_DEPENDENT_PROJECTIONS,
  KONTACT_SAMPLE_NOT_ON_ZERO_SET,
  KONTACT_POLE_ENCOUNTERED,
  KONTACT_DEGENERATE_SEEDS,
  KONTACT_UNKNOWN_EXAMPLE,
  KONTACT_INVALID_INPUT,
  KONTACT_INTERNAL,
  KONTACT_NULL_ARGUMENT
} kontact_status;

typedef struct kontact_space kontact_space;
typedef struct kontact_expr kontact_expr;

KONTACT_API const char* kontact_version(void);
KONTACT_API const char* kontact_last_error(void);
KONTACT_API const char* kontact_status_name(kontact_status s);
KONTACT_API void kontact_string_free(char* s);

/* Chart variables followed by opaque constants. */
KONTACT_API kontact_status kontact_space_new(const char* const* vars, size_t nvars, const char* const* consts,
                                             size_t nconsts, kontact_space** out);
KONTACT_API void kontact_space_free(kontact_space* s);

KONTACT_API kontact_status kontact_expr_parse(const kontact_space* s, const char* text, kontact_expr** out);
KONTACT_API void kontact_expr_free(kontact_expr* e);
KONTACT_API kontact_status kontact_expr_add(const kontact_expr* a, const kontact_expr* b, kontact_expr** out);
KONTACT_API kontact_status kontact_expr_sub(const kontact_expr* a, const kontact_expr* b, kontact_expr** out);
KONTACT_API kontact_status kontact_expr_mul(const kontact_expr* a, const kontact_expr* b, kontact_expr** out);
KONTACT_API kontact_status kontact_expr_div(const kontact_expr* a, const kontact_expr* b, kontact_expr** out);
KONTACT_API kontact_status kontact_expr_diff(const kontact_expr* e, const char* symbol, kontact_expr** out);
/* *equal is 1 when the canonical forms coincide. */
KONTACT_API kontact_status kontact_expr_equal(const kontact_expr* a, const kontact_expr* b, int* equal);
KONTACT_API kontact_status kontact_expr_str(const kontact_expr* e, char** out);
/* Values for every symbol the expression uses, by name. */
KONTACT_API kontact_status kontact_expr_eval(const kontact_expr* e, const char* const* names, const double* values,
                                             size_t n, double* out);

/* Runs a command ("check-kcontact", "closure", ..., "corpus") with a JSON request
   and stores the report and the diagnostic line (either may be empty).
   *exit_code follows the command line: 0 pass, 1 check failed, 2 input error. */
KONTACT_API kontact_status kontact_run(const char* command, const char* request_json, char** report,
                                       char** diagnostic, int* exit_code);

/* JSON array of registered corpus example names. */
KONTACT_API kontact_status kontact_corpus_names(char** out);

#ifdef __cplusplus
}
#endif

#endif
