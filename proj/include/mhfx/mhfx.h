#ifndef MHFX_H
#define MHFX_H

/* C interface to the mhfx eps-expansion engine.
 *
 * Every function returns an mhfx_status. On failure the message of the most
 * recent error on the calling thread is available from mhfx_last_error().
 * Strings returned through char** are owned by the caller and released with
 * mhfx_string_free(). JSON layouts are described in docs/schema.md. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mhfx_status {
  MHFX_OK = 0,
  MHFX_IDENTICALLY_ZERO,
  MHFX_CONSTANT_POLE,
  MHFX_INTEGER_PARAMETER,
  MHFX_UNSUPPORTED_FORM,
  MHFX_MIXED_SIGN_FORM,
  MHFX_NOT_NORMALIZED,
  MHFX_SINGULAR_LOWER,
  MHFX_TRUNCATION_TOO_SHALLOW,
  MHFX_DENOMINATOR_ZERO,
  MHFX_GAMMA_POLE_UNHANDLED,
  MHFX_SCHEMA_ERROR,
  MHFX_NORMALIZATION_ERROR,
  MHFX_INVALID_ARGUMENT,
  MHFX_UNKNOWN_CASE,
  MHFX_INTERNAL_ERROR
} mhfx_status;

/* A sum of prefactor * MHF terms. */
typedef struct mhfx_problem mhfx_problem;
/* Symbolic eps expansions of the MHFs of a problem. */
typedef struct mhfx_expansion mhfx_expansion;

const char* mhfx_status_name(mhfx_status s);
const char* mhfx_last_error(void);
void mhfx_string_free(char* s);

mhfx_status mhfx_problem_parse(const char* json, mhfx_problem** out);
mhfx_status mhfx_problem_load(const char* path, mhfx_problem** out);
void mhfx_problem_free(mhfx_problem* p);
/* Canonical JSON of the problem. */
mhfx_status mhfx_problem_to_json(const mhfx_problem* p, char** out);

/* {"terms": [{"taylor": bool, "singular": [...], "pole_depth": n}]} */
mhfx_status mhfx_classify(const mhfx_problem* p, char** out);

/* Orders up to `order` of every MHF in the problem. */
mhfx_status mhfx_expand(const mhfx_problem* p, int order, mhfx_expansion** out);
void mhfx_expansion_free(mhfx_expansion* e);
mhfx_status mhfx_expansion_to_json(const mhfx_expansion* e, char** out);
mhfx_status mhfx_expansion_to_text(const mhfx_expansion* e, char** out);

/* Numeric eps coefficients of the problem through `order` at a point, or the
 * direct value when options carry "eps". options: {"mode", "N", "prec_bits",
 * "tail_tol", "eps"}; NULL takes the defaults. */
mhfx_status mhfx_eval(const mhfx_problem* p, int order, const char* point_json,
                      const char* options_json, char** out);

/* Finite-difference eps fit of a single-MHF problem, side by side with the
 * symbolic coefficients. options: {"N", "h", "extra_points", "digits"}. */
mhfx_status mhfx_oracle(const mhfx_problem* p, int order, const char* point_json,
                        const char* options_json, char** out);

/* Annihilator of summation index `index` of a single-MHF problem. options:
 * {"eps", "point", "N"}; with a point the truncated residual is reported. */
mhfx_status mhfx_annihilate(const mhfx_problem* p, int index, const char* options_json,
                            char** out);

/* Runs one fixture by name, or every fixture for "all". fixture_dir may be
 * NULL for the built-in fixture directory. *passed is 1 when every check
 * passed. */
mhfx_status mhfx_verify(const char* name, const char* fixture_dir, int* passed, char** out);

#ifdef __cplusplus
}
#endif

#endif
