#ifndef LSPACE_H
#define LSPACE_H

/* C API for the lspace library. Commands take JSON documents (or key=value
 * parameters) and return a rendered report plus a pass flag. All returned
 * strings are owned by the handle and freed with it. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LSPACE_OK = 0,     /* report produced, all checks pass */
  LSPACE_EMATH = 1,  /* report produced, a check certifies a failure */
  LSPACE_EINPUT = 2  /* malformed input, cap overflow, or unknown command */
} lspace_status;

typedef struct lspace_config {
  unsigned word_cap;       /* symmetric word length bound */
  unsigned degree_cap;     /* polynomial form degree bound */
  unsigned branch_bound;   /* tower branch enumeration bound */
  int strict_overflow;     /* nonzero: error on truncation, never drop */
  int json_output;         /* nonzero: machine (JSON) report */
} lspace_config;

/* Defaults: word cap 3, degree cap 2, branch bound 8, strict, text output. */
void lspace_config_init(lspace_config* config);

typedef struct lspace_result lspace_result;

/* Run one subcommand (validate, cohomology, mc-verify, mc-solve, mc-path,
 * descent-check, zoo, aksz-certify). document_json may be NULL for zoo and
 * aksz-certify; params_json is NULL or a flat JSON object of strings, e.g.
 * {"model": "gx", "dim": "2"}. On LSPACE_OK / LSPACE_EMATH, *result holds the
 * report; on LSPACE_EINPUT it holds the error message. */
lspace_status lspace_run(const char* command, const char* document_json,
                         const char* params_json, const lspace_config* config,
                         lspace_result** result);

/* Rendered report (or error message), NUL-terminated. */
const char* lspace_result_text(const lspace_result* result);
/* 1 when every check passed. */
int lspace_result_pass(const lspace_result* result);
void lspace_result_free(lspace_result* result);

#ifdef __cplusplus
}
#endif

#endif
