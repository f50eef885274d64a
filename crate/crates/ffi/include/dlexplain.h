#ifndef DLEXPLAIN_H
#define DLEXPLAIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DlxStatus {
  DLX_STATUS_OK = 0,
  DLX_STATUS_NULL_ARGUMENT = 1,
  DLX_STATUS_INVALID_UTF8 = 2,
  DLX_STATUS_PARSE = 3,
  /**
   * Well-formed input that cannot be processed, such as an unknown example.
   */
  DLX_STATUS_DATA = 4,
  DLX_STATUS_INVALID_CONFIG = 5,
  DLX_STATUS_INTERNAL = 6,
} DlxStatus;

/**
 * A parsed and materialized knowledge base.
 */
typedef struct DlxKb DlxKb;

/**
 * Search settings. Ratios are given as numerator and denominator.
 */
typedef struct DlxConfig {
  size_t max_expansions;
  size_t max_length;
  size_t top_k;
  int64_t length_penalty_num;
  int64_t length_penalty_den;
  int64_t noise_num;
  int64_t noise_den;
  int64_t expansion_penalty_num;
  int64_t expansion_penalty_den;
  bool enable_disjunction;
} DlxConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default search settings.
 */
struct DlxConfig dlx_config_default(void);

/**
 * Parse `.dlkb` text and materialize it into `*out`.
 *
 * # Safety
 * `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DlxStatus dlx_kb_parse(const char *text_ptr, struct DlxKb **out);

/**
 * Release a knowledge base. Null is ignored.
 *
 * # Safety
 * `kb` must come from [`dlx_kb_parse`] and not be used afterwards.
 */
void dlx_kb_free(struct DlxKb *kb);

/**
 * Number of individuals in the knowledge base, or 0 for null.
 *
 * # Safety
 * `kb` must be null or a live handle.
 */
size_t dlx_kb_individual_count(const struct DlxKb *kb);

/**
 * Score `expr` against a problem (`+ ind` / `- ind` lines); writes a JSON object.
 *
 * # Safety
 * String arguments must be NUL-terminated; `kb` a live handle; `out` valid.
 */
enum DlxStatus dlx_verify(const struct DlxKb *kb,
                          const char *problem,
                          const char *expr,
                          char **out);

/**
 * Run the learner; writes the JSON report. A null `config` means defaults.
 *
 * # Safety
 * As for [`dlx_verify`]; `config` must be null or valid.
 */
enum DlxStatus dlx_learn(const struct DlxKb *kb,
                         const char *problem,
                         const struct DlxConfig *config,
                         char **out);

/**
 * Translate `<expr> => <expr>` into a first-order formula.
 *
 * # Safety
 * `axiom` must be NUL-terminated and `out` valid.
 */
enum DlxStatus dlx_translate(const char *axiom, char **out);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *dlx_last_error_message(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void dlx_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DLEXPLAIN_H */
