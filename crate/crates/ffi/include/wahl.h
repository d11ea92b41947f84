#ifndef WAHL_H
#define WAHL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WahlStatus {
  WAHL_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  WAHL_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not UTF-8.
   */
  WAHL_STATUS_INVALID_UTF8 = 2,
  /**
   * A string argument was not a decimal integer.
   */
  WAHL_STATUS_PARSE_ERROR = 3,
  /**
   * The inputs violate a mathematical precondition.
   */
  WAHL_STATUS_DOMAIN_ERROR = 4,
  /**
   * `wahl_command_json` was given an invalid command line.
   */
  WAHL_STATUS_USAGE_ERROR = 5,
  /**
   * Internal failure; please report.
   */
  WAHL_STATUS_PANIC = 6,
} WahlStatus;

/**
 * Rank, canonical degree and `c2` of an exceptional bundle class on P².
 */
typedef struct WahlBundleClass WahlBundleClass;

/**
 * A Markov triple, sorted ascending.
 */
typedef struct WahlMarkovTriple WahlMarkovTriple;

/**
 * A cyclic quotient singularity `1/r(1, q)` in normal form.
 */
typedef struct WahlQuotient WahlQuotient;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a success.
 * Valid until the next call into this library from the same thread.
 */
const char *wahl_last_error(void);

/**
 * Library version as a static string.
 */
const char *wahl_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void wahl_string_free(char *s);

/**
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum WahlStatus wahl_markov_new(const char *a,
                                const char *b,
                                const char *c,
                                struct WahlMarkovTriple **out);

/**
 * # Safety
 * `t` must come from this library and not have been freed. NULL is ignored.
 */
void wahl_markov_free(struct WahlMarkovTriple *t);

/**
 * Entry `pos` (0, 1 or 2) of the sorted triple.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_markov_entry(const struct WahlMarkovTriple *t, size_t pos, char **out);

/**
 * Mutation at `pos` of the sorted triple; the result is sorted again.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_markov_mutate(const struct WahlMarkovTriple *t,
                                   size_t pos,
                                   struct WahlMarkovTriple **out);

/**
 * Number of triples whose largest entry is at most `max`.
 *
 * # Safety
 * `max` must be NUL-terminated; `out` must be writable.
 */
enum WahlStatus wahl_markov_count(const char *max, size_t *out);

/**
 * `1/r(1, q)` in normal form.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum WahlStatus wahl_quotient_new(const char *r, const char *q, struct WahlQuotient **out);

/**
 * The Wahl singularity `1/n²(1, na - 1)`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum WahlStatus wahl_quotient_of_wahl(const char *n, const char *a, struct WahlQuotient **out);

/**
 * What remains of `1/n²(1, na - 1)` after contracting every curve of its
 * resolution chain except the first.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum WahlStatus wahl_quotient_contraction(const char *n, const char *a, struct WahlQuotient **out);

/**
 * # Safety
 * `c` must come from this library and not have been freed. NULL is ignored.
 */
void wahl_quotient_free(struct WahlQuotient *c);

/**
 * Order `r`; `"1"` for a smooth point.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_quotient_order(const struct WahlQuotient *c, char **out);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_quotient_twist(const struct WahlQuotient *c, char **out);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_quotient_is_smooth(const struct WahlQuotient *c, bool *out);

/**
 * Minimal resolution chain, e.g. `"[3, 5, 2]"`; `"[]"` when smooth.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_quotient_chain(const struct WahlQuotient *c, char **out);

/**
 * Text form such as `"1/25(1,9)"`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_quotient_to_string(const struct WahlQuotient *c, char **out);

/**
 * Class of rank `r` and degree `d`, with `d` reduced to its canonical
 * representative and the exceptional `c2`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum WahlStatus wahl_bundle_class_new(const char *r, const char *d, struct WahlBundleClass **out);

/**
 * # Safety
 * `b` must come from this library and not have been freed. NULL is ignored.
 */
void wahl_bundle_class_free(struct WahlBundleClass *b);

/**
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_bundle_class_rank(const struct WahlBundleClass *b, char **out);

/**
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_bundle_class_degree(const struct WahlBundleClass *b, char **out);

/**
 * `c2` as `"p"` or `"p/q"`.
 *
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_bundle_class_c2(const struct WahlBundleClass *b, char **out);

/**
 * Bundle class attached to the entry at `pos` of the sorted triple.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_phi_forward(const struct WahlMarkovTriple *t,
                                 size_t pos,
                                 struct WahlBundleClass **out);

/**
 * The unique triple mapping to `b`.
 *
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum WahlStatus wahl_phi_backward(const struct WahlBundleClass *b, struct WahlMarkovTriple **out);

/**
 * Runs a command line without the program name, e.g.
 * `{"wahl", "resolve", "5", "2"}`, and returns
 * its JSON record. `--format json` is appended.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; `out` must be writable.
 */
enum WahlStatus wahl_command_json(size_t argc, const char *const *argv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAHL_H */
