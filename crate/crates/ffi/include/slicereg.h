#ifndef SLICEREG_H
#define SLICEREG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_POINTER,
  SR_STATUS_INVALID_UTF8,
  SR_STATUS_SYNTAX_ERROR,
  SR_STATUS_UNKNOWN_IDENTIFIER,
  SR_STATUS_NUMERIC_ONLY,
  SR_STATUS_INVALID_ARGUMENT,
  SR_STATUS_REAL_BASE_POINT,
  SR_STATUS_REAL_POINT_NOT_EXTENDABLE,
  SR_STATUS_NOT_A_UNIT,
  SR_STATUS_NOT_REGULAR,
  SR_STATUS_INEXACT,
  SR_STATUS_TRUNCATION_TOO_SHORT,
  SR_STATUS_ILL_CONDITIONED,
  SR_STATUS_TOO_FEW_SAMPLES,
  SR_STATUS_STEP_TOO_LARGE,
  SR_STATUS_DIVISION_BY_ZERO,
  SR_STATUS_NEGATIVE_POWER_AT_ZERO,
  SR_STATUS_ALL_COEFFICIENTS_ZERO,
  /**
   * A verification suite ran but some check failed.
   */
  SR_STATUS_CHECK_FAILED,
  SR_STATUS_PANIC,
} SrStatus;

/**
 * Opaque parsed function.
 */
typedef struct SrFunction SrFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next call.
 */
const char *sr_last_error_message(void);

/**
 * Byte offset of the last syntax error on this thread, or -1.
 */
int64_t sr_last_error_offset(void);

/**
 * Parses `text` into a new function handle stored in `*out`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum SrStatus sr_function_parse(const char *text, struct SrFunction **out);

/**
 * Releases a handle from [`sr_function_parse`]. NULL is ignored.
 *
 * # Safety
 * `f` must come from `sr_function_parse` and not be freed twice.
 */
void sr_function_free(struct SrFunction *f);

/**
 * `out = f(x)` in floating point.
 *
 * # Safety
 * `f` must be a live handle; `x` and `out` must point to 4 doubles.
 */
enum SrStatus sr_function_eval(const struct SrFunction *f, const double *x, double *out);

/**
 * Spherical coefficients `s_0..=s_n` at `q0`, written to `out` as
 * `4 (n + 1)` doubles.
 *
 * # Safety
 * `f` must be a live handle, `q0` must point to 4 doubles and `out` to
 * `4 (n + 1)` doubles.
 */
enum SrStatus sr_spherical_coefficients(const struct SrFunction *f,
                                        const double *q0,
                                        size_t n,
                                        double *out);

/**
 * Expansion of `f` at `q0` (both in expression syntax) as JSON
 * `{"q0", "N", "coeffs"}`; exact rationals unless `as_float` is nonzero.
 * Free the result with [`sr_string_free`].
 *
 * # Safety
 * `f` and `q0` must be nul-terminated strings and `out` a valid pointer.
 */
enum SrStatus sr_expand_json(const char *f, const char *q0, size_t n, int32_t as_float, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sr_string_free(char *s);

/**
 * Runs a verification suite. `kmax < 0` selects the suite default.
 * Returns `SR_STATUS_OK` iff every check passed; the counts are written
 * when the pointers are non-NULL.
 *
 * # Safety
 * `suite` must be a nul-terminated string; `passed` and `total` NULL or valid.
 */
enum SrStatus sr_verify_suite(const char *suite,
                              uint64_t seed,
                              int32_t kmax,
                              size_t *passed,
                              size_t *total);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLICEREG_H */
