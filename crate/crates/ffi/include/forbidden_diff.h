#ifndef FORBIDDEN_DIFF_H
#define FORBIDDEN_DIFF_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every function.
 */
typedef enum {
  FDIFF_STATUS_OK = 0,
  FDIFF_STATUS_NULL_POINTER = 1,
  FDIFF_STATUS_INVALID_UTF8 = 2,
  FDIFF_STATUS_INVALID_SPEC = 3,
  FDIFF_STATUS_INVALID_ARGUMENT = 4,
  FDIFF_STATUS_OUT_OF_RANGE = 5,
  FDIFF_STATUS_BUDGET_EXHAUSTED = 6,
  FDIFF_STATUS_INVALID_WITNESS = 7,
  FDIFF_STATUS_IO = 8,
  FDIFF_STATUS_BUFFER_TOO_SMALL = 9,
  FDIFF_STATUS_INTERNAL = 10,
  FDIFF_STATUS_PANIC = 11,
} FdiffStatus;

/**
 * A value with an optional witness set.
 */
typedef struct FdiffResult FdiffResult;

/**
 * A parsed forbidden set.
 */
typedef struct FdiffSet FdiffSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call on the same thread. Never null.
 */
const char *fdiff_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fdiff_version(void);

/**
 * Parses a set specification such as `squares`, `primes-1` or `list:1,4,9`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
FdiffStatus fdiff_set_parse(const char *spec, FdiffSet **out);

/**
 * # Safety
 * `set` must come from [`fdiff_set_parse`] and not be freed twice. Null is ignored.
 */
void fdiff_set_free(FdiffSet *set);

/**
 * Membership test for a single integer.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
FdiffStatus fdiff_set_contains(const FdiffSet *set, int64_t value, bool *out);

/**
 * Computes D(X, n) exactly. `threads == 0` uses every core, `max_nodes == 0`
 * means no budget.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
FdiffStatus fdiff_compute_d(const FdiffSet *set,
                            uint64_t n,
                            uint32_t threads,
                            uint64_t max_nodes,
                            FdiffResult **out);

/**
 * Greedy X-set in [1, n]. The value is a lower bound on D(X, n).
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
FdiffStatus fdiff_greedy(const FdiffSet *set, uint64_t n, FdiffResult **out);

/**
 * Local density d_X(m). The result holds `d` as value, `m` as denominator
 * and the optimal residues as witness.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
FdiffStatus fdiff_local_density(const FdiffSet *set,
                                uint64_t m,
                                uint32_t threads,
                                FdiffResult **out);

/**
 * Evaluates a closed form: `primes`, `squares+1` or `squares+2-lb`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
FdiffStatus fdiff_formula(const char *name, uint64_t n, FdiffResult **out);

/**
 * Checks that no two elements of `values` differ by a member of the set.
 *
 * # Safety
 * `set` must be a live handle, `values` must point to `len` integers
 * (may be null when `len == 0`), and `valid` must be a valid pointer.
 */
FdiffStatus fdiff_validate_witness(const FdiffSet *set,
                                   const int64_t *values,
                                   uintptr_t len,
                                   bool *valid);

/**
 * # Safety
 * `result` must be a live handle.
 */
uint64_t fdiff_result_value(const FdiffResult *result);

/**
 * Denominator for density results, 1 otherwise.
 *
 * # Safety
 * `result` must be a live handle.
 */
uint64_t fdiff_result_denominator(const FdiffResult *result);

/**
 * Search nodes expanded, when the result came from a search.
 *
 * # Safety
 * `result` must be a live handle.
 */
uint64_t fdiff_result_nodes(const FdiffResult *result);

/**
 * # Safety
 * `result` must be a live handle.
 */
uintptr_t fdiff_result_witness_len(const FdiffResult *result);

/**
 * Copies the witness into `buf`. Fails with `BufferTooSmall` if `cap` is
 * less than the witness length; `written` always receives that length.
 *
 * # Safety
 * `result` must be a live handle, `buf` must have room for `cap` integers,
 * `written` may be null.
 */
FdiffStatus fdiff_result_witness_copy(const FdiffResult *result,
                                      int64_t *buf,
                                      uintptr_t cap,
                                      uintptr_t *written);

/**
 * # Safety
 * `result` must come from this library and not be freed twice. Null is ignored.
 */
void fdiff_result_free(FdiffResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORBIDDEN_DIFF_H */
