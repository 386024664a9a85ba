#ifndef LOCMOM_H
#define LOCMOM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LM_RANGE_TAU 0

#define LM_RANGE_ALPHA 1

#define LM_SHAPE_EMPTY 0

#define LM_SHAPE_SEGMENT 1

/**
 * Complement of `(hi, lo)`: the parameter set is `(−∞, lo] ∪ [hi, ∞)`.
 */
#define LM_SHAPE_EXTERIOR 2

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum LmStatus {
  LM_STATUS_OK = 0,
  /**
   * Malformed input: bad sequence, non-positive Λ or tolerance, wrong lengths.
   */
  LM_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Well-formed but not solvable.
   */
  LM_STATUS_UNSOLVABLE = 2,
  /**
   * Parameter outside the admissible range.
   */
  LM_STATUS_OUT_OF_RANGE = 3,
  /**
   * Singular or boundary configuration (pole, degenerate system, atom on the gap edge).
   */
  LM_STATUS_DEGENERATE = 4,
  /**
   * Internal failure, including caught panics.
   */
  LM_STATUS_INTERNAL = 5,
  LM_STATUS_NULL_POINTER = 6,
} LmStatus;

/**
 * Opaque discrete measure.
 */
typedef struct LmMeasure LmMeasure;

/**
 * Opaque moment sequence.
 */
typedef struct LmMoments LmMoments;

/**
 * Admissible parameter set. Infinite bounds are IEEE infinities.
 */
typedef struct LmRange {
  int32_t kind;
  int32_t shape;
  double lo;
  double hi;
  bool unique;
} LmRange;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread; empty after a successful call.
 * The pointer stays valid until the next `lm_*` call on the same thread.
 */
const char *lm_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lm_version(void);

/**
 * Copies `len` values into a new moment sequence. `len` must be odd.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out_moments` must be writable.
 */
enum LmStatus lm_moments_new(const double *values, size_t len, struct LmMoments **out_moments);

/**
 * # Safety
 * `m` must come from [`lm_moments_new`] and not be used afterwards. Null is ignored.
 */
void lm_moments_free(struct LmMoments *m);

/**
 * Number of stored moments, or 0 for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t lm_moments_len(const struct LmMoments *m);

/**
 * Stieltjes solvability. An unsolvable sequence is not an error: the call
 * returns `Ok`, sets `*solvable = false` and leaves the failing condition
 * names in [`lm_last_error`].
 *
 * # Safety
 * `m` must be a live handle and `solvable` writable.
 */
enum LmStatus lm_check_stieltjes(const struct LmMoments *m, double tol, bool *solvable);

/**
 * Hausdorff solvability on `[0, lambda]`; see [`lm_check_stieltjes`].
 *
 * # Safety
 * `m` must be a live handle and `solvable` writable.
 */
enum LmStatus lm_check_hausdorff(const struct LmMoments *m,
                                 double lambda,
                                 double tol,
                                 bool *solvable);

/**
 * Solvability with gap `(0, lambda)`; see [`lm_check_stieltjes`].
 *
 * # Safety
 * `m` must be a live handle and `solvable` writable.
 */
enum LmStatus lm_check_gap(const struct LmMoments *m, double lambda, double tol, bool *solvable);

/**
 * Admissible τ for the Hausdorff problem. An empty range is reported
 * through `shape`, not as an error.
 *
 * # Safety
 * `m` must be a live handle and `range` writable.
 */
enum LmStatus lm_tau_range(const struct LmMoments *m,
                           double lambda,
                           double tol,
                           struct LmRange *range);

/**
 * Admissible α for the gap problem.
 *
 * # Safety
 * `m` must be a live handle and `range` writable.
 */
enum LmStatus lm_alpha_range(const struct LmMoments *m,
                             double lambda,
                             double tol,
                             struct LmRange *range);

/**
 * Canonical Stieltjes solution at `tau ≥ 0`.
 *
 * # Safety
 * `m` must be a live handle and `out_measure` writable.
 */
enum LmStatus lm_solve_stieltjes(const struct LmMoments *m,
                                 double tau,
                                 double tol,
                                 struct LmMeasure **out_measure);

/**
 * Canonical Hausdorff solution on `[0, lambda]` at `tau`.
 *
 * # Safety
 * `m` must be a live handle and `out_measure` writable.
 */
enum LmStatus lm_solve_hausdorff(const struct LmMoments *m,
                                 double lambda,
                                 double tau,
                                 double tol,
                                 struct LmMeasure **out_measure);

/**
 * Canonical gap solution at `alpha`.
 *
 * # Safety
 * `m` must be a live handle and `out_measure` writable.
 */
enum LmStatus lm_solve_gap(const struct LmMoments *m,
                           double lambda,
                           double alpha,
                           double tol,
                           struct LmMeasure **out_measure);

/**
 * Local problem: global moments `a` on ℝ, window moments `b` on `[0, lambda]`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out_measure` writable.
 */
enum LmStatus lm_solve_local(const struct LmMoments *a,
                             const struct LmMoments *b,
                             double lambda,
                             double tau,
                             double alpha,
                             double tol,
                             struct LmMeasure **out_measure);

/**
 * Number of atoms, or 0 for null.
 *
 * # Safety
 * `mu` must be null or a live handle.
 */
size_t lm_measure_len(const struct LmMeasure *mu);

/**
 * Copies atoms and masses (ascending atoms) into caller buffers of
 * capacity `cap`. Fails with `InvalidArgument` if `cap` is too small.
 * Either buffer may be null to skip it.
 *
 * # Safety
 * Non-null buffers must hold `cap` writable doubles.
 */
enum LmStatus lm_measure_copy(const struct LmMeasure *mu,
                              double *atoms,
                              double *masses,
                              size_t cap);

/**
 * # Safety
 * `mu` must come from an `lm_solve_*` call and not be used afterwards. Null is ignored.
 */
void lm_measure_free(struct LmMeasure *mu);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCMOM_H */
