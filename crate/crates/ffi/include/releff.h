#ifndef RELEFF_H
#define RELEFF_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every C-ABI call.
 */
typedef enum ReleffStatus {
  /**
   * Success.
   */
  ReleffStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  ReleffStatus_NullPointer = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  ReleffStatus_InvalidUtf8 = 2,
  /**
   * An argument violated a precondition (range, size, config).
   */
  ReleffStatus_InvalidArgument = 3,
  /**
   * The two samples live on incompatible scales.
   */
  ReleffStatus_ScaleMismatch = 4,
  /**
   * An estimation routine received an empty sample.
   */
  ReleffStatus_EmptySample = 5,
  /**
   * Inference needs at least two observations per sample.
   */
  ReleffStatus_SampleTooSmall = 6,
  /**
   * The requested statistic is degenerate (zero variance, 0/0).
   */
  ReleffStatus_Degenerate = 7,
} ReleffStatus;

/**
 * State of an extended (possibly infinite or undefined) effect value.
 */
typedef enum ReleffExtendedState {
  ReleffExtendedState_Finite = 0,
  ReleffExtendedState_PlusInfinity = 1,
  ReleffExtendedState_Undefined = 2,
} ReleffExtendedState;

/**
 * An immutable sample of exactly ordered outcomes (opaque).
 */
typedef struct ReleffSample ReleffSample;

/**
 * An extended effect value; `value` is meaningful only in the finite state.
 */
typedef struct ReleffExtended {
  enum ReleffExtendedState state;
  double value;
} ReleffExtended;

/**
 * Pair counts and the derived effect estimates.
 *
 * For binary comparisons the counts are zero and `lambda_wr` equals the
 * classical odds ratio.
 */
typedef struct ReleffEffects {
  uint64_t wins;
  uint64_t ties;
  uint64_t losses;
  uint64_t n_pairs;
  double p_plus;
  double p_zero;
  double p_minus;
  double theta;
  struct ReleffExtended lambda_so;
  struct ReleffExtended lambda_wr;
} ReleffEffects;

/**
 * Brunner-Munzel test result. When `degenerate` is non-zero the statistic,
 * degrees of freedom and p-value are NaN.
 */
typedef struct ReleffTestResult {
  double theta_hat;
  double variance;
  double df;
  double statistic;
  double p_value;
  uint8_t degenerate;
} ReleffTestResult;

/**
 * A two-sided confidence interval; `upper` may be positive infinity.
 */
typedef struct ReleffInterval {
  double lower;
  double upper;
  double level;
} ReleffInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *releff_version(void);

/**
 * Message of the most recent error on this thread, as a NUL-terminated
 * string. Valid until the next failing call on the same thread; do not
 * free.
 */
const char *releff_last_error_message(void);

/**
 * Creates a numeric sample from fixed-point mantissas.
 *
 * Each value is `mantissas[i] * 10^(-decimals)`; `decimals` must be at most
 * 9 and mantissas at most 10^15 in magnitude, so ties are exact.
 *
 * # Safety
 *
 * `label` must be a valid NUL-terminated string, `mantissas` must point to
 * `len` readable values, and `out` must be a valid destination pointer. On
 * success the caller owns the handle and must release it with
 * [`releff_sample_free`].
 */
enum ReleffStatus releff_sample_numeric(const char *label,
                                        const int64_t *mantissas,
                                        size_t len,
                                        uint8_t decimals,
                                        struct ReleffSample **out);

/**
 * Creates an ordinal sample from 0-based category indices.
 *
 * `categories` lists the `n_categories` category names in rank order;
 * `indices[i]` selects the category of observation `i`.
 *
 * # Safety
 *
 * All pointers must be valid for their stated lengths and every category
 * name must be a NUL-terminated string. On success the caller owns the
 * handle and must release it with [`releff_sample_free`].
 */
enum ReleffStatus releff_sample_ordinal(const char *label,
                                        const char *const *categories,
                                        size_t n_categories,
                                        const uint32_t *indices,
                                        size_t len,
                                        struct ReleffSample **out);

/**
 * Number of observations in a sample; 0 for a null handle.
 *
 * # Safety
 *
 * `sample` must be null or a live handle from a `releff_sample_*`
 * constructor.
 */
size_t releff_sample_len(const struct ReleffSample *sample);

/**
 * Releases a sample handle; null is a no-op.
 *
 * # Safety
 *
 * `sample` must be null or a live handle that is not used afterwards.
 */
void releff_sample_free(struct ReleffSample *sample);

/**
 * Computes pair counts and all effect estimates of `a` versus `b`.
 *
 * # Safety
 *
 * `a` and `b` must be live sample handles and `out` a valid destination.
 */
enum ReleffStatus releff_effects(const struct ReleffSample *a,
                                 const struct ReleffSample *b,
                                 struct ReleffEffects *out);

/**
 * Effects for dichotomous outcomes with success rates `q_a` and `q_b` in
 * `[0, 1]`. `lambda_wr` equals the classical odds ratio.
 *
 * # Safety
 *
 * `out` must be a valid destination pointer.
 */
enum ReleffStatus releff_binary_effects(double q_a, double q_b, struct ReleffEffects *out);

/**
 * Brunner-Munzel test of even treatment effect (theta = 1/2).
 *
 * Returns `Ok` with `degenerate = 1` (and NaN statistic fields) when the
 * variance estimate collapses; both samples need at least two
 * observations.
 *
 * # Safety
 *
 * `a` and `b` must be live sample handles and `out` a valid destination.
 */
enum ReleffStatus releff_brunner_munzel(const struct ReleffSample *a,
                                        const struct ReleffSample *b,
                                        struct ReleffTestResult *out);

/**
 * Range-preserving logit confidence interval for theta at `level` in
 * (0, 1); bounds are strictly inside (0, 1).
 *
 * # Safety
 *
 * `a` and `b` must be live sample handles and `out` a valid destination.
 */
enum ReleffStatus releff_ci_theta_logit(const struct ReleffSample *a,
                                        const struct ReleffSample *b,
                                        double level,
                                        struct ReleffInterval *out);

/**
 * Confidence interval for the success odds (exp of the logit-scale theta
 * bounds).
 *
 * # Safety
 *
 * `a` and `b` must be live sample handles and `out` a valid destination.
 */
enum ReleffStatus releff_ci_lambda_so(const struct ReleffSample *a,
                                      const struct ReleffSample *b,
                                      double level,
                                      struct ReleffInterval *out);

/**
 * Seeded percentile-bootstrap confidence interval for the win ratio;
 * `reps >= 100`. The same seed always yields the same interval; the upper
 * bound may be positive infinity.
 *
 * # Safety
 *
 * `a` and `b` must be live sample handles and `out` a valid destination.
 */
enum ReleffStatus releff_ci_lambda_wr_bootstrap(const struct ReleffSample *a,
                                                const struct ReleffSample *b,
                                                double level,
                                                uint32_t reps,
                                                uint64_t seed,
                                                struct ReleffInterval *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELEFF_H */
