#ifndef WHMC_H
#define WHMC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum WhmcStatus {
  WHMC_STATUS_OK = 0,
  WHMC_STATUS_NULL_POINTER = 1,
  WHMC_STATUS_INVALID_PARAMETER = 2,
  WHMC_STATUS_DOMAIN = 3,
  WHMC_STATUS_CONTRACT = 4,
  WHMC_STATUS_ROOT_BRACKET = 5,
  WHMC_STATUS_NON_FINITE = 6,
  WHMC_STATUS_CONFIG = 7,
  WHMC_STATUS_IO = 8,
  WHMC_STATUS_PANIC = 9,
} WhmcStatus;

/**
 * Functional selector for [`whmc_mc_estimate`].
 */
typedef enum WhmcFunctionalKind {
  /**
   * `τ_u ∧ t`; parameters unused.
   */
  WHMC_FUNCTIONAL_KIND_FIRST_PASSAGE_TIME = 0,
  /**
   * `1{τ_u ≤ s}` with `s = param1`.
   */
  WHMC_FUNCTIONAL_KIND_INDICATOR_CDF = 1,
  /**
   * `e^{-q τ_u} 1{overshoot ≤ y}` with `q = param1`, `y = param2`.
   */
  WHMC_FUNCTIONAL_KIND_DISCOUNTED_OVERSHOOT_INDICATOR = 2,
} WhmcFunctionalKind;

/**
 * Opaque Lévy model handle.
 */
typedef struct WhmcModel WhmcModel;

/**
 * Opaque random stream handle.
 */
typedef struct WhmcRng WhmcRng;

/**
 * Opaque Wiener-Hopf factor sampler handle.
 */
typedef struct WhmcSampler WhmcSampler;

/**
 * β-family parameters; side 1 is positive jumps, side 2 negative jumps.
 */
typedef struct WhmcBetaParams {
  double c1;
  double alpha1;
  double beta1;
  double lambda1;
  double c2;
  double alpha2;
  double beta2;
  double lambda2;
  double sigma;
  double a;
} WhmcBetaParams;

typedef struct WhmcEstimate {
  double value;
  double std_error;
  double ci95_low;
  double ci95_high;
  uint64_t samples;
  uint64_t steps_consumed;
} WhmcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *whmc_last_error(void);

/**
 * Creates a Brownian motion `drift·t + volatility·W_t`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum WhmcStatus whmc_model_new_brownian(double drift, double volatility, struct WhmcModel **out);

/**
 * Creates a β-family model.
 *
 * # Safety
 * `params` must point to a readable `WhmcBetaParams`; `out` as above.
 */
enum WhmcStatus whmc_model_new_beta(const struct WhmcBetaParams *params, struct WhmcModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from `whmc_model_new_*` not yet freed.
 */
void whmc_model_free(struct WhmcModel *model);

/**
 * Evaluates `q + Ψ(iζ)`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum WhmcStatus whmc_eval_psi_shifted(const struct WhmcModel *model,
                                      double q,
                                      double zeta,
                                      double *out);

/**
 * Builds samplers for `X̄_{e(q)}` and `X̲_{e(q)}`, keeping `truncation_n`
 * factors per side for the β-family (ignored for Brownian motion).
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum WhmcStatus whmc_sampler_new(const struct WhmcModel *model,
                                 double q,
                                 size_t truncation_n,
                                 struct WhmcSampler **out);

/**
 * # Safety
 * `sampler` must be NULL or a live handle from `whmc_sampler_new`.
 */
void whmc_sampler_free(struct WhmcSampler *sampler);

/**
 * Upper bound on the mean-square error caused by truncating the factors.
 *
 * # Safety
 * `sampler` must be a live handle and `out` writable.
 */
enum WhmcStatus whmc_sampler_truncation_bound(const struct WhmcSampler *sampler, double *out);

/**
 * Random stream `stream` of master seed `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WhmcStatus whmc_rng_new(uint64_t seed, uint32_t stream, struct WhmcRng **out);

/**
 * # Safety
 * `rng` must be NULL or a live handle from `whmc_rng_new`.
 */
void whmc_rng_free(struct WhmcRng *rng);

/**
 * Fills `out[0..len]` with draws of the supremum factor (`>= 0`).
 *
 * # Safety
 * `sampler` and `rng` must be live handles; `out` must hold `len` doubles.
 */
enum WhmcStatus whmc_sample_sup(const struct WhmcSampler *sampler,
                                struct WhmcRng *rng,
                                double *out,
                                size_t len);

/**
 * Fills `out[0..len]` with draws of the infimum factor (`<= 0`).
 *
 * # Safety
 * As for [`whmc_sample_sup`].
 */
enum WhmcStatus whmc_sample_inf(const struct WhmcSampler *sampler,
                                struct WhmcRng *rng,
                                double *out,
                                size_t len);

/**
 * WHMC estimate of `E[f]` with `n` steps over `[0, t]`, `m` trials and
 * `workers` random substreams of `seed`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum WhmcStatus whmc_mc_estimate(const struct WhmcModel *model,
                                 enum WhmcFunctionalKind kind,
                                 double param1,
                                 double param2,
                                 double u,
                                 double t,
                                 size_t n,
                                 uint64_t m,
                                 size_t truncation_n,
                                 uint64_t seed,
                                 size_t workers,
                                 struct WhmcEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WHMC_H */
