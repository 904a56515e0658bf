#ifndef CPUC_H
#define CPUC_H

/* Generated by cbindgen from cpuc-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of a C-ABI call.
 */
typedef enum CpucStatus {
  CPUC_STATUS_OK = 0,
  /**
   * Invalid input: bad dimensions, failed state/channel validation,
   * out-of-domain parameters.
   */
  CPUC_STATUS_INVALID_INPUT = 1,
  /**
   * Numerical failure: truncation tails, non-convergence.
   */
  CPUC_STATUS_NUMERICAL = 2,
  /**
   * A required pointer was null.
   */
  CPUC_STATUS_NULL_POINTER = 3,
  /**
   * Internal panic captured at the boundary.
   */
  CPUC_STATUS_INTERNAL = 4,
} CpucStatus;

/**
 * Channel classification by the vacuum output.
 */
typedef enum CpucChannelClass {
  CPUC_CHANNEL_CLASS_LOSSY = 0,
  CPUC_CHANNEL_CLASS_PHASE_INSENSITIVE = 1,
  CPUC_CHANNEL_CLASS_SQUEEZING = 2,
} CpucChannelClass;

/**
 * Opaque quantum state handle.
 */
typedef struct CpucDensityMatrix CpucDensityMatrix;

/**
 * Opaque ensemble handle (symbols accumulate; priors are validated when
 * an information quantity is computed).
 */
typedef struct CpucEnsemble CpucEnsemble;

/**
 * Opaque Kraus channel handle.
 */
typedef struct CpucKrausChannel CpucKrausChannel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the thread's last error message into `buffer` (NUL-terminated,
 * truncating when needed) and return the full message length in bytes.
 * A zero `capacity` or null `buffer` only queries the length.
 * # Safety
 * `buffer` must be null or valid for `capacity` writable bytes.
 */
uintptr_t cpuc_last_error_message(char *buffer, uintptr_t capacity);

/**
 * Capacity per unit cost of the fiducial Gaussian channel (η, Ñ, ω̃), in
 * nats per photon. `out_infinite` flags the unbounded (lossy) case, in
 * which `out_value` is not meaningful.
 * # Safety
 * `out_value` and `out_infinite` must be valid for writes.
 */
enum CpucStatus cpuc_gaussian_cpuc(double eta,
                                   double n_tilde,
                                   double omega_tilde,
                                   double *out_value,
                                   bool *out_infinite);

/**
 * Classification of the fiducial channel by its vacuum output.
 * # Safety
 * `out_class` must be valid for writes.
 */
enum CpucStatus cpuc_gaussian_classification(double eta,
                                             double n_tilde,
                                             double omega_tilde,
                                             enum CpucChannelClass *out_class);

/**
 * Thermal photons and quotient-form squeezing of the vacuum output.
 * # Safety
 * `out_n0` and `out_omega0` must be valid for writes.
 */
enum CpucStatus cpuc_gaussian_vacuum_output(double eta,
                                            double n_tilde,
                                            double omega_tilde,
                                            double *out_n0,
                                            double *out_omega0);

/**
 * Closed-form D(Λ[ρ]‖Λ[vacuum]) for an input Gaussian state
 * (N̄_in, ω_in, α = alpha_re + i·alpha_im).
 * # Safety
 * `out_value` and `out_infinite` must be valid for writes.
 */
enum CpucStatus cpuc_gaussian_relent_vs_vacuum(double eta,
                                               double n_tilde,
                                               double omega_tilde,
                                               double n_in,
                                               double omega_in,
                                               double alpha_re,
                                               double alpha_im,
                                               double *out_value,
                                               bool *out_infinite);

/**
 * One point of the photon-information-efficiency curve of a
 * phase-insensitive channel.
 * # Safety
 * `out_pie` and `out_capacity` must be valid for writes.
 */
enum CpucStatus cpuc_pie_point(double eta,
                               double n_tilde,
                               double omega_tilde,
                               double nbar,
                               double *out_pie,
                               double *out_capacity);

/**
 * Create a density matrix from `2*dim*dim` doubles (row-major,
 * interleaved re/im). Validates Hermiticity, positivity, and unit trace.
 * # Safety
 * `entries_re_im` must be valid for `2*dim*dim` reads; `out` must be
 * valid for writes.
 */
enum CpucStatus cpuc_density_new(uintptr_t dim,
                                 const double *entries_re_im,
                                 struct CpucDensityMatrix **out);

/**
 * Release a state handle. Null is a no-op.
 * # Safety
 * `state` must be null or a handle from this API, not yet freed.
 */
void cpuc_density_free(struct CpucDensityMatrix *state);

/**
 * Von Neumann entropy S(ρ) in nats.
 * # Safety
 * `state` must be a live handle; `out_value` must be valid for writes.
 */
enum CpucStatus cpuc_von_neumann_entropy(const struct CpucDensityMatrix *state, double *out_value);

/**
 * Quantum relative entropy D(ρ‖σ) in nats; `out_infinite` reports the
 * support-mismatch branch.
 * # Safety
 * `rho` and `sigma` must be live handles; the out-parameters must be
 * valid for writes.
 */
enum CpucStatus cpuc_relative_entropy(const struct CpucDensityMatrix *rho,
                                      const struct CpucDensityMatrix *sigma,
                                      double *out_value,
                                      bool *out_infinite);

/**
 * Create a Kraus channel from `n_kraus` stacked operators, each
 * `2*dim_out*dim_in` doubles (row-major, interleaved re/im). Validates
 * CPTP completeness.
 * # Safety
 * `ops_re_im` must be valid for `2*dim_out*dim_in*n_kraus` reads; `out`
 * must be valid for writes.
 */
enum CpucStatus cpuc_channel_new(uintptr_t dim_in,
                                 uintptr_t dim_out,
                                 uintptr_t n_kraus,
                                 const double *ops_re_im,
                                 struct CpucKrausChannel **out);

/**
 * Release a channel handle. Null is a no-op.
 * # Safety
 * `channel` must be null or a handle from this API, not yet freed.
 */
void cpuc_channel_free(struct CpucKrausChannel *channel);

/**
 * Apply the channel: `*out` receives a new state handle Λ[ρ].
 * # Safety
 * `channel` and `state` must be live handles; `out` must be valid for
 * writes.
 */
enum CpucStatus cpuc_channel_apply(const struct CpucKrausChannel *channel,
                                   const struct CpucDensityMatrix *state,
                                   struct CpucDensityMatrix **out);

/**
 * Create an empty ensemble over `dim`-dimensional states.
 * # Safety
 * `out` must be valid for writes.
 */
enum CpucStatus cpuc_ensemble_new(uintptr_t dim, struct CpucEnsemble **out);

/**
 * Release an ensemble handle. Null is a no-op.
 * # Safety
 * `ensemble` must be null or a handle from this API, not yet freed.
 */
void cpuc_ensemble_free(struct CpucEnsemble *ensemble);

/**
 * Append a (prior, cost, state) symbol. The state is copied; priors are
 * validated (sum to 1) when an information quantity is computed.
 * # Safety
 * `ensemble` and `state` must be live handles.
 */
enum CpucStatus cpuc_ensemble_push(struct CpucEnsemble *ensemble,
                                   double prior,
                                   double cost,
                                   const struct CpucDensityMatrix *state);

/**
 * Holevo information χ of the ensemble through `channel` (identity when
 * `channel` is null), in nats.
 * # Safety
 * `ensemble` must be a live handle; `channel` may be null; `out_value`
 * must be valid for writes.
 */
enum CpucStatus cpuc_holevo_chi(const struct CpucEnsemble *ensemble,
                                const struct CpucKrausChannel *channel,
                                double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPUC_H */
