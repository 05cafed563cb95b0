#ifndef FRACINV_H
#define FRACINV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum FracinvStatus {
  FRACINV_STATUS_OK = 0,
  FRACINV_STATUS_NULL_POINTER = 1,
  FRACINV_STATUS_INVALID_ARGUMENT = 2,
  FRACINV_STATUS_LENGTH_MISMATCH = 3,
  FRACINV_STATUS_NUMERICAL_FAILURE = 4,
  FRACINV_STATUS_IO = 5,
  FRACINV_STATUS_CONFIG = 6,
  FRACINV_STATUS_PANIC = 7,
} FracinvStatus;

/**
 * A parsed experiment configuration.
 */
typedef struct FracinvConfig FracinvConfig;

/**
 * Orders, Hurst index and quadrature settings for kernel queries and
 * ensemble simulation.
 */
typedef struct FracinvModel FracinvModel;

/**
 * Output of a reconstruction run.
 */
typedef struct FracinvReconstruction FracinvReconstruction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Length in bytes of the last error message on this thread, excluding the
 * terminating NUL; 0 after a successful call.
 */
size_t fracinv_last_error_length(void);

/**
 * Copy the last error message into `buf` (NUL-terminated, truncated to
 * `capacity - 1` bytes). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `capacity` writable bytes.
 */
size_t fracinv_last_error_message(char *buf, size_t capacity);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fracinv_version(void);

/**
 * Create a model from `count` increasing orders and a Hurst index.
 *
 * # Safety
 * `orders` must point to `count` doubles; `out` must be writable.
 */
enum FracinvStatus fracinv_model_new(const double *orders,
                                     size_t count,
                                     double hurst,
                                     struct FracinvModel **out);

/**
 * # Safety
 * `model` must come from [`fracinv_model_new`] and not be used afterwards.
 */
void fracinv_model_free(struct FracinvModel *model);

/**
 * Variance kernel `R(omega)`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum FracinvStatus fracinv_model_variance_kernel(const struct FracinvModel *model,
                                                 double omega,
                                                 double *out);

/**
 * Frequency symbol `s(omega)` as real and imaginary parts.
 *
 * # Safety
 * `model` must be a live handle; `re` and `im` must be writable.
 */
enum FracinvStatus fracinv_model_symbol(const struct FracinvModel *model,
                                        double omega,
                                        double *re,
                                        double *im);

/**
 * Green function `G_omega(x, y)` for `x, y` in `[0, 1]`.
 *
 * # Safety
 * `model` must be a live handle; `re` and `im` must be writable.
 */
enum FracinvStatus fracinv_model_green(const struct FracinvModel *model,
                                       double omega,
                                       double x,
                                       double y,
                                       double *re,
                                       double *im);

/**
 * Boundary traces for `paths` fBm paths, row-major into `out`
 * (`paths * (steps + 1)` doubles). `source` holds `f(t_n)`, `n = 0..=steps`.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum FracinvStatus fracinv_model_simulate(const struct FracinvModel *model,
                                          double t_final,
                                          size_t steps,
                                          size_t intervals,
                                          const double *source,
                                          size_t source_len,
                                          size_t paths,
                                          uint64_t seed,
                                          double *out,
                                          size_t out_len);

/**
 * Path `index` of the fBm ensemble keyed by `seed` on `intervals` cells;
 * writes `intervals + 1` values.
 *
 * # Safety
 * `out` must point to `out_len` writable doubles.
 */
enum FracinvStatus fracinv_fbm_path(double hurst,
                                    size_t intervals,
                                    uint64_t seed,
                                    uint64_t index,
                                    double *out,
                                    size_t out_len);

/**
 * Parse a configuration from NUL-terminated text.
 *
 * # Safety
 * `text` must be a valid C string; `out` must be writable.
 */
enum FracinvStatus fracinv_config_from_str(const char *text, struct FracinvConfig **out);

/**
 * Parse a configuration file.
 *
 * # Safety
 * `path` must be a valid C string; `out` must be writable.
 */
enum FracinvStatus fracinv_config_from_file(const char *path, struct FracinvConfig **out);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum FracinvStatus fracinv_config_set_seed(struct FracinvConfig *config, uint64_t seed);

/**
 * Number of time nodes `N + 1`, or 0 for a null handle.
 *
 * # Safety
 * `config` must be null or a live handle.
 */
size_t fracinv_config_signal_len(const struct FracinvConfig *config);

/**
 * # Safety
 * `config` must come from a `fracinv_config_from_*` call and not be used
 * afterwards.
 */
void fracinv_config_free(struct FracinvConfig *config);

/**
 * Run the reconstruction pipeline. With `source == NULL` the configured
 * source is used; otherwise `source` holds `N + 1` samples.
 *
 * # Safety
 * `config` must be a live handle, `source` null or valid for `source_len`
 * doubles, and `out` writable.
 */
enum FracinvStatus fracinv_reconstruct(const struct FracinvConfig *config,
                                       const double *source,
                                       size_t source_len,
                                       struct FracinvReconstruction **out);

/**
 * Length of the reconstructed signal, or 0 for a null handle.
 *
 * # Safety
 * `rec` must be null or a live handle.
 */
size_t fracinv_reconstruction_len(const struct FracinvReconstruction *rec);

/**
 * Copy the reconstructed `|f(t_n)|` into `out`.
 *
 * # Safety
 * `rec` must be a live handle and `out` valid for `out_len` doubles.
 */
enum FracinvStatus fracinv_reconstruction_signal(const struct FracinvReconstruction *rec,
                                                 double *out,
                                                 size_t out_len);

/**
 * Relative l2 error against the source used for the run, and whether the
 * solver met its tolerance.
 *
 * # Safety
 * `rec` must be a live handle; `error` and `converged` must be writable.
 */
enum FracinvStatus fracinv_reconstruction_summary(const struct FracinvReconstruction *rec,
                                                  double *error,
                                                  bool *converged);

/**
 * # Safety
 * `rec` must come from [`fracinv_reconstruct`] and not be used afterwards.
 */
void fracinv_reconstruction_free(struct FracinvReconstruction *rec);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACINV_H */
