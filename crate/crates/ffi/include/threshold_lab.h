#ifndef THRESHOLD_LAB_H
#define THRESHOLD_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum TlStatus {
  TL_OK = 0,
  TL_NULL_POINTER = 1,
  TL_INVALID_ARGUMENT = 2,
  TL_OUT_OF_BRANCH = 3,
  TL_NO_ROOT = 4,
  TL_NON_CONVERGENCE = 5,
  TL_NO_RELATION = 6,
  TL_INSUFFICIENT_PRECISION = 7,
  TL_AMBIGUOUS_NULLSPACE = 8,
  TL_DEGENERATE_INPUT = 9,
  TL_BUFFER_TOO_SMALL = 10,
  TL_IO = 11,
  TL_PANIC = 12,
} TlStatus;

/**
 * A band endpoint and its chain.
 */
typedef struct TlChain TlChain;

/**
 * An index set together with its solved coefficient vector.
 */
typedef struct TlSigma TlSigma;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *tl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tl_version(void);

/**
 * Band endpoint `E_n` for `κ`, bisected to `tol`.
 *
 * # Safety
 * `out_energy` must be a valid pointer to a `double`.
 */
enum TlStatus tl_band_endpoint(uint32_t kappa, uint32_t n, double tol, double *out_energy);

/**
 * Solves `E_n` and keeps its chain `X_0 … X_{n+1}`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum TlStatus tl_chain_new(uint32_t kappa, uint32_t n, double tol, struct TlChain **out);

/**
 * # Safety
 * `chain` must be null or a handle from [`tl_chain_new`] not yet freed.
 */
void tl_chain_free(struct TlChain *chain);

/**
 * # Safety
 * `chain` must be a live handle and `out_energy` a valid pointer.
 */
enum TlStatus tl_chain_energy(const struct TlChain *chain, double *out_energy);

/**
 * Number of chain points, `n + 2`; 0 for a null handle.
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
size_t tl_chain_len(const struct TlChain *chain);

/**
 * Copies the chain points into `buf`.
 *
 * # Safety
 * `chain` must be a live handle and `buf` valid for `cap` writes.
 */
enum TlStatus tl_chain_points(const struct TlChain *chain, double *buf, size_t cap);

/**
 * Builds an index set; entries must be increasing positive multiples of `κ`.
 *
 * # Safety
 * `indices` must be valid for `len` reads and `out` a valid handle slot.
 */
enum TlStatus tl_sigma_new(uint32_t kappa,
                           uint32_t band,
                           const uint32_t *indices,
                           size_t len,
                           struct TlSigma **out);

/**
 * # Safety
 * `sigma` must be null or a handle from [`tl_sigma_new`] not yet freed.
 */
void tl_sigma_free(struct TlSigma *sigma);

/**
 * Solves `Mρ = 0` (cached on the handle) and copies `ρ`, one entry per index, into `rho`.
 *
 * # Safety
 * `sigma` must be a live handle, not used concurrently, and `rho` valid for `cap` writes.
 */
enum TlStatus tl_sigma_solve(struct TlSigma *sigma, double *rho, size_t cap);

/**
 * Positivity scan on `e_grid × x_grid` interior samples. `out_valid` receives 1 or 0.
 *
 * # Safety
 * `sigma` must be a live handle; the output pointers must be valid.
 */
enum TlStatus tl_sigma_validate(const struct TlSigma *sigma,
                                size_t e_grid,
                                size_t x_grid,
                                double margin,
                                int32_t *out_valid,
                                double *out_min_value);

/**
 * Slope of `ln(E_{2n} − 2cos(π/κ))` against `ln n` over the given `n`.
 *
 * # Safety
 * `ns` must be valid for `len` reads and `out_slope` a valid pointer.
 */
enum TlStatus tl_rate_slope(uint32_t kappa, const uint32_t *ns, size_t len, double *out_slope);

/**
 * Minimal integer polynomial of `E_n`, ascending coefficients. The endpoint is refined to
 * `precision` bits and the lattice uses `precision / 2`. `out_degree` receives the degree;
 * `coeffs` must hold `degree + 1` values.
 *
 * # Safety
 * `coeffs` must be valid for `cap` writes and `out_degree` a valid pointer.
 */
enum TlStatus tl_minpoly(uint32_t kappa,
                         uint32_t n,
                         size_t precision,
                         size_t max_degree,
                         int64_t *coeffs,
                         size_t cap,
                         size_t *out_degree);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THRESHOLD_LAB_H */
