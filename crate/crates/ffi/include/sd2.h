#ifndef SD2_H
#define SD2_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Sd2Status {
  SD2_STATUS_OK = 0,
  SD2_STATUS_NULL_POINTER = 1,
  SD2_STATUS_INVALID_PARAMS = 2,
  SD2_STATUS_SINGULAR = 3,
  SD2_STATUS_NO_CONVERGENCE = 4,
  SD2_STATUS_OUT_OF_RANGE = 5,
  SD2_STATUS_ISOTROPIC = 6,
  SD2_STATUS_ZERO_GAUGE = 7,
  SD2_STATUS_DIMENSION = 8,
  SD2_STATUS_FORMAT = 9,
  SD2_STATUS_BUFFER_TOO_SMALL = 10,
  SD2_STATUS_PANIC = 11,
} Sd2Status;

typedef enum Sd2Basis {
  SD2_BASIS_CARTESIAN = 0,
  SD2_BASIS_CIRCULAR_B1 = 1,
  SD2_BASIS_CIRCULAR_B2 = 2,
  SD2_BASIS_J2_EIGEN = 3,
} Sd2Basis;

typedef enum Sd2Generator {
  SD2_GENERATOR_J1 = 0,
  SD2_GENERATOR_J2 = 1,
  SD2_GENERATOR_J3 = 2,
  SD2_GENERATOR_RX = 3,
  SD2_GENERATOR_RY = 4,
  SD2_GENERATOR_H = 5,
  SD2_GENERATOR_CASIMIR = 6,
  SD2_GENERATOR_Q = 7,
} Sd2Generator;

typedef enum Sd2Operator {
  SD2_OPERATOR_J2 = 0,
  SD2_OPERATOR_J3 = 1,
  SD2_OPERATOR_Q = 2,
  SD2_OPERATOR_H = 3,
} Sd2Operator;

/**
 * Eigenvectors of `Q` or `J2` in the `B2` basis.
 */
typedef struct Sd2Eigvecs Sd2Eigvecs;

/**
 * Generator matrices of one representation in one basis.
 */
typedef struct Sd2Generators Sd2Generators;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the generators of the `(n + 1)`-dimensional module in the basis
 * `basis_id` (an [`Sd2Basis`] value).
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle to free
 * with [`sd2_generators_free`].
 */
enum Sd2Status sd2_generators_build(size_t n,
                                    double mu_x,
                                    double mu_y,
                                    int32_t basis_id,
                                    struct Sd2Generators **out);

/**
 * Generators in the `J2` eigenbasis with `gauge_len = floor(n/2)` (even `n`)
 * or `(n-1)/2` (odd `n`) nonzero gauge values.
 *
 * # Safety
 * `gauge` must be valid for `gauge_len` reads (may be null when zero);
 * `out` as in [`sd2_generators_build`].
 */
enum Sd2Status sd2_generators_build_gauged(size_t n,
                                           double mu_x,
                                           double mu_y,
                                           const double *gauge,
                                           size_t gauge_len,
                                           struct Sd2Generators **out);

/**
 * # Safety
 * `handle` must come from a build function and not be used afterwards.
 */
void sd2_generators_free(struct Sd2Generators *handle);

/**
 * Matrix dimension `n + 1`; zero for a null handle.
 *
 * # Safety
 * `handle` must be null or valid.
 */
size_t sd2_generators_dim(const struct Sd2Generators *handle);

/**
 * Copies one matrix (`which` is an [`Sd2Generator`] value), row-major, into `re` and `im` (each `len >= dim*dim`).
 *
 * # Safety
 * `handle` valid; `re`, `im` valid for `len` writes.
 */
enum Sd2Status sd2_generators_matrix(const struct Sd2Generators *handle,
                                     int32_t which,
                                     double *re,
                                     double *im,
                                     size_t len);

/**
 * Numerical eigenvalues of one matrix sorted by real part.
 *
 * # Safety
 * As for [`sd2_generators_matrix`], with `len >= dim`.
 */
enum Sd2Status sd2_generators_eigenvalues(const struct Sd2Generators *handle,
                                          int32_t which,
                                          double *re,
                                          double *im,
                                          size_t len);

/**
 * Closed-form spectrum of the [`Sd2Operator`] `op` (ascending, `n + 1` values).
 *
 * # Safety
 * `out` valid for `len` writes.
 */
enum Sd2Status sd2_spectrum_closed_form(size_t n,
                                        double mu_x,
                                        double mu_y,
                                        int32_t op,
                                        double *out,
                                        size_t len);

/**
 * Eigenvectors of `J2` (`q_operator == 0`) or `Q` (`q_operator != 0`).
 *
 * # Safety
 * `out` valid; free the result with [`sd2_eigvecs_free`].
 */
enum Sd2Status sd2_eigvecs_build(size_t n,
                                 double mu_x,
                                 double mu_y,
                                 int32_t q_operator,
                                 struct Sd2Eigvecs **out);

/**
 * # Safety
 * `handle` must come from [`sd2_eigvecs_build`].
 */
void sd2_eigvecs_free(struct Sd2Eigvecs *handle);

/**
 * Number of vectors in the table; zero for a null handle.
 *
 * # Safety
 * `handle` must be null or valid.
 */
size_t sd2_eigvecs_count(const struct Sd2Eigvecs *handle);

/**
 * Vector `index`: sector `k`, sign (+1 or -1), eigenvalue and `B2`
 * components (`len >= n + 1`).
 *
 * # Safety
 * All pointers valid.
 */
enum Sd2Status sd2_eigvecs_get(const struct Sd2Eigvecs *handle,
                               size_t index,
                               size_t *k,
                               int32_t *sign,
                               double *eigenvalue,
                               double *re,
                               double *im,
                               size_t len);

/**
 * Real transition matrix between `B1` and the Cartesian basis, row-major.
 *
 * # Safety
 * `out` valid for `len >= (n+1)^2` writes.
 */
enum Sd2Status sd2_transition_matrix(size_t n, double *out, size_t len);

/**
 * Runs the check suite for `N <= n_max` on the `(mu_x[i], mu_y[i])` grid.
 *
 * # Safety
 * `mu_x`, `mu_y` valid for `grid_len` reads; outputs valid.
 */
enum Sd2Status sd2_verify(size_t n_max,
                          const double *mu_x,
                          const double *mu_y,
                          size_t grid_len,
                          int32_t *passed,
                          size_t *n_checks,
                          size_t *n_failed);

/**
 * Copies the last error message of this thread (NUL-terminated, truncated
 * to `len - 1` bytes) and returns its full length in bytes.
 *
 * # Safety
 * `buf` must be null or valid for `len` writes.
 */
size_t sd2_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sd2_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SD2_H */
