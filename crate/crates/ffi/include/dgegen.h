#ifndef DGEGEN_H
#define DGEGEN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `B` with the `(s - x t)_+` kernel.
 */
#define DGEGEN_VARIANT_PLUS 0

/**
 * `B` with the `(s - x t)_-` kernel.
 */
#define DGEGEN_VARIANT_MINUS 1

#define DGEGEN_VARIANT_ABS 2

#define DGEGEN_VARIANT_ABSSGN 3

/**
 * Result code of every exported function.
 */
typedef enum DgegenStatus {
  DGEGEN_STATUS_OK = 0,
  DGEGEN_STATUS_NULL_POINTER = 1,
  DGEGEN_STATUS_DOMAIN = 2,
  DGEGEN_STATUS_POLE = 3,
  DGEGEN_STATUS_DIVERGENT = 4,
  DGEGEN_STATUS_NO_CONVERGENCE = 5,
  DGEGEN_STATUS_HYPOTHESIS = 6,
  DGEGEN_STATUS_PANIC = 7,
} DgegenStatus;

/**
 * Opaque coefficient table.
 */
typedef struct DgegenCoeffTable DgegenCoeffTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL after a
 * successful one. Valid until the next call on the same thread.
 */
const char *dgegen_last_error(void);

/**
 * `log |Gamma(x)|`.
 */
enum DgegenStatus dgegen_log_gamma(double x, double *out);

/**
 * `1 / Gamma(x)`, zero at the poles.
 */
enum DgegenStatus dgegen_rgamma(double x, double *out);

/**
 * Gauss hypergeometric `2F1(a, b; c; z)` for real `z <= 1`.
 */
enum DgegenStatus dgegen_hyp2f1(double a, double b, double c, double z, double *out);

/**
 * Gegenbauer polynomial `C_n^lambda(x)`.
 */
enum DgegenStatus dgegen_gegenbauer(double lambda, size_t n, double x, double *out);

/**
 * Single expansion coefficient `b_{l,m}`, zero for the wrong parity.
 */
enum DgegenStatus dgegen_coeff_b(double lambda,
                                 double mu,
                                 double nu,
                                 uint32_t eps,
                                 size_t ell,
                                 size_t m,
                                 double *out);

/**
 * Builds the table `b_{l,m}`, `0 <= l <= l_max`, `0 <= m <= m_max`. Release
 * it with [`dgegen_coeff_table_free`].
 */
enum DgegenStatus dgegen_coeff_table_new(double lambda,
                                         double mu,
                                         double nu,
                                         uint32_t eps,
                                         size_t l_max,
                                         size_t m_max,
                                         struct DgegenCoeffTable **out);

/**
 * Entry `(ell, m)` of a table; domain error outside its range.
 *
 * # Safety
 * `table` must be NULL or a live pointer from [`dgegen_coeff_table_new`].
 */
enum DgegenStatus dgegen_coeff_table_get(const struct DgegenCoeffTable *table,
                                         size_t ell,
                                         size_t m,
                                         double *out);

/**
 * Truncation orders the table was built with.
 *
 * # Safety
 * `table` must be NULL or a live pointer from [`dgegen_coeff_table_new`].
 */
enum DgegenStatus dgegen_coeff_table_dims(const struct DgegenCoeffTable *table,
                                          size_t *l_max,
                                          size_t *m_max);

/**
 * Releases a table. NULL is accepted.
 *
 * # Safety
 * `table` must be NULL or a pointer from [`dgegen_coeff_table_new`] that has
 * not been freed.
 */
void dgegen_coeff_table_free(struct DgegenCoeffTable *table);

/**
 * Truncated series at `(s, t)` with its tail bound. With `force` set the
 * convergence hypothesis is not enforced and the bound is infinite.
 */
enum DgegenStatus dgegen_series_eval(double lambda,
                                     double mu,
                                     double nu,
                                     uint32_t eps,
                                     double s,
                                     double t,
                                     size_t l_max,
                                     size_t m_max,
                                     bool force,
                                     double *value,
                                     double *tail_bound);

/**
 * Closed form of the sheared integral `B_{l,m}(x)` for a kernel variant.
 */
enum DgegenStatus dgegen_integral_b(uint32_t variant_code,
                                    double lambda,
                                    double mu,
                                    double nu,
                                    size_t ell,
                                    size_t m,
                                    double x,
                                    double *out);

/**
 * Quadrature value of the same integral, refined to `tol`.
 */
enum DgegenStatus dgegen_oracle_integral_b(uint32_t variant_code,
                                           double lambda,
                                           double mu,
                                           double nu,
                                           size_t ell,
                                           size_t m,
                                           double x,
                                           double tol,
                                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DGEGEN_H */
