#ifndef QLAPLACE_H
#define QLAPLACE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum QlStatus {
  QL_STATUS_OK = 0,
  QL_STATUS_NULL_POINTER = 1,
  QL_STATUS_INVALID_UTF8 = 2,
  QL_STATUS_INVALID_ARGUMENT = 3,
  QL_STATUS_CONFIG_ERROR = 4,
  QL_STATUS_DOMAIN_ERROR = 5,
  QL_STATUS_UNSUPPORTED = 6,
  QL_STATUS_NOT_CONVERGED = 7,
  QL_STATUS_NUMERICAL_ERROR = 8,
  QL_STATUS_PANIC = 9,
} QlStatus;

typedef enum QlTailPolicy {
  QL_TAIL_POLICY_POWER_LAW_EXTRAPOLATE = 0,
  QL_TAIL_POLICY_COMPACTIFY = 1,
} QlTailPolicy;

/**
 * Which transform [`ql_transform`] evaluates.
 */
typedef enum QlVariant {
  QL_VARIANT_BILATERAL = 0,
  QL_VARIANT_UNILATERAL = 1,
  /**
   * The function's own index is set to `q` before transforming.
   */
  QL_VARIANT_FIXED = 2,
  QL_VARIANT_CLASS = 3,
  /**
   * Classical Laplace transform; `q` is ignored.
   */
  QL_VARIANT_CLASSICAL = 4,
} QlVariant;

/**
 * Opaque handle to a parsed function description.
 */
typedef struct QlFunction QlFunction;

typedef struct QlQuadratureConfig {
  double rel_tol;
  double abs_tol;
  size_t max_subdivisions;
  enum QlTailPolicy tail_policy;
} QlQuadratureConfig;

typedef struct QlComplex {
  double re;
  double im;
} QlComplex;

typedef struct QlTransformResult {
  struct QlComplex value;
  double abs_err;
  /**
   * Whether the quadrature met its tolerance; the value is still returned
   * with status `Ok` when it did not.
   */
  bool converged;
} QlTransformResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ql_last_error_message(void);

/**
 * Library version as a NUL-terminated string with static lifetime.
 */
const char *ql_version(void);

/**
 * Default quadrature settings.
 */
struct QlQuadratureConfig ql_quadrature_default(void);

/**
 * Parses a JSON function description such as `{"kind": "heaviside_step"}`
 * into a new handle stored in `*out`. Release it with [`ql_function_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QlStatus ql_function_from_json(const char *json, struct QlFunction **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `f` must come from [`ql_function_from_json`] and not be freed twice.
 */
void ql_function_free(struct QlFunction *f);

/**
 * Evaluates the transform of `f` at `(p, q)`. `cfg` may be null for the
 * default quadrature settings.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_transform(const struct QlFunction *f,
                           enum QlVariant variant,
                           struct QlComplex p,
                           double q,
                           const struct QlQuadratureConfig *cfg,
                           struct QlTransformResult *out);

/**
 * q-partition function of the density of states `f` at inverse temperature
 * `b`. With `pr` set, the density's own index follows `q`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum QlStatus ql_partition(const struct QlFunction *f,
                           struct QlComplex b,
                           double q,
                           bool pr,
                           const struct QlQuadratureConfig *cfg,
                           struct QlTransformResult *out);

/**
 * q-exponential `e_q(u)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QlStatus ql_q_exp(struct QlComplex u, double q, struct QlComplex *out);

/**
 * q-logarithm `ln_q(v)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QlStatus ql_q_log(struct QlComplex v, double q, struct QlComplex *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLAPLACE_H */
