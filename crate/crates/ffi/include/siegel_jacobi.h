/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef SIEGEL_JACOBI_H
#define SIEGEL_JACOBI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SjStatus {
  SJ_STATUS_OK = 0,
  SJ_STATUS_NULL_POINTER = 1,
  /**
   * Input outside the domain (`|w| ≥ 1`, `k ≤ 3/4`, non-unimodular element, ...).
   */
  SJ_STATUS_DOMAIN = 2,
  SJ_STATUS_STEP = 3,
  SJ_STATUS_CONFIG = 4,
  SJ_STATUS_USAGE = 5,
  SJ_STATUS_INTERNAL = 6,
} SjStatus;

/**
 * Opaque representative-coordinate frame anchored at a base point.
 */
typedef struct SjFrame SjFrame;

/**
 * Opaque model parameters `(k, μ)`.
 */
typedef struct SjModel SjModel;

typedef struct SjComplex {
  double re;
  double im;
} SjComplex;

/**
 * Point `(z, w)` of the Siegel-Jacobi disk, `|w| < 1`.
 */
typedef struct SjPoint {
  struct SjComplex z;
  struct SjComplex w;
} SjPoint;

/**
 * Hermitian 2×2 matrix `[[zz, zw], [conj(zw), ww]]`.
 */
typedef struct SjHermitian2 {
  double zz;
  struct SjComplex zw;
  double ww;
} SjHermitian2;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable message of the last failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sj_last_error_message(void);

/**
 * Static description of a status code.
 */
const char *sj_status_message(enum SjStatus status);

/**
 * Create a model with `k > 3/4`, `μ > 0`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SjStatus sj_model_new(double k, double mu, struct SjModel **out);

/**
 * # Safety
 * `model` must come from `sj_model_new` and not be used afterwards; null is
 * ignored.
 */
void sj_model_free(struct SjModel *model);

/**
 * Create a representative-coordinate frame at `base`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_frame_new(const struct SjModel *model, struct SjPoint base, struct SjFrame **out);

/**
 * # Safety
 * `frame` must come from `sj_frame_new` and not be used afterwards; null is
 * ignored.
 */
void sj_frame_free(struct SjFrame *frame);

/**
 * Reproducing kernel `K(p, q̄)`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_kernel_eval(const struct SjModel *model,
                             struct SjPoint p,
                             struct SjPoint q,
                             struct SjComplex *out);

/**
 * Normalized kernel `κ(p, q̄)`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_kappa(const struct SjModel *model,
                       struct SjPoint p,
                       struct SjPoint q,
                       struct SjComplex *out);

/**
 * Berezin kernel `|κ(p, q̄)|²`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_berezin(const struct SjModel *model,
                         struct SjPoint p,
                         struct SjPoint q,
                         double *out);

/**
 * Calabi diastasis `D(p, q)`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_diastasis(const struct SjModel *model,
                           struct SjPoint p,
                           struct SjPoint q,
                           double *out);

/**
 * Cayley angle `arccos|κ(p, q̄)|`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_cayley(const struct SjModel *model,
                        struct SjPoint p,
                        struct SjPoint q,
                        double *out);

/**
 * Kähler potential `ln K(p, p̄)`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_potential(const struct SjModel *model, struct SjPoint p, double *out);

/**
 * Balanced metric at `p`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_metric(const struct SjModel *model, struct SjPoint p, struct SjHermitian2 *out);

/**
 * Inverse of the balanced metric at `p`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_inverse_metric(const struct SjModel *model,
                                struct SjPoint p,
                                struct SjHermitian2 *out);

/**
 * Volume density `G = det h` at `p`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_density(const struct SjModel *model, struct SjPoint p, double *out);

/**
 * Scalar curvature, constant on the disk.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_scalar_curvature(const struct SjModel *model, double *out);

/**
 * Representative coordinates `(w₁, w₂)` of `p`.
 *
 * # Safety
 * `frame` must be a live handle; `out_w1`, `out_w2` valid for writes.
 */
enum SjStatus sj_rc_forward(const struct SjFrame *frame,
                            struct SjPoint p,
                            struct SjComplex *out_w1,
                            struct SjComplex *out_w2);

/**
 * Point with representative coordinates `(w₁, w₂)`; `Domain` if the pair is
 * outside the image.
 *
 * # Safety
 * `frame` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_rc_inverse(const struct SjFrame *frame,
                            struct SjComplex w1,
                            struct SjComplex w2,
                            struct SjPoint *out);

/**
 * `det ∂(w₁, w₂)/∂(z, w)` at `p`.
 *
 * # Safety
 * `frame` must be a live handle and `out` valid for writes.
 */
enum SjStatus sj_det_j(const struct SjFrame *frame, struct SjPoint p, struct SjComplex *out);

/**
 * Chart coordinates `(x, y)` of `p`, `|y| < 1`.
 *
 * # Safety
 * `frame` must be a live handle; `out_x`, `out_y` valid for writes.
 */
enum SjStatus sj_xy_chart(const struct SjFrame *frame,
                          struct SjPoint p,
                          struct SjComplex *out_x,
                          struct SjComplex *out_y);

/**
 * Action of the Jacobi group element `(g, α)`, `g = [[a, b], [b̄, ā]]` with
 * `|a|² − |b|² = 1`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SjStatus sj_jacobi_act(struct SjComplex a,
                            struct SjComplex b,
                            struct SjComplex alpha,
                            struct SjPoint p,
                            struct SjPoint *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIEGEL_JACOBI_H */
