#ifndef BERGMAN_QC_H
#define BERGMAN_QC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BqcStatus {
  BQC_STATUS_OK = 0,
  BQC_STATUS_NULL_POINTER = 1,
  BQC_STATUS_INVALID_PARAMETER = 2,
  BQC_STATUS_PARSE = 3,
  BQC_STATUS_OUTSIDE_DOMAIN = 4,
  BQC_STATUS_ILL_CONDITIONED = 5,
  BQC_STATUS_UNSUPPORTED = 6,
  BQC_STATUS_NUMERICAL = 7,
  BQC_STATUS_PANIC = 8,
} BqcStatus;

typedef enum BqcKernelDomain {
  BQC_KERNEL_DOMAIN_DISC = 0,
  BQC_KERNEL_DOMAIN_PUNCTURED_DISC = 1,
  BQC_KERNEL_DOMAIN_ANNULUS = 2,
} BqcKernelDomain;

typedef enum BqcClass {
  BQC_CLASS_EXHAUSTIVE_HENCE_COMPLETE = 0,
  BQC_CLASS_NOT_COMPLETE = 1,
  BQC_CLASS_UNKNOWN = 2,
} BqcClass;

typedef enum BqcVerdict {
  BQC_VERDICT_DIVERGENT = 0,
  BQC_VERDICT_FINITE = 1,
  BQC_VERDICT_INCONCLUSIVE = 2,
} BqcVerdict;

/*
 Opaque factorized Bergman Gram matrix.
 */
typedef struct BqcKernelEngine BqcKernelEngine;

/*
 Opaque D^{r,t} parameter pair.
 */
typedef struct BqcParams BqcParams;

typedef struct BqcClassification {
  int32_t class_id;
  double ratio_n0;
  double ratio_n1;
  /*
   Nonzero when a comparison was decided inside the float guard band.
   */
  int32_t near_boundary;
  int32_t ratio_one_boundary;
} BqcClassification;

typedef struct BqcGamma {
  int32_t verdict;
  double ratio;
  /*
   May be `+inf` for divergent series.
   */
  double lower_sum;
  double upper_sum;
} BqcGamma;

typedef struct BqcKernelValue {
  double kernel;
  double metric;
  double derivative_functional;
  double error_proxy;
} BqcKernelValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *bqc_version(void);

/*
 Copies the calling thread's last error message into `buf`.

 Returns the message length without the terminator, 0 when there is no
 error, or -1 when `buf` is too small (nothing is written then).

 # Safety
 `buf` must be valid for `len` bytes or null with `len == 0`.
 */
ptrdiff_t bqc_last_error_message(char *buf, size_t len);

/*
 Parses `r` and `t` (`"1/8"`, `"0.125"`) and checks `0 < r < 1`, `0 < t < 1/2`.

 # Safety
 `r` and `t` must be NUL-terminated strings; `out` must be writable.
 */
enum BqcStatus bqc_params_new(const char *r, const char *t, struct BqcParams **out);

/*
 # Safety
 `p` must come from [`bqc_params_new`] and not be used afterwards.
 */
void bqc_params_free(struct BqcParams *p);

/*
 # Safety
 `p` must be a live handle and `out` writable.
 */
enum BqcStatus bqc_classify(const struct BqcParams *p, struct BqcClassification *out);

/*
 Shell-series γ^{(n)}(0).

 # Safety
 `p` must be a live handle and `out` writable.
 */
enum BqcStatus bqc_gamma_origin(const struct BqcParams *p, uint32_t n, struct BqcGamma *out);

/*
 Transports `p` along φ_α; `alpha` is parsed like the parameters.

 # Safety
 `p` must be a live handle, `alpha` a NUL-terminated string, `out` writable.
 */
enum BqcStatus bqc_transport(const struct BqcParams *p, const char *alpha, struct BqcParams **out);

/*
 Radius parameter as a double.

 # Safety
 `p` must be a live handle.
 */
double bqc_params_r(const struct BqcParams *p);

/*
 # Safety
 `p` must be a live handle.
 */
double bqc_params_t(const struct BqcParams *p);

/*
 Dilatation constant `L` of φ_α.

 # Safety
 `alpha` must be a NUL-terminated string and `out` writable.
 */
enum BqcStatus bqc_qc_constant(const char *alpha, double *out);

/*
 `φ_α(re + i im)`.

 # Safety
 `out_re` and `out_im` must be writable.
 */
enum BqcStatus bqc_qc_apply(double alpha, double re, double im, double *out_re, double *out_im);

/*
 `ln cap` of a circular arc.

 # Safety
 `out` must be writable.
 */
enum BqcStatus bqc_arc_log_capacity(double radius, double half_width, double *out);

/*
 Builds and factorizes the monomial Gram matrix of degree `max_degree`.
 `inner` is used for the annulus only.

 # Safety
 `out` must be writable.
 */
enum BqcStatus bqc_kernel_engine_new(enum BqcKernelDomain domain,
                                     double inner,
                                     uint32_t max_degree,
                                     struct BqcKernelEngine **out);

/*
 # Safety
 `e` must be a live handle and `out` writable.
 */
enum BqcStatus bqc_kernel_eval(const struct BqcKernelEngine *e,
                               double re,
                               double im,
                               struct BqcKernelValue *out);

/*
 # Safety
 `e` must come from [`bqc_kernel_engine_new`] and not be used afterwards.
 */
void bqc_kernel_engine_free(struct BqcKernelEngine *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BERGMAN_QC_H */
