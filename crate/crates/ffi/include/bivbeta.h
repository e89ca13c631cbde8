#ifndef BIVBETA_H
#define BIVBETA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Values match the exit codes of the `bivbeta` tool where
// they overlap.
typedef enum BbStatus {
  BB_STATUS_OK = 0,
  BB_STATUS_NULL_POINTER = 1,
  BB_STATUS_INVALID_ARGUMENT = 2,
  BB_STATUS_DOMAIN = 3,
  BB_STATUS_INFEASIBLE_MOMENTS = 4,
  BB_STATUS_NON_CONVERGENCE = 5,
  BB_STATUS_PANIC = 6,
} BbStatus;

// Opaque parameter set `(a11, a10, a01, a00)`.
typedef struct BbDistribution BbDistribution;

// Opaque seeded random stream.
typedef struct BbStream BbStream;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread, NUL-terminated and
// truncated to `len` bytes, into `buf`. Returns the full message length
// (excluding the terminator).
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t bb_last_error(char *buf, size_t len);

// # Safety
// `out` must be a valid pointer.
enum BbStatus bb_distribution_new(double a11,
                                  double a10,
                                  double a01,
                                  double a00,
                                  struct BbDistribution **out);

// # Safety
// `dist` must come from [`bb_distribution_new`] and not be used again.
void bb_distribution_free(struct BbDistribution *dist);

// Density at `(x, y)`. A divergent density is reported as `+inf`.
//
// # Safety
// `dist` must be a live handle; `value` valid; `error_estimate` null or valid.
enum BbStatus bb_pdf(const struct BbDistribution *dist,
                     double x,
                     double y,
                     double tol,
                     double *value,
                     double *error_estimate);

// Writes `m10, m01, m20, m02, m11` to `out[0..5]`.
//
// # Safety
// `dist` must be a live handle and `out` point to 5 doubles.
enum BbStatus bb_moments(const struct BbDistribution *dist, double *out);

// # Safety
// `dist` must be a live handle and `out` valid.
enum BbStatus bb_correlation(const struct BbDistribution *dist, double *out);

// Raw moment `E[X^r Y^s]`.
//
// # Safety
// `dist` must be a live handle and `out` valid.
enum BbStatus bb_mixed_moment(const struct BbDistribution *dist,
                              uint32_t r,
                              uint32_t s,
                              double *out);

struct BbStream *bb_stream_new(uint64_t seed);

// # Safety
// `stream` must come from [`bb_stream_new`] and not be used again.
void bb_stream_free(struct BbStream *stream);

// Draws `n` pairs into `xs[0..n]` and `ys[0..n]`, advancing `stream`.
//
// # Safety
// Handles must be live; `xs` and `ys` must each hold `n` doubles.
enum BbStatus bb_sample(const struct BbDistribution *dist,
                        struct BbStream *stream,
                        size_t n,
                        double *xs,
                        double *ys);

// Moment-matching fit. `moments` holds `m10, m01, m20, m02, m11`; the
// parameters go to `alpha[0..4]`. A run that stops on its budget still
// fills the outputs and returns `NonConvergence`.
//
// # Safety
// `moments` must hold 5 doubles and `alpha` 4; `objective` null or valid.
enum BbStatus bb_fit_moments(const double *moments,
                             size_t restarts,
                             uint64_t seed,
                             double *alpha,
                             double *objective);

// # Safety
// `out` must be valid.
enum BbStatus bb_hyp2f1(double a, double b, double c, double z, double *out);

// # Safety
// `out` must be valid.
enum BbStatus bb_appell_f1(double a,
                           double b1,
                           double b2,
                           double c,
                           double z1,
                           double z2,
                           double *out);

// # Safety
// `out` must be valid.
enum BbStatus bb_ln_gamma(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIVBETA_H */
