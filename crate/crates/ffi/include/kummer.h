#ifndef KUMMER_H
#define KUMMER_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum {
  KUMMER_STATUS_OK = 0,
  KUMMER_STATUS_NULL_POINTER = 1,
  KUMMER_STATUS_INVALID_ARGUMENT = 2,
  KUMMER_STATUS_POLE_PARAMETER = 3,
  KUMMER_STATUS_NO_CONVERGENCE = 4,
  KUMMER_STATUS_DOMAIN_ERROR = 5,
  KUMMER_STATUS_INVALID_TOLERANCE = 6,
  KUMMER_STATUS_RESONANT_DENOMINATOR = 7,
  KUMMER_STATUS_EXCLUDED_PARAMETER = 8,
  KUMMER_STATUS_RESONANT_PARAMETER = 9,
  KUMMER_STATUS_NOT_INDICIAL_ROOT = 10,
  KUMMER_STATUS_CONNECTION_MISMATCH = 11,
  KUMMER_STATUS_UNSUPPORTED_SPEC = 12,
  KUMMER_STATUS_PARSE_ERROR = 13,
  KUMMER_STATUS_OUT_OF_RANGE = 14,
  KUMMER_STATUS_PANIC = 15,
} KummerStatus;

/**
 * Exact Frobenius solution of a reduced equation.
 */
typedef struct KummerFrobenius KummerFrobenius;

/**
 * Result of a numerical identity check over a grid.
 */
typedef struct KummerIdentityReport KummerIdentityReport;

typedef struct {
  double value;
  size_t terms_used;
  double last_term_magnitude;
  /**
   * True when the sum was carried out in exact arithmetic and rounded.
   */
  bool exact;
} KummerEvalResult;

typedef struct {
  bool certified;
  size_t mismatches;
  /**
   * Index of the first differing coefficient, or -1.
   */
  int64_t first_mismatch;
} KummerCertification;

typedef struct {
  double a;
  double z;
  double lhs;
  double rhs;
  double abs_residual;
  double rel_residual;
  size_t terms_used;
  bool pass;
} KummerPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *kummer_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *kummer_version(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void kummer_string_free(char *s);

/**
 * Rising factorial `(x)_n` in double precision.
 *
 * # Safety
 * `out` must be valid for writes.
 */
KummerStatus kummer_pochhammer(double x, uint32_t n, double *out);

/**
 * `₀F₁(; b; x)` summed to relative tolerance `tol`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
KummerStatus kummer_eval_0f1(double b, double x, double tol, KummerEvalResult *out);

/**
 * `₁F₁(a; b; x)` summed to relative tolerance `tol`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
KummerStatus kummer_eval_1f1(double a, double b, double x, double tol, KummerEvalResult *out);

/**
 * Compare a closed-form family against its Frobenius series through
 * order `order`, exactly. `family` is a name such as `"P1-λ0"` or
 * `"p1-l0"`; `a` is an exact rational string.
 *
 * # Safety
 * `family` and `a` must be NUL-terminated strings; `out` valid for writes.
 */
KummerStatus kummer_certify_family(const char *family,
                                   const char *a,
                                   size_t order,
                                   KummerCertification *out);

/**
 * Solve the reduced equation for offset `offset` (-1, 0 or 1) at exact `a`
 * through order `order`, with `c0 = 1`. `lambda` may be NULL to select the
 * upper indicial root.
 *
 * # Safety
 * `a` (and `lambda` if non-NULL) must be NUL-terminated strings; `out`
 * valid for writes. The handle is released with [`kummer_frobenius_free`].
 */
KummerStatus kummer_frobenius_solve(int32_t offset,
                                    const char *a,
                                    const char *lambda,
                                    size_t order,
                                    KummerFrobenius **out);

/**
 * Number of stored coefficients (`order + 1`, or fewer in the log case).
 * Returns 0 for NULL.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
size_t kummer_frobenius_len(const KummerFrobenius *h);

/**
 * Whether the recurrence hit a resonant denominator. False for NULL.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
bool kummer_frobenius_log_case(const KummerFrobenius *h);

/**
 * The exponent `λ` as a caller-owned fraction string, or NULL for NULL.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
char *kummer_frobenius_lambda(const KummerFrobenius *h);

/**
 * Coefficient `c_n` rounded to double precision.
 *
 * # Safety
 * `h` must be a live handle; `out` valid for writes.
 */
KummerStatus kummer_frobenius_coeff_f64(const KummerFrobenius *h, size_t n, double *out);

/**
 * Coefficient `c_n` as a caller-owned exact fraction string.
 *
 * # Safety
 * `h` must be a live handle; `out` valid for writes.
 */
KummerStatus kummer_frobenius_coeff_string(const KummerFrobenius *h, size_t n, char **out);

/**
 * # Safety
 * `h` must be NULL or a handle from [`kummer_frobenius_solve`] that has not
 * been freed.
 */
void kummer_frobenius_free(KummerFrobenius *h);

/**
 * Check identity `identity` (`"kummer2"`, `"contig-plus"`, `"contig-minus"`)
 * on the grid `a[0..na] × z[0..nz]`, a-major.
 *
 * # Safety
 * `identity` must be a NUL-terminated string, `a` and `z` valid for `na`
 * and `nz` reads, `out` valid for writes. The handle is released with
 * [`kummer_identity_report_free`].
 */
KummerStatus kummer_verify_identity(const char *identity,
                                    const double *a,
                                    size_t na,
                                    const double *z,
                                    size_t nz,
                                    double tol,
                                    KummerIdentityReport **out);

/**
 * Number of grid points. 0 for NULL.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
size_t kummer_identity_report_len(const KummerIdentityReport *h);

/**
 * Whether every point passed. False for NULL.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
bool kummer_identity_report_passed(const KummerIdentityReport *h);

/**
 * Largest relative residual over the grid. NaN for NULL.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
double kummer_identity_report_max_rel_residual(const KummerIdentityReport *h);

/**
 * # Safety
 * `h` must be a live handle; `out` valid for writes.
 */
KummerStatus kummer_identity_report_point(const KummerIdentityReport *h,
                                          size_t i,
                                          KummerPoint *out);

/**
 * # Safety
 * `h` must be NULL or a handle from [`kummer_verify_identity`] that has not
 * been freed.
 */
void kummer_identity_report_free(KummerIdentityReport *h);

/**
 * Exact connection constants `A`, `B` by series matching through order
 * `order`, returned as caller-owned fraction strings.
 *
 * # Safety
 * `identity` and `a` must be NUL-terminated strings; `out_a` and `out_b`
 * valid for writes.
 */
KummerStatus kummer_connection_constants(const char *identity,
                                         const char *a,
                                         size_t order,
                                         char **out_a,
                                         char **out_b);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KUMMER_H */
