#ifndef BIRELAB_H
#define BIRELAB_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum BirelabStatus {
  BIRELAB_STATUS_OK = 0,
  BIRELAB_STATUS_NULL_POINTER = 1,
  BIRELAB_STATUS_INVALID_INPUT = 2,
  BIRELAB_STATUS_ILL_CONDITIONED = 3,
  BIRELAB_STATUS_NOT_SKEWON_FREE = 4,
  BIRELAB_STATUS_SINGULAR_MEDIUM = 5,
  BIRELAB_STATUS_NUMERICAL_FAILURE = 6,
  BIRELAB_STATUS_PANIC = 7,
} BirelabStatus;

typedef enum BirelabTag {
  BIRELAB_TAG_DOUBLE_LIGHT_CONE = 0,
  BIRELAB_TAG_SINGLE_CONE = 1,
  BIRELAB_TAG_REDUCIBLE_NON_LORENTZ = 2,
  BIRELAB_TAG_NO_QUADRIC_FACTORIZATION = 3,
} BirelabTag;

/**
 * Opaque outcome of a quartic factorization.
 */
typedef struct BirelabFactorization BirelabFactorization;

/**
 * Opaque medium tensor.
 */
typedef struct BirelabMedium BirelabMedium;

/**
 * Opaque Fresnel quartic.
 */
typedef struct BirelabQuartic BirelabQuartic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *birelab_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library and not freed yet.
 */
void birelab_string_free(char *s);

/**
 * Medium from a row-major 6×6 matrix in the standard two-form basis.
 *
 * # Safety
 * `matrix` must point to 36 doubles; `out` must be writable.
 */
enum BirelabStatus birelab_medium_from_matrix(const double *matrix, struct BirelabMedium **out);

/**
 * Medium from medium JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BirelabStatus birelab_medium_from_json(const char *json, struct BirelabMedium **out);

/**
 * Normal-form medium from parameter JSON `{"class":"I","alpha":[..],"beta":[..]}`.
 *
 * # Safety
 * `params_json` must be a NUL-terminated string; `out` must be writable.
 */
enum BirelabStatus birelab_medium_construct(const char *params_json, struct BirelabMedium **out);

/**
 * # Safety
 * `medium` must be null or a live handle from this library.
 */
void birelab_medium_free(struct BirelabMedium *medium);

/**
 * Copies the row-major 6×6 matrix into `out`.
 *
 * # Safety
 * `medium` must be a live handle; `out` must hold 36 doubles.
 */
enum BirelabStatus birelab_medium_matrix(const struct BirelabMedium *medium, double *out);

/**
 * # Safety
 * `medium` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_medium_is_skewon_free(const struct BirelabMedium *medium,
                                                 double tol,
                                                 bool *out);

/**
 * Metaclass name ("I" … "VII" or "VIII-XXIII").
 *
 * # Safety
 * `medium` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_medium_metaclass(const struct BirelabMedium *medium, char **out);

/**
 * Full analysis report as JSON, with default tolerances.
 *
 * # Safety
 * `medium` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_medium_analyze(const struct BirelabMedium *medium, char **out);

/**
 * Fresnel quartic of a medium.
 *
 * # Safety
 * `medium` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_medium_quartic(const struct BirelabMedium *medium,
                                          struct BirelabQuartic **out);

/**
 * # Safety
 * `quartic` must be null or a live handle from this library.
 */
void birelab_quartic_free(struct BirelabQuartic *quartic);

/**
 * The 35 symmetric coefficients, multi-indices in lexicographic order
 * (0000, 0001, …, 3333).
 *
 * # Safety
 * `quartic` must be a live handle; `out` must hold 35 doubles.
 */
enum BirelabStatus birelab_quartic_coefficients(const struct BirelabQuartic *quartic, double *out);

/**
 * # Safety
 * `quartic` must be a live handle; `xi` must hold 4 doubles; `out` must be writable.
 */
enum BirelabStatus birelab_quartic_evaluate(const struct BirelabQuartic *quartic,
                                            const double *xi,
                                            double *out);

/**
 * Factors a quartic into quadrics and classifies the result.
 *
 * # Safety
 * `quartic` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_quartic_factor(const struct BirelabQuartic *quartic,
                                          struct BirelabFactorization **out);

/**
 * # Safety
 * `factorization` must be null or a live handle from this library.
 */
void birelab_factorization_free(struct BirelabFactorization *factorization);

/**
 * # Safety
 * `factorization` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_factorization_tag(const struct BirelabFactorization *factorization,
                                             enum BirelabTag *out);

/**
 * Row-major 4×4 factors and constant with `f = c·(ξᵀaξ)(ξᵀbξ)`, in canonical
 * gauge. A single cone fills both `a` and `b` with the same quadric. Fails
 * with `NumericalFailure` when no factorization was found.
 *
 * # Safety
 * `factorization` must be a live handle; `a` and `b` must hold 16 doubles;
 * `c` must be writable.
 */
enum BirelabStatus birelab_factorization_quadrics(const struct BirelabFactorization *factorization,
                                                  double *a,
                                                  double *b,
                                                  double *c);

/**
 * Grid residual of the factorization (best residual when none was found).
 *
 * # Safety
 * `factorization` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_factorization_residual(const struct BirelabFactorization *factorization,
                                                  double *out);

/**
 * # Safety
 * `factorization` must be a live handle; `out` must be writable.
 */
enum BirelabStatus birelab_factorization_to_json(const struct BirelabFactorization *factorization,
                                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIRELAB_H */
