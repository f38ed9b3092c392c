/* C interface for the cstar-hodge library. Complexes and results are opaque handles; bulk data crosses as JSON strings. */

#ifndef CSTAR_HODGE_H
#define CSTAR_HODGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call; nonzero values mirror the CLI exit codes.
 */
typedef enum CsHodgeStatus {
  CS_HODGE_STATUS_OK = 0,
  /**
   * A mathematical invariant failed (not a complex, bad projector,
   * non-integral multiplicity, ...).
   */
  CS_HODGE_STATUS_INVARIANT_VIOLATION = 1,
  /**
   * Malformed JSON, unreadable input, or an invalid builder spec.
   */
  CS_HODGE_STATUS_PARSE_FAILURE = 2,
  /**
   * A required pointer argument was null.
   */
  CS_HODGE_STATUS_NULL_ARGUMENT = 3,
  /**
   * Internal panic; the last error carries what is known.
   */
  CS_HODGE_STATUS_PANIC = 4,
} CsHodgeStatus;

/**
 * Opaque handle to a validated cochain complex.
 */
typedef struct CsHodgeComplex CsHodgeComplex;

/**
 * Opaque handle to a finished decomposition.
 */
typedef struct CsHodgeResult CsHodgeResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Status of the most recent call on this thread.
 */
enum CsHodgeStatus cshodge_last_error_code(void);

/**
 * Message of the most recent error on this thread as a newly allocated
 * string, or null when the last call succeeded. Free with
 * cshodge_string_free.
 */
char *cshodge_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library and not yet
 * freed.
 */
void cshodge_string_free(char *s);

/**
 * Parses and validates a complex from JSON
 * ({"block_dims", "ranks", "differentials"}). Returns null on failure.
 *
 * # Safety
 * `json` must be null or a valid NUL-terminated string.
 */
struct CsHodgeComplex *cshodge_complex_from_json(const char *json, double tol_rel, double tol_abs);

/**
 * Builds a complex from a builder spec such as "cycle:3 blocks=2,1" or
 * "planted ranks=2,3,2 seed=7". Returns null on failure.
 *
 * # Safety
 * `spec` must be null or a valid NUL-terminated string.
 */
struct CsHodgeComplex *cshodge_complex_from_spec(const char *spec,
                                                 uint64_t seed,
                                                 double tol_rel,
                                                 double tol_abs);

/**
 * Serializes the complex back to JSON. Free with cshodge_string_free.
 *
 * # Safety
 * `complex` must be null or a live handle from this library.
 */
char *cshodge_complex_to_json(const struct CsHodgeComplex *complex);

/**
 * Validation report ({"valid", "d_square_norms", ...}) for a complex
 * given as JSON; reports on the complex condition instead of failing, so
 * this succeeds even when d^2 != 0. Free with cshodge_string_free.
 *
 * # Safety
 * `json` must be null or a valid NUL-terminated string.
 */
char *cshodge_validate_json(const char *json, double tol_rel, double tol_abs);

/**
 * Number of degrees (length + 1). Zero for a null handle.
 *
 * # Safety
 * `complex` must be null or a live handle from this library.
 */
size_t cshodge_complex_degree_count(const struct CsHodgeComplex *complex);

/**
 * Rank of C^degree through `out_rank`.
 *
 * # Safety
 * `complex` must be null or a live handle; `out_rank` null or writable.
 */
enum CsHodgeStatus cshodge_complex_rank(const struct CsHodgeComplex *complex,
                                        size_t degree,
                                        size_t *out_rank);

/**
 * Frees a complex handle. Null is ignored.
 *
 * # Safety
 * `complex` must be null or a live handle from this library, not yet
 * freed.
 */
void cshodge_complex_free(struct CsHodgeComplex *complex);

/**
 * Runs the full decomposition: parametrices, projectors, multiplicities.
 * Returns null on failure.
 *
 * # Safety
 * `complex` must be null or a live handle from this library.
 */
struct CsHodgeResult *cshodge_decompose(const struct CsHodgeComplex *complex);

/**
 * Full report (tolerances, per-degree multiplicities, residuals, spectral
 * gaps, Euler sums) as JSON. Free with cshodge_string_free.
 *
 * # Safety
 * `result` must be null or a live handle from this library.
 */
char *cshodge_result_report_json(const struct CsHodgeResult *result);

/**
 * Cohomology multiplicity of one algebra block at one degree.
 *
 * # Safety
 * `result` must be null or a live handle; `out_multiplicity` null or
 * writable.
 */
enum CsHodgeStatus cshodge_result_multiplicity(const struct CsHodgeResult *result,
                                               size_t degree,
                                               size_t block,
                                               size_t *out_multiplicity);

/**
 * Worst residual across all degrees through `out_residual`.
 *
 * # Safety
 * `result` must be null or a live handle; `out_residual` null or
 * writable.
 */
enum CsHodgeStatus cshodge_result_worst_residual(const struct CsHodgeResult *result,
                                                 double *out_residual);

/**
 * Splits an element (JSON {"coords": [...]}) at the given degree into
 * harmonic, exact, and coexact parts; returns the full report as JSON.
 * Free with cshodge_string_free.
 *
 * # Safety
 * `result` must be null or a live handle; `element_json` null or a valid
 * NUL-terminated string.
 */
char *cshodge_result_decompose_element(const struct CsHodgeResult *result,
                                       size_t degree,
                                       const char *element_json);

/**
 * Frees a result handle. Null is ignored.
 *
 * # Safety
 * `result` must be null or a live handle from this library, not yet
 * freed.
 */
void cshodge_result_free(struct CsHodgeResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSTAR_HODGE_H */
