#ifndef CURVCHECK_H
#define CURVCHECK_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by all entry points.
 */
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_ARGUMENT = 1,
  CC_STATUS_INVALID_UTF8 = 2,
  CC_STATUS_INVALID_ARGUMENT = 3,
  CC_STATUS_UNKNOWN_NAME = 4,
  CC_STATUS_DIMENSION = 5,
  CC_STATUS_GEOMETRY = 6,
  CC_STATUS_SCENARIO = 7,
  CC_STATUS_BUFFER_TOO_SMALL = 8,
  CC_STATUS_PANIC = 9,
} CcStatus;

/**
 * An ambient metric chart, either Riemannian or the underlying metric of a
 * Kähler chart.
 */
typedef struct CcChart CcChart;

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *cc_last_error(void);

/**
 * Builds a catalog chart. `params_json` may be null or a JSON object of
 * parameter overrides. Immersion entries are rejected.
 *
 * # Safety
 * `name` and `params_json` must be null or NUL-terminated strings and
 * `out` must point to writable storage for one pointer.
 */
enum CcStatus cc_chart_new(const char *name, const char *params_json, struct CcChart **out);

/**
 * Releases a chart. Null is ignored.
 *
 * # Safety
 * `chart` must be null or a handle from [`cc_chart_new`] not yet freed.
 */
void cc_chart_free(struct CcChart *chart);

/**
 * Dimension of the chart.
 *
 * # Safety
 * `chart` must be a live handle and `out` writable.
 */
enum CcStatus cc_chart_dim(const struct CcChart *chart, size_t *out);

/**
 * Sectional curvature of the plane spanned by `u` and `v` at `point`.
 * All three arrays have the chart dimension.
 *
 * # Safety
 * The arrays must hold `dim` doubles each and `out` must be writable.
 */
enum CcStatus cc_sectional(const struct CcChart *chart,
                           const double *point,
                           const double *u,
                           const double *v,
                           double *out);

/**
 * Ricci curvature `Ric(w, eta)` at `point`.
 *
 * # Safety
 * The arrays must hold `dim` doubles each and `out` must be writable.
 */
enum CcStatus cc_ricci(const struct CcChart *chart,
                       const double *point,
                       const double *w,
                       const double *eta,
                       double *out);

/**
 * Writes the covariant curvature tensor at `point` into `out`, row-major
 * with index `((a*m + b)*m + c)*m + d`. `out_len` must be at least `m^4`.
 *
 * # Safety
 * `point` must hold `dim` doubles and `out` must hold `out_len` doubles.
 */
enum CcStatus cc_riemann_tensor(const struct CcChart *chart,
                                const double *point,
                                double *out,
                                size_t out_len);

/**
 * Runs a scenario given as JSON text and returns the JSON report in
 * `out_report`. `out_exit` receives 0 when every check passed and 1 when
 * some failed. `parallel` of 0 uses one thread.
 *
 * # Safety
 * `scenario_json` must be a NUL-terminated string; the out pointers must be
 * writable. The report is released with [`cc_string_free`].
 */
enum CcStatus cc_run_scenario(const char *scenario_json,
                              size_t parallel,
                              char **out_report,
                              int32_t *out_exit);

/**
 * Runs the built-in verification suite and returns its JSON report.
 * `only` may be null or a group name. `out_exit` is 0 when every
 * expectation is met and 1 otherwise.
 *
 * # Safety
 * `only` must be null or a NUL-terminated string; the out pointers must be
 * writable. The report is released with [`cc_string_free`].
 */
enum CcStatus cc_verify_suite(const char *only,
                              uint64_t seed,
                              size_t parallel,
                              char **out_report,
                              int32_t *out_exit);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void cc_string_free(char *s);

#endif  /* CURVCHECK_H */
