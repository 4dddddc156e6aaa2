#ifndef GAUGE_CERTIFY_H
#define GAUGE_CERTIFY_H

/* Generated by cbindgen from gauge-certify-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_INVALID_INPUT = 1,
  GC_STATUS_OUT_OF_DOMAIN = 2,
  GC_STATUS_EMPTY_GRAPH = 3,
  GC_STATUS_PRECONDITION_FAILED = 4,
  GC_STATUS_INTERNAL_ERROR = 5,
  GC_STATUS_NULL_POINTER = 6,
  GC_STATUS_INVALID_UTF8 = 7,
  GC_STATUS_PANIC = 8,
} GcStatus;

/**
 * Norm order for ball bodies.
 */
typedef enum GcPNorm {
  GC_P_NORM_INF = 0,
  GC_P_NORM_ONE = 1,
  GC_P_NORM_TWO = 2,
} GcPNorm;

/**
 * Opaque convex body handle.
 */
typedef struct GcBody GcBody;

/**
 * Opaque subdifferential graph handle.
 */
typedef struct GcGraph GcGraph;

/**
 * Opaque function oracle handle.
 */
typedef struct GcOracle GcOracle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gc_version(void);

/**
 * Message of the last error on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *gc_last_error_message(void);

/**
 * Frees a string allocated by this library.
 *
 * # Safety
 * `s` must come from a `char **` out-parameter of this library and must not
 * have been freed already.
 */
void gc_string_free(char *s);

/**
 * Creates the open p-norm ball of the given radius.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GcStatus gc_body_ball(size_t dim, double radius, enum GcPNorm p, struct GcBody **out);

/**
 * Creates the polytope `{ x : <a_i, x> < 1 }` from `n_normals` rows of
 * length `dim` stored row-major in `normals`.
 *
 * # Safety
 * `normals` must hold `n_normals * dim` doubles; `out` must be valid.
 */
enum GcStatus gc_body_polytope(size_t dim,
                               size_t n_normals,
                               const double *normals,
                               struct GcBody **out);

/**
 * Creates the segment tube `([p, q] + delta B°) − {p}` (anchor at the
 * origin).
 *
 * # Safety
 * `p` and `q` must hold `dim` doubles; `out` must be valid.
 */
enum GcStatus gc_body_tube(size_t dim,
                           const double *p,
                           const double *q,
                           double delta,
                           struct GcBody **out);

/**
 * Dimension of the body (0 for null).
 *
 * # Safety
 * `body` must be null or a live handle from a body constructor.
 */
size_t gc_body_dim(const struct GcBody *body);

/**
 * Releases a body handle.
 *
 * # Safety
 * `body` must come from a body constructor and not be freed twice.
 */
void gc_body_free(struct GcBody *body);

/**
 * Minkowski gauge of the body at `x` (`len == dim`). `out_proximity` may be
 * null; when given it receives `1 − value` inside the body and 0 outside.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum GcStatus gc_gauge(const struct GcBody *body,
                       const double *x,
                       size_t len,
                       double *out_value,
                       double *out_proximity);

/**
 * A Fenchel subgradient of the gauge at `x`; writes `len` doubles to `out`.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum GcStatus gc_gauge_subgradient(const struct GcBody *body,
                                   const double *x,
                                   size_t len,
                                   double *out);

/**
 * Euclidean sandwich radii `inner·B ⊂ U ⊂ outer·B`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GcStatus gc_radius_bounds(const struct GcBody *body, double *out_inner, double *out_outer);

/**
 * Scaled barrier `scale·mu/(1−mu)` at `x`; `+inf` outside the body.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum GcStatus gc_barrier_eval(const struct GcBody *body,
                              double scale,
                              const double *x,
                              size_t len,
                              double *out);

/**
 * Barrier subgradient at `x` (requires gauge < 1); writes `len` doubles.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum GcStatus gc_barrier_subgradient(const struct GcBody *body,
                                     double scale,
                                     const double *x,
                                     size_t len,
                                     double *out);

/**
 * Certified Lipschitz constant of the barrier on `{ k <= level }`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GcStatus gc_barrier_level_lipschitz(const struct GcBody *body,
                                         double scale,
                                         double level,
                                         double *out);

/**
 * Creates a registry oracle (`quadratic`, `abs`, `neg_abs`, `cube`,
 * `max_affine`, `indicator_box`, `step`) on the box `[lo, hi]`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `lo`/`hi` hold `dim` doubles.
 */
enum GcStatus gc_oracle_registry(const char *name,
                                 size_t dim,
                                 const double *lo,
                                 const double *hi,
                                 struct GcOracle **out);

/**
 * Creates an oracle from a custom expression (see docs/functions.md).
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `lo`/`hi` hold `dim` doubles.
 */
enum GcStatus gc_oracle_expr(const char *expr,
                             size_t dim,
                             const double *lo,
                             const double *hi,
                             struct GcOracle **out);

/**
 * Dimension of the oracle's domain (0 for null).
 *
 * # Safety
 * `oracle` must be null or a live handle from an oracle constructor.
 */
size_t gc_oracle_dim(const struct GcOracle *oracle);

/**
 * Evaluates the oracle; `+inf` is a legal result.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum GcStatus gc_oracle_eval(const struct GcOracle *oracle,
                             const double *x,
                             size_t len,
                             double *out);

/**
 * Releases an oracle handle.
 *
 * # Safety
 * `oracle` must come from an oracle constructor and not be freed twice.
 */
void gc_oracle_free(struct GcOracle *oracle);

/**
 * Samples the proximal subdifferential graph of the oracle over its domain
 * grid. Pass `n_lambdas = 0` / `tilt_count = 0` for the defaults
 * (λ ∈ {0.1, 0.01}, 5 tilts per axis).
 *
 * # Safety
 * `lambdas` must hold `n_lambdas` doubles (may be null when `n_lambdas` is
 * 0); `out` must be valid.
 */
enum GcStatus gc_sample_graph(const struct GcOracle *oracle,
                              size_t resolution,
                              const double *lambdas,
                              size_t n_lambdas,
                              size_t tilt_count,
                              struct GcGraph **out);

/**
 * Number of samples in the graph (0 for null).
 *
 * # Safety
 * `graph` must be null or a live handle from `gc_sample_graph`.
 */
size_t gc_graph_len(const struct GcGraph *graph);

/**
 * Copies sample `index` into `out_x`/`out_xstar` (each `dim` doubles) and
 * `out_fx`.
 *
 * # Safety
 * Buffers must hold the graph's dimension; `index < gc_graph_len`.
 */
enum GcStatus gc_graph_sample(const struct GcGraph *graph,
                              size_t index,
                              double *out_x,
                              double *out_xstar,
                              double *out_fx);

/**
 * Releases a graph handle.
 *
 * # Safety
 * `graph` must come from `gc_sample_graph` and not be freed twice.
 */
void gc_graph_free(struct GcGraph *graph);

/**
 * Exact pairwise monotonicity sweep. `out_worst` receives the minimum
 * pairing product (`+inf` when the graph has fewer than two samples).
 *
 * # Safety
 * Pointers must be valid.
 */
enum GcStatus gc_monotonicity_check(const struct GcGraph *graph,
                                    double tol,
                                    bool *out_monotone,
                                    double *out_worst);

/**
 * Monotone-relation test of the probe `(x0, x0star)` against the graph.
 *
 * # Safety
 * `x0`/`x0star` must hold `len` doubles; out pointers must be valid.
 */
enum GcStatus gc_minty_test(const struct GcGraph *graph,
                            const double *x0,
                            const double *x0star,
                            size_t len,
                            double tol,
                            bool *out_related,
                            double *out_worst);

/**
 * Subgradient envelope `max { f(x) + <x*, xbar − x> }` over the graph.
 *
 * # Safety
 * `xbar` must hold `len` doubles; `out` must be valid.
 */
enum GcStatus gc_envelope(const struct GcGraph *graph, const double *xbar, size_t len, double *out);

/**
 * Runs the full convexity certification pipeline and returns the report as
 * a JSON string (same shape as the CLI; see docs/report.schema.json).
 *
 * # Safety
 * `lambdas` as in [`gc_sample_graph`]; `out_json` must be valid and the
 * result freed with [`gc_string_free`].
 */
enum GcStatus gc_certify_json(const struct GcOracle *oracle,
                              size_t resolution,
                              const double *lambdas,
                              size_t n_lambdas,
                              size_t tilt_count,
                              char **out_json);

/**
 * Constructive Ekeland principle over `grid ∩ body`; writes the terminal
 * point into `out_y` (`len` doubles) and its value into `out_fy`.
 *
 * # Safety
 * Buffers must hold `len` doubles matching the oracle dimension.
 */
enum GcStatus gc_ekeland(const struct GcOracle *oracle,
                         const struct GcBody *body,
                         size_t resolution,
                         const double *start,
                         size_t len,
                         double eps,
                         double lambda,
                         double *out_y,
                         double *out_fy);

/**
 * Runs the instrumented minimization trace for `f + scale·k(· − anchor) −
 * <linear, · − anchor>` and returns the full record as a JSON string.
 *
 * # Safety
 * `linear`/`anchor` must hold `len` doubles; `out_json` as in
 * [`gc_certify_json`].
 */
enum GcStatus gc_trace_json(const struct GcOracle *oracle,
                            const struct GcBody *body,
                            double scale,
                            const double *linear,
                            const double *anchor,
                            size_t len,
                            size_t n_max,
                            size_t base_resolution,
                            char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUGE_CERTIFY_H */
