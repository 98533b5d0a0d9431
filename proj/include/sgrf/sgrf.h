/* sgrf — stochastic global root finding.
 *
 * Locates zeros of a scalar function on an n-dimensional box as the center
 * of mass of the singular density 1/(f(x)^2 + eta^2)^k, estimated by a
 * streaming Monte Carlo ratio with uniform or adaptive Gaussian sampling,
 * with sequential multi-root discovery via exclusion balls.
 *
 * All functions returning sgrf_status set a thread-local message retrievable
 * with sgrf_last_error() on failure. Handles are freed with the matching
 * *_free function; passing NULL to a *_free is a no-op.
 */
#ifndef SGRF_H
#define SGRF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SGRF_API __declspec(dllexport)
#else
#define SGRF_API __attribute__((visibility("default")))
#endif

typedef enum sgrf_status {
    SGRF_OK = 0,
    SGRF_ERR_ARITY_MISMATCH = 1,
    SGRF_ERR_NONFINITE_VALUE = 2,
    SGRF_ERR_SYNTAX = 3,
    SGRF_ERR_UNKNOWN_IDENTIFIER = 4,
    SGRF_ERR_ARITY_EXCEEDED = 5,
    SGRF_ERR_INVALID_ARGUMENT = 6,
    SGRF_ERR_EMPTY_ESTIMATOR = 7,
    SGRF_ERR_EXCLUSION_SATURATED = 8,
    SGRF_ERR_INSUFFICIENT_DATA = 9,
    SGRF_ERR_UNKNOWN_BUILTIN = 10,
    SGRF_ERR_IO = 11,
    SGRF_ERR_INTERNAL = 12
} sgrf_status;

typedef struct sgrf_field sgrf_field;
typedef struct sgrf_domain sgrf_domain;
typedef struct sgrf_solver sgrf_solver;
typedef struct sgrf_result sgrf_result;
typedef struct sgrf_roots sgrf_roots;
typedef struct sgrf_experiment sgrf_experiment;

SGRF_API const char* sgrf_last_error(void);
SGRF_API const char* sgrf_status_name(sgrf_status status);

/* ---- scalar fields ---- */

/* User callback: evaluate at x (n doubles); return the value. Must be pure. */
typedef double (*sgrf_eval_fn)(const double* x, int n, void* user);

SGRF_API sgrf_field* sgrf_field_builtin(const char* name);
SGRF_API sgrf_field* sgrf_field_expr(const char* text, int arity);
/* Fills out_used[0..arity): 1 when variable x<i+1> appears in text. */
SGRF_API sgrf_status sgrf_expr_used(const char* text, int arity, int* out_used);
SGRF_API sgrf_field* sgrf_field_custom(int arity, sgrf_eval_fn fn, void* user);
SGRF_API int sgrf_field_arity(const sgrf_field* field);
SGRF_API sgrf_status sgrf_field_eval(const sgrf_field* field, const double* x, int n,
                                     double* out_value);
SGRF_API void sgrf_field_free(sgrf_field* field);

/* Builtin catalog introspection. */
SGRF_API int sgrf_builtin_count(void);
SGRF_API const char* sgrf_builtin_name(int index);
SGRF_API sgrf_domain* sgrf_builtin_domain(const char* name);
/* Writes up to max_roots*arity doubles (roots flattened row-major); returns
 * the number of roots, or -1 on error. */
SGRF_API int sgrf_builtin_roots(const char* name, double* out_roots, int max_roots);

/* ---- domains ---- */

SGRF_API sgrf_domain* sgrf_domain_box(int n, const double* lower, const double* upper);
SGRF_API sgrf_status sgrf_domain_add_exclusion(sgrf_domain* domain, const double* center,
                                               double radius);
SGRF_API int sgrf_domain_dim(const sgrf_domain* domain);
/* 1 inside, 0 outside, -1 on error. */
SGRF_API int sgrf_domain_contains(const sgrf_domain* domain, const double* x, int n);
SGRF_API double sgrf_domain_volume(const sgrf_domain* domain);
SGRF_API void sgrf_domain_free(sgrf_domain* domain);

/* ---- solver configuration ---- */

SGRF_API sgrf_solver* sgrf_solver_new(void);
/* k <= 0 selects the default exponent for the domain dimension. */
SGRF_API sgrf_status sgrf_solver_set_density(sgrf_solver* solver, int k, double eta);
/* kind: "uniform" | "adaptive" (default "adaptive"). */
SGRF_API sgrf_status sgrf_solver_set_sampler(sgrf_solver* solver, const char* kind);
SGRF_API sgrf_status sgrf_solver_set_budget(sgrf_solver* solver, int64_t max_samples);
SGRF_API sgrf_status sgrf_solver_set_seed(sgrf_solver* solver, uint64_t seed);
/* update_every <= 0, window <= 0, tol <= 0 keep the current values
 * (defaults: 5, 10*n, 1e-9). */
SGRF_API sgrf_status sgrf_solver_set_adaptive(sgrf_solver* solver, int update_every, int window,
                                              double tol);
/* Absolute per-dimension floor for sigma; <= 0 restores 1e-12 * range. */
SGRF_API sgrf_status sgrf_solver_set_sigma_floor(sgrf_solver* solver, double floor);
SGRF_API sgrf_status sgrf_solver_set_workers(sgrf_solver* solver, int workers);
SGRF_API void sgrf_solver_free(sgrf_solver* solver);

/* ---- solving ---- */

SGRF_API sgrf_status sgrf_solve(const sgrf_solver* solver, const sgrf_field* field,
                                const sgrf_domain* domain, sgrf_result** out_result);

SGRF_API int sgrf_result_dim(const sgrf_result* result);
SGRF_API sgrf_status sgrf_result_estimate(const sgrf_result* result, double* out, int n);
SGRF_API sgrf_status sgrf_result_sigma(const sgrf_result* result, double* out, int n);
SGRF_API int64_t sgrf_result_samples(const sgrf_result* result);
SGRF_API int sgrf_result_converged(const sgrf_result* result);
SGRF_API double sgrf_result_residual(const sgrf_result* result);
SGRF_API int64_t sgrf_result_trace_rows(const sgrf_result* result);
SGRF_API sgrf_status sgrf_result_trace_row(const sgrf_result* result, int64_t row,
                                           int64_t* out_samples, double* out_estimate,
                                           double* out_sigma, int n);
/* Writes the trace as CSV (samples,estimate_1..n,sigma_1..n,error). The error
 * column is filled when the field carries ground truth (builtin fields),
 * blank otherwise. */
SGRF_API sgrf_status sgrf_result_write_csv(const sgrf_result* result, const char* path);
SGRF_API void sgrf_result_free(sgrf_result* result);

/* ---- multi-root discovery ---- */

/* exclusion_radius <= 0 selects 0.05 * box diagonal. */
SGRF_API sgrf_status sgrf_find_roots(const sgrf_solver* solver, const sgrf_field* field,
                                     const sgrf_domain* domain, int max_roots,
                                     double exclusion_radius, double residual_accept,
                                     sgrf_roots** out_roots);
SGRF_API int sgrf_roots_count(const sgrf_roots* roots);
SGRF_API sgrf_status sgrf_roots_location(const sgrf_roots* roots, int index, double* out, int n);
SGRF_API double sgrf_roots_residual(const sgrf_roots* roots, int index);
SGRF_API int64_t sgrf_roots_samples(const sgrf_roots* roots, int index);
SGRF_API sgrf_status sgrf_roots_sigma(const sgrf_roots* roots, int index, double* out, int n);
SGRF_API void sgrf_roots_free(sgrf_roots* roots);

/* ---- convergence experiments ---- */

/* Runs one solve per seed. known_roots is a flattened n_roots x n array used
 * to fill per-checkpoint errors; pass NULL to fall back to the field's own
 * ground truth (builtins) or, failing that, an empty error column. */
SGRF_API sgrf_status sgrf_experiment_run(const sgrf_solver* solver, const sgrf_field* field,
                                         const sgrf_domain* domain, const uint64_t* seeds,
                                         int n_seeds, const double* known_roots, int n_roots,
                                         sgrf_experiment** out_experiment);
SGRF_API int sgrf_experiment_traces(const sgrf_experiment* experiment);
SGRF_API sgrf_status sgrf_experiment_write_csv(const sgrf_experiment* experiment, int trace,
                                               const char* path);
/* model: "power" (ln err vs ln N) | "exponential" (ln err vs N, plateau
 * excluded). Outputs may be NULL when not wanted. */
SGRF_API sgrf_status sgrf_experiment_fit(const sgrf_experiment* experiment, const char* model,
                                         double* out_slope, double* out_intercept,
                                         double* out_r_squared, int64_t* out_fit_first,
                                         int64_t* out_fit_last);
/* Median final error for each eta (out_floors, n_etas entries). */
SGRF_API sgrf_status sgrf_eta_floor(const sgrf_solver* solver, const sgrf_field* field,
                                    const sgrf_domain* domain, const double* etas, int n_etas,
                                    const uint64_t* seeds, int n_seeds,
                                    const double* known_roots, int n_roots, double* out_floors);
SGRF_API void sgrf_experiment_free(sgrf_experiment* experiment);

/* ---- misc ---- */

/* Default density exponent for dimension n and root multiplicity m. */
SGRF_API int sgrf_default_k(int n, int multiplicity);
SGRF_API const char* sgrf_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SGRF_H */
