#ifndef RELSYS_H
#define RELSYS_H

/* C interface to the correlated-workload reliability engine.
 *
 * Every fallible call returns a status code; on failure,
 * relsys_last_error() describes the problem for the calling thread.
 * Strings returned through out-parameters are heap-allocated and must be
 * released with relsys_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
#define RELSYS_OK 0
#define RELSYS_ERR_INTERNAL 1
#define RELSYS_ERR_VALIDATION 2
#define RELSYS_ERR_NUMERICAL 3
#define RELSYS_ERR_CAPACITY 4

/* Structure-function expansion modes. */
#define RELSYS_MODE_IDEMPOTENT 0
#define RELSYS_MODE_PAPER 1

/* Monte Carlo estimators. */
#define RELSYS_ESTIMATOR_CRUDE 0
#define RELSYS_ESTIMATOR_RAO_BLACKWELL 1

/* Stream-correlation conventions. */
#define RELSYS_CONVENTION_MEAN_FUNCTION 0
#define RELSYS_CONVENTION_PAPER_INTENSITY 1

typedef struct relsys_model relsys_model;

/* Quadrature tolerance overrides; fields <= 0 keep the defaults
 * (rel 1e-8, abs 1e-12). */
typedef struct relsys_quad_opts {
    double rel_tol;  /* <= 0 keeps the default 1e-8 */
    double abs_tol;  /* <= 0 keeps the default 1e-12 */
    int max_depth;   /* <= 0 keeps the default 40 */
} relsys_quad_opts;

/* Message for the most recent failure on the calling thread. */
const char* relsys_last_error(void);

/* Parses and validates a system config; reports field-path diagnostics. */
int relsys_model_from_json(const char* json_text, relsys_model** out_model);

void relsys_model_free(relsys_model* model);

/* Serializes the model back to its config JSON. */
int relsys_model_to_json(const relsys_model* model, char** out_json);

/* Closed-form survival at each grid time; values must hold n doubles. */
int relsys_survival_curve(const relsys_model* model, const double* grid, size_t n, int mode,
                          const relsys_quad_opts* quad, double* values);

/* Monte Carlo survival estimate; values and stderrs must hold n doubles.
 * Output is identical for any thread count at fixed (seed, reps). */
int relsys_simulate_curve(const relsys_model* model, const double* grid, size_t n, uint64_t reps,
                          uint64_t seed, int estimator, int threads,
                          const relsys_quad_opts* quad, double* values, double* stderrs);

/* Structure-function expansion as a canonical JSON array of
 * {"coeff": int, "exponents": {id: int}}. */
int relsys_expansion_json(const relsys_model* model, int mode, char** out_json);

/* Closed-form correlation of the two composite arrival streams at t. */
int relsys_correlation_closed(const relsys_model* model, const char* node_i, const char* node_j,
                              double t, int convention, double* out_value);

/* Simulated correlation of the composite streams with its standard error. */
int relsys_correlation_simulated(const relsys_model* model, const char* node_i,
                                 const char* node_j, double t, uint64_t reps, uint64_t seed,
                                 double* out_value, double* out_se);

void relsys_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RELSYS_H */
