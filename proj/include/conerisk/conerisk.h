/* C interface to the conerisk library. All functions are thread-safe; the
 * last error message is kept per thread. */
#ifndef CONERISK_H
#define CONERISK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CONERISK_API __declspec(dllexport)
#else
#define CONERISK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CONERISK_OK = 0,
  CONERISK_INVALID_INPUT = 1,
  CONERISK_NUMERICAL_ERROR = 2,
  CONERISK_VERIFICATION_FAILED = 3,
  CONERISK_INTERNAL_ERROR = 4
} conerisk_status;

typedef struct conerisk_set conerisk_set;
typedef struct conerisk_text conerisk_text;

typedef struct {
  uint64_t samples;
  uint64_t seed;
  int workers;       /* 0: CONERISK_WORKERS or hardware concurrency */
  const char* noise; /* "gaussian", "uniform", "table:<csv>"; NULL means gaussian */
} conerisk_mc_options;

CONERISK_API const char* conerisk_version(void);
/* Message describing the most recent failure on this thread, or "". */
CONERISK_API const char* conerisk_last_error(void);

CONERISK_API conerisk_status conerisk_set_parse(const char* spec, conerisk_set** out);
CONERISK_API void conerisk_set_free(conerisk_set* set);
CONERISK_API conerisk_status conerisk_set_dim(const conerisk_set* set, size_t* out);
CONERISK_API conerisk_status conerisk_set_family(const conerisk_set* set, conerisk_text** out);

/* out receives n values; converged (nullable) is set to 0 or 1. */
CONERISK_API conerisk_status conerisk_project(const conerisk_set* set, const double* x, size_t n, double* out,
                                              int* converged);

/* Monte Carlo statistical dimension of a cone, optionally intersected with
 * the hyperplane orthogonal to `hyperplane` (NULL for none, length n). */
CONERISK_API conerisk_status conerisk_statdim(const conerisk_set* cone, const double* hyperplane, size_t n,
                                              const conerisk_mc_options* options, double* value,
                                              double* std_error);

CONERISK_API conerisk_status conerisk_limits_report(const conerisk_set* set, const double* theta, size_t n,
                                                    const conerisk_mc_options* options, conerisk_text** out);

/* Risk curve CSV for a scenario file. workers overrides the file setting. */
CONERISK_API conerisk_status conerisk_sweep(const char* scenario_path, int workers, conerisk_text** out);

/* samples = 0 emits the analytic columns only. */
CONERISK_API conerisk_status conerisk_table1(uint64_t samples, uint64_t seed, int workers, conerisk_text** out);

CONERISK_API conerisk_status conerisk_spiking(size_t n, uint64_t samples, uint64_t seed, int workers,
                                              conerisk_text** out);

/* Full verification report. Returns CONERISK_VERIFICATION_FAILED (with the
 * report still in *out) when any criterion fails. */
CONERISK_API conerisk_status conerisk_verify(uint64_t seed, int workers, double tol_scale, conerisk_text** out);
CONERISK_API conerisk_status conerisk_verify_criterion(int id, uint64_t seed, int workers, double tol_scale,
                                                       int* passed, conerisk_text** out);

/* Reads all numbers of a CSV file in row order; free with conerisk_vector_free. */
CONERISK_API conerisk_status conerisk_load_csv_vector(const char* path, double** data, size_t* n);
CONERISK_API void conerisk_vector_free(double* data);

CONERISK_API const char* conerisk_text_data(const conerisk_text* text);
CONERISK_API size_t conerisk_text_size(const conerisk_text* text);
CONERISK_API void conerisk_text_free(conerisk_text* text);

#ifdef __cplusplus
}
#endif

#endif
