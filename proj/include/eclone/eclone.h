/*
 * C interface to the entanglement-cloning simulator.
 *
 * Objects are opaque handles created by eclone_*_create/_run functions and
 * released with the matching _free function. Every fallible call returns an
 * eclone_status; on failure a human-readable message for the calling thread
 * is available from eclone_last_error() until the next failing call.
 *
 * Strings returned through char** out-parameters are heap allocated and must
 * be released with eclone_string_free().
 */
#ifndef ECLONE_ECLONE_H
#define ECLONE_ECLONE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ECLONE_BUILDING_LIBRARY)
#    define ECLONE_API __declspec(dllexport)
#  else
#    define ECLONE_API __declspec(dllimport)
#  endif
#else
#  define ECLONE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eclone_status {
  ECLONE_OK = 0,
  ECLONE_ERR_INVALID_ARGUMENT = 1, /* null pointer or violated precondition */
  ECLONE_ERR_DOMAIN = 2,           /* parameter outside its numeric range */
  ECLONE_ERR_DIMENSION = 3,
  ECLONE_ERR_LABEL = 4,
  ECLONE_ERR_REGISTRY = 5,
  ECLONE_ERR_DEGENERATE = 6, /* data carry no information, e.g. all-zero counts */
  ECLONE_ERR_PARSE = 7,
  ECLONE_ERR_IO = 8,
  ECLONE_ERR_INTERNAL = 9
} eclone_status;

ECLONE_API const char* eclone_last_error(void);
ECLONE_API const char* eclone_status_name(eclone_status status);
ECLONE_API const char* eclone_version(void);
ECLONE_API void eclone_string_free(char* s);

/* ---------------------------------------------------------------- states */

typedef struct eclone_density eclone_density;

/* phi+, psi+, psi-, sigma, mixed, schmidt:<theta radians>. */
ECLONE_API eclone_status eclone_density_named(const char* name, eclone_density** out);
/* { "labels": [...], "matrix": [[[re, im], ...], ...] } */
ECLONE_API eclone_status eclone_density_from_json(const char* json, eclone_density** out);
ECLONE_API eclone_status eclone_density_to_json(const eclone_density* rho, char** out_json);
ECLONE_API eclone_status eclone_density_clone(const eclone_density* rho, eclone_density** out);
ECLONE_API void eclone_density_free(eclone_density* rho);

ECLONE_API size_t eclone_density_num_qubits(const eclone_density* rho);
ECLONE_API size_t eclone_density_dim(const eclone_density* rho);
/* Copies dim*dim entries as interleaved (re, im) pairs, row-major.
 * `capacity` counts doubles and must be at least 2*dim*dim. */
ECLONE_API eclone_status eclone_density_entries(const eclone_density* rho, double* out, size_t capacity);

/* ---------------------------------------------------------------- metrics */

typedef struct eclone_metrics {
  double fidelity_phi_plus;
  double witness;              /* Tr[(I/2 - |Phi+><Phi+|) rho] */
  double witness_correlations; /* (1 - <XX> + <YY> - <ZZ>) / 4 */
  double xx, yy, zz;
  double concurrence;
  double entropy_bits;
} eclone_metrics;

/* All single-state measures of a two-qubit state. */
ECLONE_API eclone_status eclone_metrics_compute(const eclone_density* rho, eclone_metrics* out);
ECLONE_API eclone_status eclone_trace_distance(const eclone_density* a, const eclone_density* b, double* out);
ECLONE_API eclone_status eclone_uhlmann_fidelity(const eclone_density* a, const eclone_density* b, double* out);
/* Fidelity of a two-qubit state to a named pure input (see eclone_density_named). */
ECLONE_API eclone_status eclone_fidelity_to_named(const eclone_density* rho, const char* input_name, double* out);

/* ---------------------------------------------------------------- cloner */

typedef enum eclone_model { ECLONE_MODEL_IDEAL = 0, ECLONE_MODEL_PHYSICAL = 1 } eclone_model;

typedef struct eclone_network {
  const char* input; /* phi+, psi+, psi-, schmidt:<theta> */
  double r1;
  double r2;
  double overlap_sq; /* 1 = indistinguishable photons */
  eclone_model model;
} eclone_network;

typedef struct eclone_outcome eclone_outcome;

ECLONE_API eclone_status eclone_clone_run(const eclone_network* network, eclone_outcome** out);
ECLONE_API void eclone_outcome_free(eclone_outcome* outcome);
/* 0 when post-selection removed every term; the state accessors then fail
 * with ECLONE_ERR_DEGENERATE. */
ECLONE_API int eclone_outcome_heralded(const eclone_outcome* outcome);
ECLONE_API double eclone_outcome_success_weight(const eclone_outcome* outcome);
/* Borrowed pointers, valid until the outcome is freed. */
ECLONE_API eclone_status eclone_outcome_local(const eclone_outcome* outcome, const eclone_density** out);
ECLONE_API eclone_status eclone_outcome_distant(const eclone_outcome* outcome, const eclone_density** out);
/* Fidelities of both clones to the network's input state. */
ECLONE_API eclone_status eclone_outcome_fidelities(const eclone_outcome* outcome, double* local, double* distant);

typedef struct eclone_sweep_point {
  double r;
  double fidelity_local;
  double fidelity_distant;
  double success_weight;
} eclone_sweep_point;

/* Physical model at R1 = R2 = grid[i]; `out` must hold `count` points.
 * threads = 0 uses every logical processor. */
ECLONE_API eclone_status eclone_sweep(const char* input, const double* grid, size_t count, double overlap_sq,
                                      unsigned threads, eclone_sweep_point* out);
/* Sweep rows rendered as `R,F_local,F_distant,success_weight` CSV. */
ECLONE_API eclone_status eclone_sweep_to_csv(const eclone_sweep_point* points, size_t count, char** out_csv);

ECLONE_API eclone_status eclone_hom_visibility(double r, double overlap_sq, double* out);
ECLONE_API eclone_status eclone_fit_overlap(double measured_visibility, double r, double* out_overlap_sq);

/* ---------------------------------------------------------------- tomography */

typedef struct eclone_counts eclone_counts;

ECLONE_API eclone_status eclone_counts_sample(const eclone_density* rho, double n_per_setting, uint64_t seed,
                                              eclone_counts** out);
/* Header `setting_a,setting_b,count,exposure`. */
ECLONE_API eclone_status eclone_counts_from_csv(const char* csv, eclone_counts** out);
ECLONE_API eclone_status eclone_counts_to_csv(const eclone_counts* counts, char** out_csv);
ECLONE_API size_t eclone_counts_size(const eclone_counts* counts);
ECLONE_API void eclone_counts_free(eclone_counts* counts);

typedef struct eclone_mle_info {
  double log_likelihood;
  size_t iterations;
  int converged;
  int likelihood_monotone; /* 1 if no accepted step lowered the likelihood */
} eclone_mle_info;

ECLONE_API eclone_status eclone_mle(const eclone_counts* counts, eclone_density** out_rho, eclone_mle_info* info);

typedef enum eclone_statistic {
  ECLONE_STAT_FIDELITY = 0, /* to Phi+ unless a reference is supplied */
  ECLONE_STAT_CONCURRENCE = 1,
  ECLONE_STAT_ENTROPY = 2,
  ECLONE_STAT_WITNESS = 3,
  ECLONE_STAT_TRACE_DISTANCE = 4,
  ECLONE_STAT_UHLMANN_FIDELITY = 5
} eclone_statistic;

typedef struct eclone_resamples eclone_resamples;

/* Reconstructions of Poisson resamplings of the observed counts. */
ECLONE_API eclone_status eclone_resample(const eclone_counts* counts, size_t n_resamples, uint64_t seed,
                                         unsigned threads, eclone_resamples** out);
ECLONE_API void eclone_resamples_free(eclone_resamples* resamples);
/* Mean and sample standard deviation of a statistic over the resamples.
 * `reference` may be NULL (Phi+); for ECLONE_STAT_FIDELITY it must be pure. */
ECLONE_API eclone_status eclone_resamples_summary(const eclone_resamples* resamples, eclone_statistic statistic,
                                                  const eclone_density* reference, double* mean, double* std);

/* ---------------------------------------------------------------- checks */

typedef struct eclone_check_report eclone_check_report;

typedef struct eclone_check {
  const char* id;
  const char* description;
  const char* comparison; /* within, >=, >, <=, holds */
  double computed;
  double expected;
  double tolerance;
  int passed;
} eclone_check;

ECLONE_API eclone_status eclone_checks_run(uint64_t seed, unsigned threads, eclone_check_report** out);
ECLONE_API size_t eclone_check_count(const eclone_check_report* report);
/* Strings in `out` are borrowed from the report. */
ECLONE_API eclone_status eclone_check_get(const eclone_check_report* report, size_t index, eclone_check* out);
ECLONE_API void eclone_check_report_free(eclone_check_report* report);

/* ---------------------------------------------------------------- files */

ECLONE_API eclone_status eclone_read_file(const char* path, char** out_contents);
ECLONE_API eclone_status eclone_write_file(const char* path, const char* contents);

#ifdef __cplusplus
}
#endif

#endif /* ECLONE_ECLONE_H */
