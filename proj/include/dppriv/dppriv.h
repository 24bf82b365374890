/*
 * dppriv - distance-preserving data perturbation and privacy attacks.
 *
 * C interface to the dppriv core.  All functions return a dpp_status code;
 * DPP_OK means success.  On failure, dpp_last_error() returns a thread-local
 * message describing what went wrong.  Objects returned through out
 * parameters are owned by the caller and released with the matching
 * *_destroy function; strings returned through out parameters are released
 * with dpp_string_free.
 *
 * Data convention: matrices are column-major and a dataset stores one record
 * per column (an n x m matrix holds m records with n attributes).  CSV files
 * are the transpose: one record per file row.
 */

#ifndef DPPRIV_H
#define DPPRIV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dpp_status {
    DPP_OK = 0,
    DPP_ERROR_INVALID_ARGUMENT = 1,
    DPP_ERROR_DIMENSION_MISMATCH = 2,
    DPP_ERROR_INSUFFICIENT_DATA = 3,
    DPP_ERROR_INFEASIBLE = 4,
    DPP_ERROR_BUDGET_EXHAUSTED = 5,
    DPP_ERROR_PARSE = 6,
    DPP_ERROR_IO = 7,
    DPP_ERROR_SINGULAR = 8,
    DPP_ERROR_NULL_POINTER = 9,
    DPP_ERROR_INTERNAL = 10
} dpp_status;

const char* dpp_version(void);
const char* dpp_status_name(dpp_status status);

/* Message for the most recent failure on the calling thread. */
const char* dpp_last_error(void);

void dpp_string_free(char* text);

/* ------------------------------------------------------------------ */
/* Matrices                                                            */
/* ------------------------------------------------------------------ */

typedef struct dpp_matrix dpp_matrix;

/* data is column-major with rows*cols entries; it is copied. */
dpp_status dpp_matrix_create(int64_t rows, int64_t cols, const double* data,
                             dpp_matrix** out);

/* Numeric CSV, one record per file row.  drop_duplicate_records removes
 * records that exactly repeat an earlier one. */
dpp_status dpp_matrix_read_csv(const char* path, int has_header,
                               int drop_duplicate_records, dpp_matrix** out);
dpp_status dpp_matrix_write_csv(const dpp_matrix* matrix, const char* path);

int64_t dpp_matrix_rows(const dpp_matrix* matrix);
int64_t dpp_matrix_cols(const dpp_matrix* matrix);
dpp_status dpp_matrix_get(const dpp_matrix* matrix, int64_t row, int64_t col,
                          double* out);
/* Copies all entries, column-major; capacity must be at least rows*cols. */
dpp_status dpp_matrix_copy_data(const dpp_matrix* matrix, double* buffer,
                                int64_t capacity);
void dpp_matrix_destroy(dpp_matrix* matrix);

/* ------------------------------------------------------------------ */
/* Perturbation                                                        */
/* ------------------------------------------------------------------ */

typedef struct dpp_rigid_motion dpp_rigid_motion;

/* Rotation Haar-uniform on the orthogonal group; translation entries are
 * independent normals scaled by translation_scale when with_translation is
 * nonzero, otherwise zero. */
dpp_status dpp_rigid_motion_generate(int64_t dim, int with_translation,
                                     double translation_scale, uint64_t seed,
                                     dpp_rigid_motion** out);
dpp_status dpp_rigid_motion_rotation(const dpp_rigid_motion* motion, dpp_matrix** out);
/* dim x 1 matrix. */
dpp_status dpp_rigid_motion_translation(const dpp_rigid_motion* motion, dpp_matrix** out);
void dpp_rigid_motion_destroy(dpp_rigid_motion* motion);

/* Fills out[0..count) with a uniformly random bijection of {0..count-1}. */
dpp_status dpp_random_permutation(int64_t count, uint64_t seed, int64_t* out);

/* Column permutation[i] of the result is motion applied to record i; a NULL
 * permutation means identity. */
dpp_status dpp_perturb(const dpp_matrix* data, const dpp_rigid_motion* motion,
                       const int64_t* permutation, dpp_matrix** out);

/* ------------------------------------------------------------------ */
/* Breach metrics                                                      */
/* ------------------------------------------------------------------ */

typedef struct dpp_breach_outcome {
    double relative_euclid; /* ||estimate - record|| / ||record|| */
    double min_nad;         /* minimum per-entry normalized absolute difference */
    double cos_gap;         /* 1 - cosine similarity */
    int eps_breach;
    int med_breach;
    int cos_breach;
} dpp_breach_outcome;

dpp_status dpp_breach_evaluate(const double* record, const double* estimate,
                               int64_t dim, double epsilon,
                               dpp_breach_outcome* out);

/* ------------------------------------------------------------------ */
/* Known-input attack                                                  */
/* ------------------------------------------------------------------ */

typedef struct dpp_known_input_options {
    double epsilon;
    double link_tol;          /* relative tolerance for the linking phase */
    double rank_tol;          /* relative singular-value threshold */
    uint64_t node_budget;     /* 0 = unlimited search nodes */
    int assume_translation;   /* nonzero: distance-only linking + differencing */
    uint64_t seed;
} dpp_known_input_options;

dpp_status dpp_known_input_options_init(dpp_known_input_options* options);

typedef struct dpp_kia_report dpp_kia_report;

/* known holds the attacker's known records (columns); data is the released
 * perturbed dataset. */
dpp_status dpp_known_input_attack(const dpp_matrix* known, const dpp_matrix* data,
                                  const dpp_known_input_options* options,
                                  dpp_kia_report** out);

int64_t dpp_kia_report_linked_count(const dpp_kia_report* report);
dpp_status dpp_kia_report_chosen(const dpp_kia_report* report, int64_t* column,
                                 double* breach_probability);
/* n x 1 estimate of the record perturbed into the chosen column. */
dpp_status dpp_kia_report_estimate(const dpp_kia_report* report, dpp_matrix** out);
dpp_status dpp_kia_report_estimator(const dpp_kia_report* report, dpp_matrix** out);
dpp_status dpp_kia_report_to_json(const dpp_kia_report* report, char** out);
void dpp_kia_report_destroy(dpp_kia_report* report);

/* ------------------------------------------------------------------ */
/* Known-sample (PCA) attack                                           */
/* ------------------------------------------------------------------ */

typedef struct dpp_known_sample_options {
    int permutations;        /* label permutations per two-sample p-value */
    int pool_cap;            /* pooled-sample cap before subsampling */
    int sign_search_cap;     /* maximum dimension for the 2^n search */
    int assume_translation;  /* nonzero: difference-pair attack */
    uint64_t seed;
} dpp_known_sample_options;

dpp_status dpp_known_sample_options_init(dpp_known_sample_options* options);

typedef struct dpp_ksa_result dpp_ksa_result;

/* sample holds independent draws from the data distribution (columns); data
 * is the released perturbed dataset. */
dpp_status dpp_known_sample_attack(const dpp_matrix* sample, const dpp_matrix* data,
                                   const dpp_known_sample_options* options,
                                   dpp_ksa_result** out);

dpp_status dpp_ksa_result_p_value(const dpp_ksa_result* result, double* out);
dpp_status dpp_ksa_result_chosen(const dpp_ksa_result* result, int64_t* out);
/* Estimates for every record, one column per column of the data. */
dpp_status dpp_ksa_result_estimates(const dpp_ksa_result* result, dpp_matrix** out);
dpp_status dpp_ksa_result_estimator(const dpp_ksa_result* result, dpp_matrix** out);
dpp_status dpp_ksa_result_to_json(const dpp_ksa_result* result, char** out);
void dpp_ksa_result_destroy(dpp_ksa_result* result);

/* ------------------------------------------------------------------ */
/* Diagnostics                                                         */
/* ------------------------------------------------------------------ */

/* Smallest ratio of descending eigenvalue pairs; eigenvalues must be
 * positive. */
dpp_status dpp_min_eigen_ratio(const dpp_matrix* covariance, double* out);

/* Distinguishability of a Gaussian with mean alpha*mu from its nearest
 * sign-flipped version; covariance needs distinct positive eigenvalues. */
dpp_status dpp_invariance_gaussian(const double* mu, int64_t dim, double alpha,
                                   const dpp_matrix* covariance, double* out);

/* ------------------------------------------------------------------ */
/* Experiment harness                                                  */
/* ------------------------------------------------------------------ */

typedef struct dpp_experiment_report dpp_experiment_report;

/* config_json is the declarative experiment description; the seed fully
 * determines all randomness and is supplied separately. */
dpp_status dpp_experiment_run(const char* config_json, uint64_t seed,
                              dpp_experiment_report** out);

/* format is "csv" or "json". */
dpp_status dpp_experiment_report_write(const dpp_experiment_report* report,
                                       const char* format, const char* path);
dpp_status dpp_experiment_report_to_json(const dpp_experiment_report* report,
                                         char** out);
void dpp_experiment_report_destroy(dpp_experiment_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DPPRIV_H */
