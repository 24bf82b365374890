#include "dppriv/dppriv.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "breach.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "known_input.hpp"
#include "known_sample.hpp"
#include "perturb.hpp"
#include "random.hpp"
#include "types.hpp"

using nlohmann::ordered_json;

struct dpp_matrix {
    dppriv::Matrix value;
};

struct dpp_rigid_motion {
    dppriv::RigidMotion value;
};

struct dpp_kia_report {
    dppriv::kia::KnownInputReport value;
};

struct dpp_ksa_result {
    dppriv::ksa::PcaAttackResult value;
};

struct dpp_experiment_report {
    dppriv::harness::ExperimentReport value;
};

namespace {

thread_local std::string g_last_error;

dpp_status map_error(dppriv::errc code) {
    switch (code) {
    case dppriv::errc::invalid_argument: return DPP_ERROR_INVALID_ARGUMENT;
    case dppriv::errc::dimension_mismatch: return DPP_ERROR_DIMENSION_MISMATCH;
    case dppriv::errc::insufficient_data: return DPP_ERROR_INSUFFICIENT_DATA;
    case dppriv::errc::infeasible: return DPP_ERROR_INFEASIBLE;
    case dppriv::errc::budget_exhausted: return DPP_ERROR_BUDGET_EXHAUSTED;
    case dppriv::errc::parse: return DPP_ERROR_PARSE;
    case dppriv::errc::io: return DPP_ERROR_IO;
    case dppriv::errc::singular: return DPP_ERROR_SINGULAR;
    }
    return DPP_ERROR_INTERNAL;
}

template <typename Fn>
dpp_status guarded(Fn&& fn) {
    try {
        fn();
        return DPP_OK;
    } catch (const dppriv::error& e) {
        g_last_error = e.what();
        return map_error(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DPP_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return DPP_ERROR_INTERNAL;
    }
}

dpp_status null_error(const char* what) {
    g_last_error = std::string(what) + ": null pointer";
    return DPP_ERROR_NULL_POINTER;
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

ordered_json json_vector(const dppriv::Vector& v) {
    ordered_json j = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

} // namespace

extern "C" {

const char* dpp_version(void) { return "1.0.0"; }

const char* dpp_status_name(dpp_status status) {
    switch (status) {
    case DPP_OK: return "ok";
    case DPP_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case DPP_ERROR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case DPP_ERROR_INSUFFICIENT_DATA: return "insufficient_data";
    case DPP_ERROR_INFEASIBLE: return "infeasible";
    case DPP_ERROR_BUDGET_EXHAUSTED: return "budget_exhausted";
    case DPP_ERROR_PARSE: return "parse";
    case DPP_ERROR_IO: return "io";
    case DPP_ERROR_SINGULAR: return "singular";
    case DPP_ERROR_NULL_POINTER: return "null_pointer";
    case DPP_ERROR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* dpp_last_error(void) { return g_last_error.c_str(); }

void dpp_string_free(char* text) { delete[] text; }

/* ------------------------------------------------------------------ */
/* Matrices                                                            */
/* ------------------------------------------------------------------ */

dpp_status dpp_matrix_create(int64_t rows, int64_t cols, const double* data,
                             dpp_matrix** out) {
    if (!data || !out) return null_error("dpp_matrix_create");
    return guarded([&] {
        if (rows < 1 || cols < 1)
            dppriv::fail(dppriv::errc::invalid_argument, "matrix dimensions must be positive");
        dppriv::Matrix m(rows, cols);
        std::memcpy(m.data(), data, sizeof(double) * static_cast<std::size_t>(rows * cols));
        *out = new dpp_matrix{std::move(m)};
    });
}

dpp_status dpp_matrix_read_csv(const char* path, int has_header,
                               int drop_duplicate_records, dpp_matrix** out) {
    if (!path || !out) return null_error("dpp_matrix_read_csv");
    return guarded([&] {
        dppriv::CsvOptions options;
        options.has_header = has_header != 0;
        options.drop_duplicate_records = drop_duplicate_records != 0;
        *out = new dpp_matrix{dppriv::read_csv(path, options)};
    });
}

dpp_status dpp_matrix_write_csv(const dpp_matrix* matrix, const char* path) {
    if (!matrix || !path) return null_error("dpp_matrix_write_csv");
    return guarded([&] { dppriv::write_csv(matrix->value, path); });
}

int64_t dpp_matrix_rows(const dpp_matrix* matrix) {
    return matrix ? static_cast<int64_t>(matrix->value.rows()) : -1;
}

int64_t dpp_matrix_cols(const dpp_matrix* matrix) {
    return matrix ? static_cast<int64_t>(matrix->value.cols()) : -1;
}

dpp_status dpp_matrix_get(const dpp_matrix* matrix, int64_t row, int64_t col,
                          double* out) {
    if (!matrix || !out) return null_error("dpp_matrix_get");
    return guarded([&] {
        if (row < 0 || row >= matrix->value.rows() || col < 0 || col >= matrix->value.cols())
            dppriv::fail(dppriv::errc::invalid_argument, "matrix index out of range");
        *out = matrix->value(row, col);
    });
}

dpp_status dpp_matrix_copy_data(const dpp_matrix* matrix, double* buffer,
                                int64_t capacity) {
    if (!matrix || !buffer) return null_error("dpp_matrix_copy_data");
    return guarded([&] {
        int64_t needed = static_cast<int64_t>(matrix->value.size());
        if (capacity < needed)
            dppriv::fail(dppriv::errc::invalid_argument, "buffer too small");
        std::memcpy(buffer, matrix->value.data(), sizeof(double) * static_cast<std::size_t>(needed));
    });
}

void dpp_matrix_destroy(dpp_matrix* matrix) { delete matrix; }

/* ------------------------------------------------------------------ */
/* Perturbation                                                        */
/* ------------------------------------------------------------------ */

dpp_status dpp_rigid_motion_generate(int64_t dim, int with_translation,
                                     double translation_scale, uint64_t seed,
                                     dpp_rigid_motion** out) {
    if (!out) return null_error("dpp_rigid_motion_generate");
    return guarded([&] {
        dppriv::RandomStream rng(seed);
        *out = new dpp_rigid_motion{dppriv::generate_rigid_motion(
            static_cast<int>(dim), with_translation != 0, translation_scale, rng)};
    });
}

dpp_status dpp_rigid_motion_rotation(const dpp_rigid_motion* motion, dpp_matrix** out) {
    if (!motion || !out) return null_error("dpp_rigid_motion_rotation");
    return guarded([&] { *out = new dpp_matrix{motion->value.rotation}; });
}

dpp_status dpp_rigid_motion_translation(const dpp_rigid_motion* motion, dpp_matrix** out) {
    if (!motion || !out) return null_error("dpp_rigid_motion_translation");
    return guarded([&] { *out = new dpp_matrix{motion->value.translation}; });
}

void dpp_rigid_motion_destroy(dpp_rigid_motion* motion) { delete motion; }

dpp_status dpp_random_permutation(int64_t count, uint64_t seed, int64_t* out) {
    if (!out) return null_error("dpp_random_permutation");
    return guarded([&] {
        if (count < 1)
            dppriv::fail(dppriv::errc::invalid_argument, "permutation size must be positive");
        dppriv::RandomStream rng(seed);
        dppriv::RecordPermutation perm = dppriv::random_permutation(static_cast<int>(count), rng);
        for (int64_t i = 0; i < count; ++i) out[i] = perm[static_cast<std::size_t>(i)];
    });
}

dpp_status dpp_perturb(const dpp_matrix* data, const dpp_rigid_motion* motion,
                       const int64_t* permutation, dpp_matrix** out) {
    if (!data || !motion || !out) return null_error("dpp_perturb");
    return guarded([&] {
        dppriv::RecordPermutation perm;
        if (permutation) {
            perm.resize(static_cast<std::size_t>(data->value.cols()));
            for (Eigen::Index i = 0; i < data->value.cols(); ++i)
                perm[static_cast<std::size_t>(i)] = static_cast<int>(permutation[i]);
        } else {
            perm = dppriv::identity_permutation(static_cast<int>(data->value.cols()));
        }
        *out = new dpp_matrix{dppriv::perturb(data->value, motion->value, perm)};
    });
}

/* ------------------------------------------------------------------ */
/* Breach metrics                                                      */
/* ------------------------------------------------------------------ */

dpp_status dpp_breach_evaluate(const double* record, const double* estimate,
                               int64_t dim, double epsilon,
                               dpp_breach_outcome* out) {
    if (!record || !estimate || !out) return null_error("dpp_breach_evaluate");
    return guarded([&] {
        if (dim < 1)
            dppriv::fail(dppriv::errc::invalid_argument, "dimension must be positive");
        Eigen::Map<const dppriv::Vector> x(record, dim);
        Eigen::Map<const dppriv::Vector> xhat(estimate, dim);
        dppriv::BreachOutcome outcome = dppriv::evaluate_breach(x, xhat, epsilon);
        out->relative_euclid = outcome.relative_euclid;
        out->min_nad = outcome.min_nad;
        out->cos_gap = outcome.cos_gap;
        out->eps_breach = outcome.eps_breach ? 1 : 0;
        out->med_breach = outcome.med_breach ? 1 : 0;
        out->cos_breach = outcome.cos_breach ? 1 : 0;
    });
}

/* ------------------------------------------------------------------ */
/* Known-input attack                                                  */
/* ------------------------------------------------------------------ */

dpp_status dpp_known_input_options_init(dpp_known_input_options* options) {
    if (!options) return null_error("dpp_known_input_options_init");
    options->epsilon = 0.15;
    options->link_tol = 1e-6;
    options->rank_tol = 1e-9;
    options->node_budget = 0;
    options->assume_translation = 0;
    options->seed = 0;
    return DPP_OK;
}

dpp_status dpp_known_input_attack(const dpp_matrix* known, const dpp_matrix* data,
                                  const dpp_known_input_options* options,
                                  dpp_kia_report** out) {
    if (!known || !data || !options || !out) return null_error("dpp_known_input_attack");
    return guarded([&] {
        dppriv::kia::KnownInputOptions core;
        core.link.tol = options->link_tol;
        core.link.node_budget = options->node_budget == 0
                                    ? std::numeric_limits<std::uint64_t>::max()
                                    : options->node_budget;
        core.rank_tol = options->rank_tol;
        dppriv::RandomStream rng(options->seed);
        dppriv::kia::KnownInputReport report =
            options->assume_translation
                ? dppriv::kia::known_input_attack_general(known->value, data->value,
                                                          options->epsilon, rng, core)
                : dppriv::kia::known_input_attack(known->value, data->value,
                                                  options->epsilon, rng, core);
        *out = new dpp_kia_report{std::move(report)};
    });
}

int64_t dpp_kia_report_linked_count(const dpp_kia_report* report) {
    return report ? static_cast<int64_t>(report->value.link.assignment.domain.size()) : -1;
}

dpp_status dpp_kia_report_chosen(const dpp_kia_report* report, int64_t* column,
                                 double* breach_probability) {
    if (!report || !column || !breach_probability) return null_error("dpp_kia_report_chosen");
    *column = report->value.chosen_j;
    *breach_probability = report->value.rho_max;
    return DPP_OK;
}

dpp_status dpp_kia_report_estimate(const dpp_kia_report* report, dpp_matrix** out) {
    if (!report || !out) return null_error("dpp_kia_report_estimate");
    return guarded([&] { *out = new dpp_matrix{report->value.estimate}; });
}

dpp_status dpp_kia_report_estimator(const dpp_kia_report* report, dpp_matrix** out) {
    if (!report || !out) return null_error("dpp_kia_report_estimator");
    return guarded([&] { *out = new dpp_matrix{report->value.estimator}; });
}

dpp_status dpp_kia_report_to_json(const dpp_kia_report* report, char** out) {
    if (!report || !out) return null_error("dpp_kia_report_to_json");
    return guarded([&] {
        const dppriv::kia::KnownInputReport& r = report->value;
        ordered_json j;
        ordered_json linked = ordered_json::array();
        for (std::size_t t = 0; t < r.link.assignment.domain.size(); ++t) {
            ordered_json pair;
            pair["known"] = r.link.assignment.domain[t];
            pair["column"] = r.link.assignment.image[t];
            linked.push_back(pair);
        }
        j["linked"] = linked;
        j["duplicates_dropped"] = r.link.duplicates_dropped;
        j["rank"] = r.k;
        j["codim"] = r.codim;
        j["anchor"] = r.anchor;
        j["chosen_column"] = r.chosen_j;
        j["breach_probability"] = r.rho_max;
        ordered_json table = ordered_json::array();
        for (const auto& [column, rho] : r.rho_table) {
            ordered_json entry;
            entry["column"] = column;
            entry["rho"] = rho;
            table.push_back(entry);
        }
        j["rho_table"] = table;
        j["estimate"] = json_vector(r.estimate);
        j["seconds_link"] = r.seconds_link;
        j["seconds_rho"] = r.seconds_rho;
        *out = copy_string(j.dump(2) + "\n");
    });
}

void dpp_kia_report_destroy(dpp_kia_report* report) { delete report; }

/* ------------------------------------------------------------------ */
/* Known-sample attack                                                 */
/* ------------------------------------------------------------------ */

dpp_status dpp_known_sample_options_init(dpp_known_sample_options* options) {
    if (!options) return null_error("dpp_known_sample_options_init");
    options->permutations = 199;
    options->pool_cap = 2000;
    options->sign_search_cap = 20;
    options->assume_translation = 0;
    options->seed = 0;
    return DPP_OK;
}

dpp_status dpp_known_sample_attack(const dpp_matrix* sample, const dpp_matrix* data,
                                   const dpp_known_sample_options* options,
                                   dpp_ksa_result** out) {
    if (!sample || !data || !options || !out) return null_error("dpp_known_sample_attack");
    return guarded([&] {
        dppriv::ksa::KnownSampleOptions core;
        core.permutations = options->permutations;
        core.pool_cap = options->pool_cap;
        core.sign_search_cap = options->sign_search_cap;
        dppriv::RandomStream rng(options->seed);
        dppriv::ksa::PcaAttackResult result =
            options->assume_translation
                ? dppriv::ksa::pca_attack_general(sample->value, data->value, core, rng)
                : dppriv::ksa::pca_attack_orthogonal(sample->value, data->value, core, rng);
        *out = new dpp_ksa_result{std::move(result)};
    });
}

dpp_status dpp_ksa_result_p_value(const dpp_ksa_result* result, double* out) {
    if (!result || !out) return null_error("dpp_ksa_result_p_value");
    *out = result->value.p_value;
    return DPP_OK;
}

dpp_status dpp_ksa_result_chosen(const dpp_ksa_result* result, int64_t* out) {
    if (!result || !out) return null_error("dpp_ksa_result_chosen");
    *out = result->value.chosen_j;
    return DPP_OK;
}

dpp_status dpp_ksa_result_estimates(const dpp_ksa_result* result, dpp_matrix** out) {
    if (!result || !out) return null_error("dpp_ksa_result_estimates");
    return guarded([&] { *out = new dpp_matrix{result->value.estimates}; });
}

dpp_status dpp_ksa_result_estimator(const dpp_ksa_result* result, dpp_matrix** out) {
    if (!result || !out) return null_error("dpp_ksa_result_estimator");
    return guarded([&] { *out = new dpp_matrix{result->value.estimator}; });
}

dpp_status dpp_ksa_result_to_json(const dpp_ksa_result* result, char** out) {
    if (!result || !out) return null_error("dpp_ksa_result_to_json");
    return guarded([&] {
        const dppriv::ksa::PcaAttackResult& r = result->value;
        ordered_json j;
        j["p_value"] = r.p_value;
        j["signs"] = json_vector(r.signs);
        j["chosen_column"] = r.chosen_j;
        j["mean_correction"] = json_vector(r.mean_correction);
        ordered_json diag;
        diag["sample_min_relative_gap"] = r.diagnostics.sample_min_relative_gap;
        diag["data_min_relative_gap"] = r.diagnostics.data_min_relative_gap;
        diag["sample_degenerate"] = r.diagnostics.sample_degenerate;
        diag["data_degenerate"] = r.diagnostics.data_degenerate;
        if (r.diagnostics.sample_eigen_ratio)
            diag["sample_eigen_ratio"] = *r.diagnostics.sample_eigen_ratio;
        else
            diag["sample_eigen_ratio"] = nullptr;
        if (r.diagnostics.data_eigen_ratio)
            diag["data_eigen_ratio"] = *r.diagnostics.data_eigen_ratio;
        else
            diag["data_eigen_ratio"] = nullptr;
        j["diagnostics"] = diag;
        /* The exhaustive table doubles per dimension; keep the report small. */
        if (r.p_table.size() <= 4096) j["p_table"] = r.p_table;
        j["seconds_sign_search"] = r.seconds_sign_search;
        *out = copy_string(j.dump(2) + "\n");
    });
}

void dpp_ksa_result_destroy(dpp_ksa_result* result) { delete result; }

/* ------------------------------------------------------------------ */
/* Diagnostics                                                         */
/* ------------------------------------------------------------------ */

dpp_status dpp_min_eigen_ratio(const dpp_matrix* covariance, double* out) {
    if (!covariance || !out) return null_error("dpp_min_eigen_ratio");
    return guarded([&] { *out = dppriv::ksa::min_eigen_ratio(covariance->value); });
}

dpp_status dpp_invariance_gaussian(const double* mu, int64_t dim, double alpha,
                                   const dpp_matrix* covariance, double* out) {
    if (!mu || !covariance || !out) return null_error("dpp_invariance_gaussian");
    return guarded([&] {
        if (dim < 1)
            dppriv::fail(dppriv::errc::invalid_argument, "dimension must be positive");
        Eigen::Map<const dppriv::Vector> direction(mu, dim);
        *out = dppriv::ksa::invariance_gaussian(direction, alpha, covariance->value);
    });
}

/* ------------------------------------------------------------------ */
/* Experiment harness                                                  */
/* ------------------------------------------------------------------ */

dpp_status dpp_experiment_run(const char* config_json, uint64_t seed,
                              dpp_experiment_report** out) {
    if (!config_json || !out) return null_error("dpp_experiment_run");
    return guarded([&] {
        dppriv::harness::ExperimentConfig config = dppriv::harness::parse_config(config_json);
        config.seed = seed;
        *out = new dpp_experiment_report{dppriv::harness::run_experiment(config)};
    });
}

dpp_status dpp_experiment_report_write(const dpp_experiment_report* report,
                                       const char* format, const char* path) {
    if (!report || !format || !path) return null_error("dpp_experiment_report_write");
    return guarded([&] { dppriv::harness::emit_report(report->value, format, path); });
}

dpp_status dpp_experiment_report_to_json(const dpp_experiment_report* report,
                                         char** out) {
    if (!report || !out) return null_error("dpp_experiment_report_to_json");
    return guarded([&] { *out = copy_string(dppriv::harness::report_to_json(report->value)); });
}

void dpp_experiment_report_destroy(dpp_experiment_report* report) { delete report; }

} // extern "C"
