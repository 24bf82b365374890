#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "synth.hpp"
#include "types.hpp"

namespace dppriv::harness {

enum class AttackKind { known_input, known_sample };

struct DatasetSpec {
    enum class Kind { csv, gaussian, mixture } kind = Kind::gaussian;
    // csv
    std::string path;
    bool has_header = false;
    bool drop_duplicates = false;
    // synthetic
    GaussianSpec gaussian;
    GaussianMixtureSpec mixture;
    int records = 0;
};

struct ExperimentConfig {
    AttackKind attack = AttackKind::known_input;
    DatasetSpec dataset;
    double epsilon = 0.15;
    int repetitions = 1;
    std::uint64_t seed = 0;  // supplied by the caller, not the config file
    bool with_translation = false;
    std::optional<double> translation_scale;  // default: 10 x mean record norm
    bool identity_permutation = false;
    int known_inputs = 0;      // known-input attack
    double sample_ratio = 0.0; // known-sample attack
    int permutations = 199;
    int pool_cap = 2000;
    double link_tol = 1e-6;
    double rank_tol = 1e-9;
    std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
    int threads = 1;
    bool include_timings = false;
};

// Parses the declarative JSON config (everything except the seed).
ExperimentConfig parse_config(const std::string& json_text);

// Canonical JSON echo of a config; identical configs serialize identically.
std::string config_to_json(const ExperimentConfig& config);

struct RepetitionRow {
    int repetition = 0;
    bool feasible = true;
    std::string reason;  // reason code when a repetition could not run
    int chosen_j = -1;
    std::optional<int> linked_count;
    std::optional<int> codim;
    std::optional<double> rho;      // known-input: max closed-form breach probability
    std::optional<double> p_value;  // known-sample: winning two-sample p
    std::optional<int> breach_eps;
    std::optional<int> breach_med;
    std::optional<int> breach_cos;
    std::optional<double> relative_euclid;
    std::optional<double> min_nad;
    std::optional<double> cos_gap;
    double seconds_link = 0.0;
    double seconds_rho = 0.0;
    double seconds_sign_search = 0.0;
    double seconds_total = 0.0;
};

struct AggregateEntry {
    std::string field;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 when count < 2
    int count = 0;        // rows where the field was present
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RepetitionRow> rows;
    std::vector<AggregateEntry> aggregates;
};

// Runs every repetition on a stream derived from (seed, repetition index);
// output is independent of the thread count.  Infeasible repetitions become
// rows with feasible=0 and a reason code.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Aggregates recomputed from rows; used internally and by tests.
std::vector<AggregateEntry> aggregate_rows(const std::vector<RepetitionRow>& rows,
                                           bool include_timings);

std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

// format is "csv" or "json".
void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& path);

} // namespace dppriv::harness
