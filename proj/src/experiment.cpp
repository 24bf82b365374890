#include "experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "breach.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "known_input.hpp"
#include "known_sample.hpp"
#include "linalg.hpp"
#include "perturb.hpp"
#include "stopwatch.hpp"

namespace dppriv::harness {

namespace {

using nlohmann::ordered_json;

// --------------------------------------------------------------------------
// Config parsing
// --------------------------------------------------------------------------

Vector parse_vector(const ordered_json& j, const std::string& what) {
    if (!j.is_array()) fail(errc::parse, "config: " + what + " must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(errc::parse, "config: " + what + " must be numeric");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Matrix parse_matrix(const ordered_json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) fail(errc::parse, "config: " + what + " must be a nonempty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        Vector row = parse_vector(j[r], what + " row");
        if (r == 0) {
            cols = static_cast<std::size_t>(row.size());
            m = Matrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (static_cast<std::size_t>(row.size()) != cols) {
            fail(errc::parse, "config: " + what + " rows differ in length");
        }
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

void check_keys(const ordered_json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) { known = true; break; }
        if (!known) fail(errc::parse, "config: unknown key '" + it.key() + "' in " + where);
    }
}

DatasetSpec parse_dataset(const ordered_json& j) {
    if (!j.is_object()) fail(errc::parse, "config: dataset must be an object");
    DatasetSpec spec;
    std::string type = j.value("type", std::string{});
    if (type == "csv") {
        check_keys(j, {"type", "path", "has_header", "drop_duplicates"}, "dataset");
        spec.kind = DatasetSpec::Kind::csv;
        if (!j.contains("path")) fail(errc::parse, "config: csv dataset needs a path");
        spec.path = j.at("path").get<std::string>();
        spec.has_header = j.value("has_header", false);
        spec.drop_duplicates = j.value("drop_duplicates", false);
    } else if (type == "gaussian") {
        check_keys(j, {"type", "records", "mean", "covariance"}, "dataset");
        spec.kind = DatasetSpec::Kind::gaussian;
        spec.records = j.value("records", 0);
        spec.gaussian.mean = parse_vector(j.at("mean"), "dataset.mean");
        spec.gaussian.covariance = parse_matrix(j.at("covariance"), "dataset.covariance");
        if (spec.records < 2) fail(errc::parse, "config: gaussian dataset needs records >= 2");
    } else if (type == "mixture") {
        check_keys(j, {"type", "records", "weights", "components"}, "dataset");
        spec.kind = DatasetSpec::Kind::mixture;
        spec.records = j.value("records", 0);
        if (spec.records < 2) fail(errc::parse, "config: mixture dataset needs records >= 2");
        if (!j.contains("weights") || !j.contains("components"))
            fail(errc::parse, "config: mixture dataset needs weights and components");
        for (const auto& w : j.at("weights")) spec.mixture.weights.push_back(w.get<double>());
        for (const auto& c : j.at("components")) {
            GaussianSpec g;
            g.mean = parse_vector(c.at("mean"), "component mean");
            g.covariance = parse_matrix(c.at("covariance"), "component covariance");
            spec.mixture.components.push_back(std::move(g));
        }
        if (spec.mixture.weights.size() != spec.mixture.components.size())
            fail(errc::parse, "config: mixture weights and components disagree");
    } else {
        fail(errc::parse, "config: dataset.type must be csv, gaussian, or mixture");
    }
    return spec;
}

ordered_json dataset_to_json(const DatasetSpec& spec) {
    ordered_json j;
    switch (spec.kind) {
    case DatasetSpec::Kind::csv:
        j["type"] = "csv";
        j["path"] = spec.path;
        j["has_header"] = spec.has_header;
        j["drop_duplicates"] = spec.drop_duplicates;
        break;
    case DatasetSpec::Kind::gaussian: {
        j["type"] = "gaussian";
        j["records"] = spec.records;
        j["mean"] = std::vector<double>(spec.gaussian.mean.data(),
                                        spec.gaussian.mean.data() + spec.gaussian.mean.size());
        ordered_json cov = ordered_json::array();
        for (Eigen::Index r = 0; r < spec.gaussian.covariance.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (Eigen::Index c = 0; c < spec.gaussian.covariance.cols(); ++c)
                row.push_back(spec.gaussian.covariance(r, c));
            cov.push_back(row);
        }
        j["covariance"] = cov;
        break;
    }
    case DatasetSpec::Kind::mixture: {
        j["type"] = "mixture";
        j["records"] = spec.records;
        j["weights"] = spec.mixture.weights;
        ordered_json comps = ordered_json::array();
        for (const auto& g : spec.mixture.components) {
            ordered_json c;
            c["mean"] = std::vector<double>(g.mean.data(), g.mean.data() + g.mean.size());
            ordered_json cov = ordered_json::array();
            for (Eigen::Index r = 0; r < g.covariance.rows(); ++r) {
                ordered_json row = ordered_json::array();
                for (Eigen::Index cc = 0; cc < g.covariance.cols(); ++cc)
                    row.push_back(g.covariance(r, cc));
                cov.push_back(row);
            }
            c["covariance"] = cov;
            comps.push_back(c);
        }
        j["components"] = comps;
        break;
    }
    }
    return j;
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        fail(errc::parse, std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(errc::parse, "config: top level must be an object");
    check_keys(j,
               {"attack", "epsilon", "repetitions", "with_translation", "translation_scale",
                "permutation", "dataset", "known_inputs", "sample_ratio", "permutations",
                "pool_cap", "link_tol", "rank_tol", "node_budget", "threads",
                "include_timings"},
               "top level");

    ExperimentConfig config;
    std::string attack = j.value("attack", std::string{});
    if (attack == "known-input") config.attack = AttackKind::known_input;
    else if (attack == "known-sample") config.attack = AttackKind::known_sample;
    else fail(errc::parse, "config: attack must be 'known-input' or 'known-sample'");

    if (!j.contains("dataset")) fail(errc::parse, "config: dataset is required");
    config.dataset = parse_dataset(j.at("dataset"));

    config.epsilon = j.value("epsilon", 0.15);
    if (config.epsilon < 0.0) fail(errc::parse, "config: epsilon must be nonnegative");
    config.repetitions = j.value("repetitions", 1);
    if (config.repetitions < 1) fail(errc::parse, "config: repetitions must be >= 1");
    config.with_translation = j.value("with_translation", false);
    if (j.contains("translation_scale") && !j.at("translation_scale").is_null())
        config.translation_scale = j.at("translation_scale").get<double>();

    std::string permutation = j.value("permutation", std::string("random"));
    if (permutation == "identity") config.identity_permutation = true;
    else if (permutation == "random") config.identity_permutation = false;
    else fail(errc::parse, "config: permutation must be 'random' or 'identity'");

    config.known_inputs = j.value("known_inputs", 0);
    config.sample_ratio = j.value("sample_ratio", 0.0);
    if (config.attack == AttackKind::known_input && config.known_inputs < 1)
        fail(errc::parse, "config: known-input attack needs known_inputs >= 1");
    if (config.attack == AttackKind::known_sample &&
        !(config.sample_ratio > 0.0 && config.sample_ratio < 1.0))
        fail(errc::parse, "config: known-sample attack needs sample_ratio in (0, 1)");

    config.permutations = j.value("permutations", 199);
    if (config.permutations < 1) fail(errc::parse, "config: permutations must be >= 1");
    config.pool_cap = j.value("pool_cap", 2000);
    config.link_tol = j.value("link_tol", 1e-6);
    config.rank_tol = j.value("rank_tol", 1e-9);
    std::uint64_t budget = j.value("node_budget", std::uint64_t{0});
    config.node_budget = budget == 0 ? std::numeric_limits<std::uint64_t>::max() : budget;
    config.threads = j.value("threads", 1);
    if (config.threads < 1) fail(errc::parse, "config: threads must be >= 1");
    config.include_timings = j.value("include_timings", false);
    return config;
}

std::string config_to_json(const ExperimentConfig& config) {
    ordered_json j;
    j["attack"] = config.attack == AttackKind::known_input ? "known-input" : "known-sample";
    j["epsilon"] = config.epsilon;
    j["repetitions"] = config.repetitions;
    j["with_translation"] = config.with_translation;
    if (config.translation_scale) j["translation_scale"] = *config.translation_scale;
    else j["translation_scale"] = nullptr;
    j["permutation"] = config.identity_permutation ? "identity" : "random";
    j["dataset"] = dataset_to_json(config.dataset);
    j["known_inputs"] = config.known_inputs;
    j["sample_ratio"] = config.sample_ratio;
    j["permutations"] = config.permutations;
    j["pool_cap"] = config.pool_cap;
    j["link_tol"] = config.link_tol;
    j["rank_tol"] = config.rank_tol;
    j["node_budget"] =
        config.node_budget == std::numeric_limits<std::uint64_t>::max() ? 0 : config.node_budget;
    j["threads"] = config.threads;
    j["include_timings"] = config.include_timings;
    return j.dump();
}

// --------------------------------------------------------------------------
// Running repetitions
// --------------------------------------------------------------------------

namespace {

double mean_record_norm(const DataMatrix& X) {
    return X.colwise().norm().mean();
}

DataMatrix draw_synthetic(const DatasetSpec& spec, int records, RandomStream& rng) {
    if (spec.kind == DatasetSpec::Kind::gaussian)
        return sample_gaussian(spec.gaussian, records, rng);
    return sample_mixture(spec.mixture, records, rng);
}

struct RepetitionInputs {
    DataMatrix X;
    DataMatrix side;  // known inputs (Xa) or known sample (S)
    RecordPermutation perm;
    DataMatrix Y;
    std::vector<int> known_indices;  // known-input attack only
};

RepetitionInputs prepare_inputs(const ExperimentConfig& config, const DataMatrix* file_data,
                                RandomStream& stream) {
    RepetitionInputs inputs;

    if (config.attack == AttackKind::known_sample) {
        if (config.dataset.kind == DatasetSpec::Kind::csv) {
            const DataMatrix& all = *file_data;
            const int total = static_cast<int>(all.cols());
            int q = std::max(2, static_cast<int>(std::lround(config.sample_ratio * total)));
            if (total - q < 2)
                fail(errc::insufficient_data, "experiment: dataset too small for the sample split");
            RandomStream split_rng = stream.derive(0);
            std::vector<int> order(static_cast<std::size_t>(total));
            for (int i = 0; i < total; ++i) order[static_cast<std::size_t>(i)] = i;
            shuffle(order, split_rng);
            inputs.side = DataMatrix(all.rows(), q);
            inputs.X = DataMatrix(all.rows(), total - q);
            for (int i = 0; i < q; ++i) inputs.side.col(i) = all.col(order[static_cast<std::size_t>(i)]);
            for (int i = q; i < total; ++i) inputs.X.col(i - q) = all.col(order[static_cast<std::size_t>(i)]);
        } else {
            RandomStream data_rng = stream.derive(0);
            inputs.X = draw_synthetic(config.dataset, config.dataset.records, data_rng);
            int q = std::max(2, static_cast<int>(std::lround(config.sample_ratio * config.dataset.records)));
            RandomStream sample_rng = stream.derive(3);
            inputs.side = draw_synthetic(config.dataset, q, sample_rng);
        }
    } else {
        if (config.dataset.kind == DatasetSpec::Kind::csv) {
            inputs.X = *file_data;
        } else {
            RandomStream data_rng = stream.derive(0);
            inputs.X = draw_synthetic(config.dataset, config.dataset.records, data_rng);
        }
    }

    const int n = static_cast<int>(inputs.X.rows());
    const int m = static_cast<int>(inputs.X.cols());

    double scale = config.translation_scale.value_or(10.0 * mean_record_norm(inputs.X));
    RandomStream motion_rng = stream.derive(1);
    RigidMotion motion = generate_rigid_motion(n, config.with_translation, scale, motion_rng);
    if (config.identity_permutation) {
        inputs.perm = identity_permutation(m);
    } else {
        RandomStream perm_rng = stream.derive(2);
        inputs.perm = random_permutation(m, perm_rng);
    }
    inputs.Y = perturb(inputs.X, motion, inputs.perm);

    if (config.attack == AttackKind::known_input) {
        if (config.known_inputs < 1 || config.known_inputs >= m)
            fail(errc::invalid_argument, "experiment: known_inputs must lie in [1, records)");
        RandomStream pick_rng = stream.derive(3);
        const int want_rank = std::min(config.known_inputs, n);
        for (int attempt = 0; attempt < 100; ++attempt) {
            inputs.known_indices = sample_without_replacement(m, config.known_inputs, pick_rng);
            DataMatrix Xa(n, config.known_inputs);
            for (int t = 0; t < config.known_inputs; ++t)
                Xa.col(t) = inputs.X.col(inputs.known_indices[static_cast<std::size_t>(t)]);
            if (orthonormal_basis(Xa, config.rank_tol).k == want_rank) {
                inputs.side = std::move(Xa);
                break;
            }
            if (attempt == 99) inputs.side = std::move(Xa);
        }
    }
    return inputs;
}

void score_estimate(RepetitionRow& row, const RepetitionInputs& inputs,
                    const Vector& estimate, int chosen_j, double epsilon) {
    RecordPermutation inverse = inverse_permutation(inputs.perm);
    int origin = inverse[static_cast<std::size_t>(chosen_j)];
    BreachOutcome outcome = evaluate_breach(inputs.X.col(origin), estimate, epsilon);
    row.breach_eps = outcome.eps_breach ? 1 : 0;
    row.breach_med = outcome.med_breach ? 1 : 0;
    row.breach_cos = outcome.cos_breach ? 1 : 0;
    row.relative_euclid = outcome.relative_euclid;
    row.min_nad = outcome.min_nad;
    row.cos_gap = outcome.cos_gap;
}

RepetitionRow run_repetition(const ExperimentConfig& config, const DataMatrix* file_data,
                             int repetition) {
    RepetitionRow row;
    row.repetition = repetition;
    Stopwatch total;
    RandomStream stream = RandomStream(config.seed).derive(static_cast<std::uint64_t>(repetition));
    try {
        RepetitionInputs inputs = prepare_inputs(config, file_data, stream);
        RandomStream attack_rng = stream.derive(4);

        if (config.attack == AttackKind::known_input) {
            kia::KnownInputOptions options;
            options.link.tol = config.link_tol;
            options.link.node_budget = config.node_budget;
            options.rank_tol = config.rank_tol;
            kia::KnownInputReport report =
                config.with_translation
                    ? kia::known_input_attack_general(inputs.side, inputs.Y, config.epsilon,
                                                      attack_rng, options)
                    : kia::known_input_attack(inputs.side, inputs.Y, config.epsilon,
                                              attack_rng, options);
            row.linked_count = static_cast<int>(report.link.assignment.domain.size());
            row.codim = report.codim;
            row.rho = report.rho_max;
            row.chosen_j = report.chosen_j;
            row.seconds_link = report.seconds_link;
            row.seconds_rho = report.seconds_rho;
            score_estimate(row, inputs, report.estimate, report.chosen_j, config.epsilon);
        } else {
            ksa::KnownSampleOptions options;
            options.permutations = config.permutations;
            options.pool_cap = config.pool_cap;
            ksa::PcaAttackResult result =
                config.with_translation
                    ? ksa::pca_attack_general(inputs.side, inputs.Y, options, attack_rng)
                    : ksa::pca_attack_orthogonal(inputs.side, inputs.Y, options, attack_rng);
            row.p_value = result.p_value;
            row.chosen_j = result.chosen_j;
            row.seconds_sign_search = result.seconds_sign_search;
            score_estimate(row, inputs, result.estimates.col(result.chosen_j),
                           result.chosen_j, config.epsilon);
        }
    } catch (const error& e) {
        row.feasible = false;
        row.reason = e.what();
        row.breach_eps = 0;
        row.breach_med = 0;
        row.breach_cos = 0;
    } catch (const std::exception& e) {
        row.feasible = false;
        row.reason = std::string("internal: ") + e.what();
        row.breach_eps = 0;
        row.breach_med = 0;
        row.breach_cos = 0;
    }
    row.seconds_total = total.seconds();
    return row;
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    ExperimentReport report;
    report.config = config;

    std::optional<DataMatrix> file_data;
    if (config.dataset.kind == DatasetSpec::Kind::csv) {
        CsvOptions csv_options;
        csv_options.has_header = config.dataset.has_header;
        csv_options.drop_duplicate_records = config.dataset.drop_duplicates;
        file_data = read_csv(config.dataset.path, csv_options);
    }
    const DataMatrix* file_ptr = file_data ? &*file_data : nullptr;

    report.rows.resize(static_cast<std::size_t>(config.repetitions));
    const int threads = std::min(config.threads, config.repetitions);
    if (threads <= 1) {
        for (int rep = 0; rep < config.repetitions; ++rep)
            report.rows[static_cast<std::size_t>(rep)] = run_repetition(config, file_ptr, rep);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            while (true) {
                int rep = next.fetch_add(1);
                if (rep >= config.repetitions) return;
                report.rows[static_cast<std::size_t>(rep)] = run_repetition(config, file_ptr, rep);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    report.aggregates = aggregate_rows(report.rows, config.include_timings);
    return report;
}

// --------------------------------------------------------------------------
// Aggregation and emission
// --------------------------------------------------------------------------

namespace {

struct FieldView {
    const char* name;
    std::optional<double> (*get)(const RepetitionRow&);
    bool timing;
};

const FieldView kFields[] = {
    {"feasible", [](const RepetitionRow& r) -> std::optional<double> { return r.feasible ? 1.0 : 0.0; }, false},
    {"linked_count", [](const RepetitionRow& r) -> std::optional<double> {
         return r.linked_count ? std::optional<double>(*r.linked_count) : std::nullopt; }, false},
    {"codim", [](const RepetitionRow& r) -> std::optional<double> {
         return r.codim ? std::optional<double>(*r.codim) : std::nullopt; }, false},
    {"rho", [](const RepetitionRow& r) -> std::optional<double> { return r.rho; }, false},
    {"p_value", [](const RepetitionRow& r) -> std::optional<double> { return r.p_value; }, false},
    {"breach_eps", [](const RepetitionRow& r) -> std::optional<double> {
         return r.breach_eps ? std::optional<double>(*r.breach_eps) : std::nullopt; }, false},
    {"breach_med", [](const RepetitionRow& r) -> std::optional<double> {
         return r.breach_med ? std::optional<double>(*r.breach_med) : std::nullopt; }, false},
    {"breach_cos", [](const RepetitionRow& r) -> std::optional<double> {
         return r.breach_cos ? std::optional<double>(*r.breach_cos) : std::nullopt; }, false},
    {"relative_euclid", [](const RepetitionRow& r) -> std::optional<double> { return r.relative_euclid; }, false},
    {"min_nad", [](const RepetitionRow& r) -> std::optional<double> { return r.min_nad; }, false},
    {"cos_gap", [](const RepetitionRow& r) -> std::optional<double> { return r.cos_gap; }, false},
    {"seconds_link", [](const RepetitionRow& r) -> std::optional<double> { return r.seconds_link; }, true},
    {"seconds_rho", [](const RepetitionRow& r) -> std::optional<double> { return r.seconds_rho; }, true},
    {"seconds_sign_search", [](const RepetitionRow& r) -> std::optional<double> { return r.seconds_sign_search; }, true},
    {"seconds_total", [](const RepetitionRow& r) -> std::optional<double> { return r.seconds_total; }, true},
};

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

} // namespace

std::vector<AggregateEntry> aggregate_rows(const std::vector<RepetitionRow>& rows,
                                           bool include_timings) {
    std::vector<AggregateEntry> out;
    for (const FieldView& field : kFields) {
        if (field.timing && !include_timings) continue;
        AggregateEntry entry;
        entry.field = field.name;
        double sum = 0.0;
        for (const auto& row : rows) {
            if (auto v = field.get(row)) {
                sum += *v;
                ++entry.count;
            }
        }
        if (entry.count > 0) entry.mean = sum / entry.count;
        if (entry.count > 1) {
            double ss = 0.0;
            for (const auto& row : rows) {
                if (auto v = field.get(row)) {
                    double d = *v - entry.mean;
                    ss += d * d;
                }
            }
            entry.stddev = std::sqrt(ss / (entry.count - 1));
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::string report_to_json(const ExperimentReport& report) {
    const bool timings = report.config.include_timings;
    ordered_json j;
    j["schema_version"] = 1;
    j["seed"] = report.config.seed;
    j["config"] = ordered_json::parse(config_to_json(report.config));

    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["repetition"] = row.repetition;
        r["feasible"] = row.feasible;
        r["reason"] = row.reason;
        r["chosen_j"] = row.chosen_j;
        auto put = [&r](const char* key, const auto& opt) {
            if (opt) r[key] = *opt;
            else r[key] = nullptr;
        };
        put("linked_count", row.linked_count);
        put("codim", row.codim);
        put("rho", row.rho);
        put("p_value", row.p_value);
        put("breach_eps", row.breach_eps);
        put("breach_med", row.breach_med);
        put("breach_cos", row.breach_cos);
        put("relative_euclid", row.relative_euclid);
        put("min_nad", row.min_nad);
        put("cos_gap", row.cos_gap);
        if (timings) {
            r["seconds_link"] = row.seconds_link;
            r["seconds_rho"] = row.seconds_rho;
            r["seconds_sign_search"] = row.seconds_sign_search;
            r["seconds_total"] = row.seconds_total;
        }
        rows.push_back(r);
    }
    j["rows"] = rows;

    ordered_json aggregates = ordered_json::array();
    for (const auto& entry : report.aggregates) {
        ordered_json a;
        a["field"] = entry.field;
        a["mean"] = entry.mean;
        a["stddev"] = entry.stddev;
        a["count"] = entry.count;
        aggregates.push_back(a);
    }
    j["aggregates"] = aggregates;
    return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
    const bool timings = report.config.include_timings;
    std::string out = "repetition,feasible,reason,chosen_j,linked_count,codim,rho,p_value,"
                      "breach_eps,breach_med,breach_cos,relative_euclid,min_nad,cos_gap";
    if (timings) out += ",seconds_link,seconds_rho,seconds_sign_search,seconds_total";
    out += "\n";

    auto cell_int = [](const std::optional<int>& v) {
        return v ? std::to_string(*v) : std::string{};
    };
    auto cell_double = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string{};
    };

    for (const auto& row : report.rows) {
        out += std::to_string(row.repetition);
        out += ',';
        out += row.feasible ? '1' : '0';
        out += ',';
        out += row.reason;
        out += ',';
        out += std::to_string(row.chosen_j);
        out += ',';
        out += cell_int(row.linked_count);
        out += ',';
        out += cell_int(row.codim);
        out += ',';
        out += cell_double(row.rho);
        out += ',';
        out += cell_double(row.p_value);
        out += ',';
        out += cell_int(row.breach_eps);
        out += ',';
        out += cell_int(row.breach_med);
        out += ',';
        out += cell_int(row.breach_cos);
        out += ',';
        out += cell_double(row.relative_euclid);
        out += ',';
        out += cell_double(row.min_nad);
        out += ',';
        out += cell_double(row.cos_gap);
        if (timings) {
            out += ',';
            out += format_double(row.seconds_link);
            out += ',';
            out += format_double(row.seconds_rho);
            out += ',';
            out += format_double(row.seconds_sign_search);
            out += ',';
            out += format_double(row.seconds_total);
        }
        out += '\n';
    }

    if (report.rows.empty()) return out;  // header-only

    // Aggregate block: one row per statistic, keyed in the repetition column.
    auto aggregate_value = [&](const std::string& field, bool want_std) -> std::string {
        for (const auto& entry : report.aggregates)
            if (entry.field == field) return format_double(want_std ? entry.stddev : entry.mean);
        return {};
    };
    for (bool want_std : {false, true}) {
        out += want_std ? "stddev" : "mean";
        out += ",";
        out += aggregate_value("feasible", want_std);
        out += ",,,";  // reason, chosen_j not aggregated
        out += aggregate_value("linked_count", want_std);
        out += ',';
        out += aggregate_value("codim", want_std);
        out += ',';
        out += aggregate_value("rho", want_std);
        out += ',';
        out += aggregate_value("p_value", want_std);
        out += ',';
        out += aggregate_value("breach_eps", want_std);
        out += ',';
        out += aggregate_value("breach_med", want_std);
        out += ',';
        out += aggregate_value("breach_cos", want_std);
        out += ',';
        out += aggregate_value("relative_euclid", want_std);
        out += ',';
        out += aggregate_value("min_nad", want_std);
        out += ',';
        out += aggregate_value("cos_gap", want_std);
        if (timings) {
            out += ',';
            out += aggregate_value("seconds_link", want_std);
            out += ',';
            out += aggregate_value("seconds_rho", want_std);
            out += ',';
            out += aggregate_value("seconds_sign_search", want_std);
            out += ',';
            out += aggregate_value("seconds_total", want_std);
        }
        out += '\n';
    }
    return out;
}

void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& path) {
    std::string payload;
    if (format == "csv") payload = report_to_csv(report);
    else if (format == "json") payload = report_to_json(report);
    else fail(errc::invalid_argument, "emit_report: format must be 'csv' or 'json'");

    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io, "emit_report: cannot open " + path + " for writing");
    out << payload;
    if (!out) fail(errc::io, "emit_report: write failed for " + path);
}

} // namespace dppriv::harness
