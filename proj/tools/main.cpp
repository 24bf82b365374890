// Command-line front end for the dppriv shared library.  Everything here
// goes through the C API in dppriv/dppriv.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <dppriv/dppriv.h>

namespace {

using nlohmann::ordered_json;

[[noreturn]] void die(const std::string& context, dpp_status status) {
    std::fprintf(stderr, "dppriv: %s failed (%s): %s\n", context.c_str(),
                 dpp_status_name(status), dpp_last_error());
    std::exit(1);
}

void check(dpp_status status, const std::string& context) {
    if (status != DPP_OK) die(context, status);
}

struct MatrixDeleter {
    void operator()(dpp_matrix* m) const { dpp_matrix_destroy(m); }
};
using MatrixPtr = std::unique_ptr<dpp_matrix, MatrixDeleter>;

MatrixPtr load_csv(const std::string& path, bool has_header, bool drop_duplicates) {
    dpp_matrix* raw = nullptr;
    check(dpp_matrix_read_csv(path.c_str(), has_header ? 1 : 0, drop_duplicates ? 1 : 0, &raw),
          "reading " + path);
    return MatrixPtr(raw);
}

std::vector<double> matrix_data(const dpp_matrix* m) {
    std::vector<double> out(static_cast<std::size_t>(dpp_matrix_rows(m) * dpp_matrix_cols(m)));
    check(dpp_matrix_copy_data(m, out.data(), static_cast<int64_t>(out.size())), "copying matrix");
    return out;
}

ordered_json matrix_to_json(const dpp_matrix* m) {
    const int64_t rows = dpp_matrix_rows(m);
    const int64_t cols = dpp_matrix_cols(m);
    std::vector<double> data = matrix_data(m);
    ordered_json out = ordered_json::array();
    for (int64_t r = 0; r < rows; ++r) {
        ordered_json row = ordered_json::array();
        for (int64_t c = 0; c < cols; ++c)
            row.push_back(data[static_cast<std::size_t>(c * rows + r)]);
        out.push_back(row);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "dppriv: cannot open %s for writing\n", path.c_str());
        std::exit(1);
    }
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "dppriv: cannot open %s\n", path.c_str());
        std::exit(1);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

double mean_record_norm(const dpp_matrix* m) {
    const int64_t rows = dpp_matrix_rows(m);
    const int64_t cols = dpp_matrix_cols(m);
    std::vector<double> data = matrix_data(m);
    double total = 0.0;
    for (int64_t c = 0; c < cols; ++c) {
        double ss = 0.0;
        for (int64_t r = 0; r < rows; ++r) {
            double v = data[static_cast<std::size_t>(c * rows + r)];
            ss += v * v;
        }
        total += std::sqrt(ss);
    }
    return total / static_cast<double>(cols);
}

// ------------------------------------------------------------------
// perturb
// ------------------------------------------------------------------

struct PerturbArgs {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    bool has_header = false;
    bool drop_duplicates = false;
    bool translate = false;
    double translation_scale = 0.0;
    std::string permutation = "random";
    std::string secret_out;
};

int run_perturb(const PerturbArgs& args) {
    MatrixPtr X = load_csv(args.input, args.has_header, args.drop_duplicates);
    const int64_t n = dpp_matrix_rows(X.get());
    const int64_t m = dpp_matrix_cols(X.get());

    double scale = args.translation_scale;
    if (args.translate && scale <= 0.0) scale = 10.0 * mean_record_norm(X.get());

    dpp_rigid_motion* motion = nullptr;
    check(dpp_rigid_motion_generate(n, args.translate ? 1 : 0, scale, args.seed, &motion),
          "generating rigid motion");

    std::vector<int64_t> perm(static_cast<std::size_t>(m));
    if (args.permutation == "identity") {
        for (int64_t i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
    } else {
        // Permutation stream is derived from seed + 1 so the motion and the
        // permutation stay independent but both reproducible.
        check(dpp_random_permutation(m, args.seed + 1, perm.data()), "drawing permutation");
    }

    dpp_matrix* Y = nullptr;
    check(dpp_perturb(X.get(), motion, perm.data(), &Y), "perturbing");
    MatrixPtr Y_owner(Y);
    check(dpp_matrix_write_csv(Y, args.output.c_str()), "writing " + args.output);

    if (!args.secret_out.empty()) {
        dpp_matrix* rotation = nullptr;
        dpp_matrix* translation = nullptr;
        check(dpp_rigid_motion_rotation(motion, &rotation), "extracting rotation");
        check(dpp_rigid_motion_translation(motion, &translation), "extracting translation");
        MatrixPtr rot_owner(rotation), tr_owner(translation);
        ordered_json secret;
        secret["rotation"] = matrix_to_json(rotation);
        std::vector<double> tr = matrix_data(translation);
        secret["translation"] = tr;
        secret["permutation"] = perm;
        write_text(args.secret_out, secret.dump(2) + "\n");
    }
    dpp_rigid_motion_destroy(motion);

    std::printf("perturbed %lld records of dimension %lld -> %s\n",
                static_cast<long long>(m), static_cast<long long>(n), args.output.c_str());
    return 0;
}

// ------------------------------------------------------------------
// attack known-input
// ------------------------------------------------------------------

struct KnownInputArgs {
    std::string data;
    std::string known;
    double epsilon = 0.15;
    std::uint64_t seed = 0;
    bool has_header = false;
    bool general = false;
    double link_tol = 1e-6;
    double rank_tol = 1e-9;
    std::uint64_t node_budget = 0;
    std::string report_out;
    std::string estimate_out;
};

int run_known_input(const KnownInputArgs& args) {
    MatrixPtr Y = load_csv(args.data, args.has_header, false);
    MatrixPtr Xa = load_csv(args.known, args.has_header, false);

    dpp_known_input_options options;
    dpp_known_input_options_init(&options);
    options.epsilon = args.epsilon;
    options.link_tol = args.link_tol;
    options.rank_tol = args.rank_tol;
    options.node_budget = args.node_budget;
    options.assume_translation = args.general ? 1 : 0;
    options.seed = args.seed;

    dpp_kia_report* report = nullptr;
    check(dpp_known_input_attack(Xa.get(), Y.get(), &options, &report), "known-input attack");

    int64_t chosen = 0;
    double rho = 0.0;
    dpp_kia_report_chosen(report, &chosen, &rho);
    std::printf("linked %lld of %lld known records; chosen column %lld with breach probability %.6g\n",
                static_cast<long long>(dpp_kia_report_linked_count(report)),
                static_cast<long long>(dpp_matrix_cols(Xa.get())),
                static_cast<long long>(chosen), rho);

    if (!args.report_out.empty()) {
        char* json = nullptr;
        check(dpp_kia_report_to_json(report, &json), "serializing report");
        write_text(args.report_out, json);
        dpp_string_free(json);
    }
    if (!args.estimate_out.empty()) {
        dpp_matrix* estimate = nullptr;
        check(dpp_kia_report_estimate(report, &estimate), "extracting estimate");
        MatrixPtr est_owner(estimate);
        check(dpp_matrix_write_csv(estimate, args.estimate_out.c_str()),
              "writing " + args.estimate_out);
    }
    dpp_kia_report_destroy(report);
    return 0;
}

// ------------------------------------------------------------------
// attack known-sample
// ------------------------------------------------------------------

struct KnownSampleArgs {
    std::string data;
    std::string sample;
    std::uint64_t seed = 0;
    bool has_header = false;
    bool general = false;
    int permutations = 199;
    int pool_cap = 2000;
    std::string report_out;
    std::string estimates_out;
};

int run_known_sample(const KnownSampleArgs& args) {
    MatrixPtr Y = load_csv(args.data, args.has_header, false);
    MatrixPtr S = load_csv(args.sample, args.has_header, false);

    dpp_known_sample_options options;
    dpp_known_sample_options_init(&options);
    options.permutations = args.permutations;
    options.pool_cap = args.pool_cap;
    options.assume_translation = args.general ? 1 : 0;
    options.seed = args.seed;

    dpp_ksa_result* result = nullptr;
    check(dpp_known_sample_attack(S.get(), Y.get(), &options, &result), "known-sample attack");

    double p = 0.0;
    int64_t chosen = 0;
    dpp_ksa_result_p_value(result, &p);
    dpp_ksa_result_chosen(result, &chosen);
    std::printf("sign search winner p-value %.6g; headline column %lld\n", p,
                static_cast<long long>(chosen));

    if (!args.report_out.empty()) {
        char* json = nullptr;
        check(dpp_ksa_result_to_json(result, &json), "serializing result");
        write_text(args.report_out, json);
        dpp_string_free(json);
    }
    if (!args.estimates_out.empty()) {
        dpp_matrix* estimates = nullptr;
        check(dpp_ksa_result_estimates(result, &estimates), "extracting estimates");
        MatrixPtr est_owner(estimates);
        check(dpp_matrix_write_csv(estimates, args.estimates_out.c_str()),
              "writing " + args.estimates_out);
    }
    dpp_ksa_result_destroy(result);
    return 0;
}

// ------------------------------------------------------------------
// evaluate
// ------------------------------------------------------------------

struct EvaluateArgs {
    std::string truth;
    std::string estimates;
    double epsilon = 0.15;
    bool has_header = false;
    std::string output;
    std::string format = "csv";
};

int run_evaluate(const EvaluateArgs& args) {
    MatrixPtr X = load_csv(args.truth, args.has_header, false);
    MatrixPtr Xhat = load_csv(args.estimates, args.has_header, false);
    const int64_t n = dpp_matrix_rows(X.get());
    const int64_t m = dpp_matrix_cols(X.get());
    if (dpp_matrix_rows(Xhat.get()) != n || dpp_matrix_cols(Xhat.get()) != m) {
        std::fprintf(stderr, "dppriv: truth and estimates differ in shape\n");
        return 1;
    }

    std::vector<double> truth = matrix_data(X.get());
    std::vector<double> est = matrix_data(Xhat.get());

    std::vector<dpp_breach_outcome> outcomes(static_cast<std::size_t>(m));
    double frac_eps = 0.0, frac_med = 0.0, frac_cos = 0.0;
    for (int64_t j = 0; j < m; ++j) {
        check(dpp_breach_evaluate(&truth[static_cast<std::size_t>(j * n)],
                                  &est[static_cast<std::size_t>(j * n)], n, args.epsilon,
                                  &outcomes[static_cast<std::size_t>(j)]),
              "evaluating record " + std::to_string(j));
        frac_eps += outcomes[static_cast<std::size_t>(j)].eps_breach;
        frac_med += outcomes[static_cast<std::size_t>(j)].med_breach;
        frac_cos += outcomes[static_cast<std::size_t>(j)].cos_breach;
    }
    frac_eps /= static_cast<double>(m);
    frac_med /= static_cast<double>(m);
    frac_cos /= static_cast<double>(m);

    if (!args.output.empty()) {
        if (args.format == "json") {
            ordered_json out;
            out["epsilon"] = args.epsilon;
            ordered_json rows = ordered_json::array();
            for (int64_t j = 0; j < m; ++j) {
                const auto& o = outcomes[static_cast<std::size_t>(j)];
                ordered_json r;
                r["record"] = j;
                r["relative_euclid"] = o.relative_euclid;
                r["min_nad"] = o.min_nad;
                r["cos_gap"] = o.cos_gap;
                r["breach_eps"] = o.eps_breach;
                r["breach_med"] = o.med_breach;
                r["breach_cos"] = o.cos_breach;
                rows.push_back(r);
            }
            out["rows"] = rows;
            out["breach_fraction_eps"] = frac_eps;
            out["breach_fraction_med"] = frac_med;
            out["breach_fraction_cos"] = frac_cos;
            write_text(args.output, out.dump(2) + "\n");
        } else {
            std::string csv = "record,relative_euclid,min_nad,cos_gap,breach_eps,breach_med,breach_cos\n";
            char line[256];
            for (int64_t j = 0; j < m; ++j) {
                const auto& o = outcomes[static_cast<std::size_t>(j)];
                std::snprintf(line, sizeof(line), "%lld,%.17g,%.17g,%.17g,%d,%d,%d\n",
                              static_cast<long long>(j), o.relative_euclid, o.min_nad,
                              o.cos_gap, o.eps_breach, o.med_breach, o.cos_breach);
                csv += line;
            }
            write_text(args.output, csv);
        }
    }
    std::printf("breach fractions at epsilon %.6g: eps %.4f, med %.4f, cos %.4f (%lld records)\n",
                args.epsilon, frac_eps, frac_med, frac_cos, static_cast<long long>(m));
    return 0;
}

// ------------------------------------------------------------------
// experiment
// ------------------------------------------------------------------

struct ExperimentArgs {
    std::string config;
    std::uint64_t seed = 0;
    std::string output = "experiment";
    std::string format = "both";
};

int run_experiment_cmd(const ExperimentArgs& args) {
    std::string config_json = read_text(args.config);

    dpp_experiment_report* report = nullptr;
    check(dpp_experiment_run(config_json.c_str(), args.seed, &report), "running experiment");

    if (args.format == "csv" || args.format == "both")
        check(dpp_experiment_report_write(report, "csv", (args.output + ".csv").c_str()),
              "writing CSV report");
    if (args.format == "json" || args.format == "both")
        check(dpp_experiment_report_write(report, "json", (args.output + ".json").c_str()),
              "writing JSON report");

    char* json = nullptr;
    check(dpp_experiment_report_to_json(report, &json), "summarizing report");
    ordered_json parsed = ordered_json::parse(json);
    dpp_string_free(json);
    dpp_experiment_report_destroy(report);

    std::printf("experiment: %zu repetitions\n", parsed["rows"].size());
    for (const auto& entry : parsed["aggregates"]) {
        std::string field = entry["field"].get<std::string>();
        if (field == "breach_eps" || field == "breach_med" || field == "breach_cos" ||
            field == "rho" || field == "feasible" || field == "linked_count")
            std::printf("  %s: mean %.6g (stddev %.6g, n=%d)\n", field.c_str(),
                        entry["mean"].get<double>(), entry["stddev"].get<double>(),
                        entry["count"].get<int>());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euclidean-distance-preserving data perturbation and its prior-knowledge attacks"};
    app.require_subcommand(1);

    PerturbArgs perturb_args;
    CLI::App* perturb = app.add_subcommand("perturb", "Perturb a dataset with a secret rigid motion");
    perturb->add_option("--in", perturb_args.input, "Input CSV, one record per row")->required();
    perturb->add_option("--out", perturb_args.output, "Output CSV")->required();
    perturb->add_option("--seed", perturb_args.seed, "Random seed")->required();
    perturb->add_flag("--has-header", perturb_args.has_header, "Skip the first input row");
    perturb->add_flag("--drop-duplicates", perturb_args.drop_duplicates, "Drop duplicate records");
    perturb->add_flag("--translate", perturb_args.translate, "Add a random translation");
    perturb->add_option("--translation-scale", perturb_args.translation_scale,
                        "Translation stddev (default: 10x mean record norm)");
    perturb->add_option("--permutation", perturb_args.permutation, "random or identity")
        ->check(CLI::IsMember({"random", "identity"}));
    perturb->add_option("--secret-out", perturb_args.secret_out,
                        "Write the secret motion and permutation as JSON");

    CLI::App* attack = app.add_subcommand("attack", "Run a prior-knowledge attack");
    attack->require_subcommand(1);

    KnownInputArgs ki_args;
    CLI::App* ki = attack->add_subcommand("known-input", "Attack with known private records");
    ki->add_option("--data", ki_args.data, "Perturbed CSV")->required();
    ki->add_option("--known", ki_args.known, "Known private records CSV")->required();
    ki->add_option("--epsilon", ki_args.epsilon, "Breach threshold");
    ki->add_option("--seed", ki_args.seed, "Random seed")->required();
    ki->add_flag("--has-header", ki_args.has_header, "Inputs carry a header row");
    ki->add_flag("--general", ki_args.general, "Allow a translation component");
    ki->add_option("--link-tol", ki_args.link_tol, "Relative linking tolerance");
    ki->add_option("--rank-tol", ki_args.rank_tol, "Relative rank tolerance");
    ki->add_option("--node-budget", ki_args.node_budget, "Linking search node budget (0 = unlimited)");
    ki->add_option("--out", ki_args.report_out, "Write the JSON report here");
    ki->add_option("--estimate-out", ki_args.estimate_out, "Write the estimated record as CSV");

    KnownSampleArgs ks_args;
    CLI::App* ks = attack->add_subcommand("known-sample", "PCA attack with an independent sample");
    ks->add_option("--data", ks_args.data, "Perturbed CSV")->required();
    ks->add_option("--sample", ks_args.sample, "Independent sample CSV")->required();
    ks->add_option("--seed", ks_args.seed, "Random seed")->required();
    ks->add_flag("--has-header", ks_args.has_header, "Inputs carry a header row");
    ks->add_flag("--general", ks_args.general, "Allow a translation component");
    ks->add_option("--permutations", ks_args.permutations, "Two-sample test permutations");
    ks->add_option("--pool-cap", ks_args.pool_cap, "Pooled-sample cap for the test");
    ks->add_option("--out", ks_args.report_out, "Write the JSON report here");
    ks->add_option("--estimates-out", ks_args.estimates_out, "Write all record estimates as CSV");

    EvaluateArgs ev_args;
    CLI::App* ev = app.add_subcommand("evaluate", "Score estimates against the true records");
    ev->add_option("--truth", ev_args.truth, "True records CSV")->required();
    ev->add_option("--estimates", ev_args.estimates, "Estimates CSV, matched by row")->required();
    ev->add_option("--epsilon", ev_args.epsilon, "Breach threshold");
    ev->add_flag("--has-header", ev_args.has_header, "Inputs carry a header row");
    ev->add_option("--out", ev_args.output, "Write per-record outcomes here");
    ev->add_option("--format", ev_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    ExperimentArgs ex_args;
    CLI::App* ex = app.add_subcommand("experiment", "Run a seeded breach-frequency experiment");
    ex->add_option("--config", ex_args.config, "Experiment config JSON")->required();
    ex->add_option("--seed", ex_args.seed, "Random seed (fully determines the run)")->required();
    ex->add_option("--out", ex_args.output, "Output base path (.csv/.json appended)");
    ex->add_option("--format", ex_args.format, "csv, json, or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    CLI11_PARSE(app, argc, argv);

    if (perturb->parsed()) return run_perturb(perturb_args);
    if (attack->parsed()) {
        if (ki->parsed()) return run_known_input(ki_args);
        if (ks->parsed()) return run_known_sample(ks_args);
    }
    if (ev->parsed()) return run_evaluate(ev_args);
    if (ex->parsed()) return run_experiment_cmd(ex_args);
    return 1;
}
