// Acceptance suite: each criterion prints one PASS/FAIL line.  Run a single
// criterion by number (`acceptance 3`) or everything (`acceptance`).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "breach.hpp"
#include "csv.hpp"
#include "experiment.hpp"
#include "known_input.hpp"
#include "known_sample.hpp"
#include "linalg.hpp"
#include "oracles.hpp"
#include "perturb.hpp"
#include "random.hpp"
#include "synth.hpp"

using namespace dppriv;

namespace {

struct Check {
    int criterion;
    std::string description;
    bool ok = true;
    int failures = 0;
    std::string first_failure;

    Check(int c, std::string d) : criterion(c), description(std::move(d)) {}

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            ++failures;
            if (first_failure.empty()) first_failure = what;
        }
    }

    void report() const {
        if (ok) {
            std::printf("[PASS] criterion %d: %s\n", criterion, description.c_str());
        } else {
            std::printf("[FAIL] criterion %d: %s (%d failed checks; first: %s)\n", criterion,
                        description.c_str(), failures, first_failure.c_str());
        }
        std::fflush(stdout);
    }
};

std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

DataMatrix gaussian_matrix(int n, int m, RandomStream& rng) {
    DataMatrix X(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = rng.normal();
    return X;
}

// ---------------------------------------------------------------------------
// 1. Closed form vs Monte Carlo
// ---------------------------------------------------------------------------

bool criterion1() {
    Check check(1, "closed-form breach probability within 0.01 of Monte Carlo (200 instances)");
    RandomStream rng(1001);
    const int instances = 200;
    const int draws = 100000;
    for (int t = 0; t < instances; ++t) {
        int codim = 1 + static_cast<int>(rng.bounded(6));
        Vector z = oracles::uniform_sphere_point(codim, 0.3 + 2.7 * rng.uniform(), rng);
        double y_norm = z.norm() * (1.0 + 2.0 * rng.uniform());
        double eps = 0.01 + 1.99 * rng.uniform();

        double closed = kia::breach_probability({y_norm, z.norm(), eps, codim});
        double sampled = oracles::monte_carlo_cap_fraction(z, y_norm * eps, draws, rng);
        check.expect(std::abs(closed - sampled) <= 0.01,
                     "codim " + std::to_string(codim) + ": closed " + fmt(closed) +
                         " vs MC " + fmt(sampled));
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 2. Kernel golden values
// ---------------------------------------------------------------------------

bool criterion2() {
    Check check(2, "GR matches log-gamma to 1e-12; SI matches quadrature to 1e-8");
    for (int m = 1; m <= 50; ++m) {
        double expected = oracles::gamma_ratio_lgamma(m);
        check.expect(std::abs(kia::gamma_ratio(m) - expected) <= 1e-12 * expected,
                     "GR(" + std::to_string(m) + ")");
    }
    for (int m = 1; m <= 12; ++m) {
        for (int step = 0; step <= 10; ++step) {
            double z = step / 10.0;
            double expected = oracles::integrate(
                [m](double theta) { return std::pow(std::sin(theta), m - 1); }, 0.0,
                std::acos(z));
            check.expect(std::abs(kia::sine_integral(z, m) - expected) <= 1e-8,
                         "SI(" + fmt(z) + "," + std::to_string(m) + ")");
        }
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 3. Constraint-set bijection
// ---------------------------------------------------------------------------

bool criterion3() {
    Check check(3, "constraint-set map: orthogonal, feasible, invertible (100 instances)");
    RandomStream rng(1003);
    for (int t = 0; t < 100; ++t) {
        int n = 2 + static_cast<int>(rng.bounded(9));
        int q = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n + 2)));
        Matrix M = haar_orthogonal(n, rng);
        Matrix Xq = gaussian_matrix(n, q, rng);
        if (q >= 2 && rng.bounded(3) == 0) Xq.col(q - 1) = Xq.col(0);  // rank deficiency
        Matrix Yq = M * Xq;

        kia::ConstraintSetSampler sampler = kia::constraint_set_sampler(Xq, Yq);
        Matrix P = haar_orthogonal(sampler.codim(), rng);
        Matrix Mhat = sampler.apply(P);

        double orth = (Mhat.transpose() * Mhat - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
        double feas = (Mhat * Xq - Yq).cwiseAbs().maxCoeff() /
                      std::max(1.0, Yq.cwiseAbs().maxCoeff());
        double invert = sampler.codim() > 0
                            ? (sampler.invert(Mhat) - P).cwiseAbs().maxCoeff()
                            : 0.0;
        check.expect(orth <= 1e-9, "orthogonality " + fmt(orth));
        check.expect(feas <= 1e-8, "feasibility " + fmt(feas));
        check.expect(invert <= 1e-9, "inversion " + fmt(invert));
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 4. Linking exactness
// ---------------------------------------------------------------------------

bool criterion4() {
    Check check(4, "linking exact on Gaussian data (10/10) and equal to enumeration at desk scale");
    RandomStream rng(1004);

    struct Size { int n, m, a; };
    const Size sizes[] = {{100, 5000, 40}, {100, 5000, 80}, {60, 3000, 25},
                          {40, 2000, 15},  {20, 1000, 10},  {100, 4000, 60},
                          {80, 2500, 30},  {50, 1500, 12},  {30, 1200, 8},
                          {10, 600, 5}};
    for (const Size& size : sizes) {
        DataMatrix X = gaussian_matrix(size.n, size.m, rng);
        RigidMotion motion = generate_rigid_motion(size.n, false, 0.0, rng);
        RecordPermutation perm = random_permutation(size.m, rng);
        DataMatrix Y = perturb(X, motion, perm);

        std::vector<int> picks = sample_without_replacement(size.m, size.a, rng);
        DataMatrix Xa(size.n, size.a);
        for (int t = 0; t < size.a; ++t) Xa.col(t) = X.col(picks[static_cast<std::size_t>(t)]);

        kia::LinkResult link = kia::find_maximal_uniquely_valid(Xa, Y);
        check.expect(static_cast<int>(link.assignment.domain.size()) == size.a,
                     "linked " + std::to_string(link.assignment.domain.size()) + " of " +
                         std::to_string(size.a));
        bool assignment_ok = link.assignment.domain.size() == static_cast<std::size_t>(size.a);
        if (assignment_ok) {
            for (int t = 0; t < size.a; ++t) {
                int known = link.assignment.domain[static_cast<std::size_t>(t)];
                int truth = perm[static_cast<std::size_t>(picks[static_cast<std::size_t>(known)])];
                if (link.assignment.image[static_cast<std::size_t>(t)] != truth)
                    assignment_ok = false;
            }
        }
        check.expect(assignment_ok, "ground-truth assignment mismatch");
    }

    // Desk-scale equality with definition-level enumeration.
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng.bounded(3));
        int m = 4 + static_cast<int>(rng.bounded(5));
        int a = std::min<int>(1 + static_cast<int>(rng.bounded(5)), m);
        bool translate = rng.bounded(2) == 1;

        DataMatrix X = gaussian_matrix(n, m, rng);
        if (trial % 4 == 0 && a >= 2) X.col(1) = X.col(0);
        RigidMotion motion = generate_rigid_motion(n, translate, 5.0, rng);
        RecordPermutation perm = random_permutation(m, rng);
        DataMatrix Y = perturb(X, motion, perm);
        DataMatrix Xa = X.leftCols(a);

        kia::LinkOptions options;
        options.lengths_preserved = !translate;

        std::vector<int> best_subset;
        std::vector<int> best_image;
        for (int mask = (1 << a) - 1; mask >= 1; --mask) {
            std::vector<int> subset;
            for (int i = 0; i < a; ++i)
                if (mask & (1 << i)) subset.push_back(i);
            if (subset.size() <= best_subset.size()) continue;
            std::vector<std::vector<int>> found;
            oracles::enumerate_valid_assignments(Xa, Y, subset, options.tol,
                                                 options.lengths_preserved, found);
            if (found.size() == 1) {
                best_subset = subset;
                best_image = found[0];
            }
        }

        kia::LinkResult link = kia::find_maximal_uniquely_valid(Xa, Y, options);
        bool match = link.assignment.domain.size() == best_subset.size() &&
                     (best_subset.empty() ||
                      (link.assignment.domain == best_subset && link.assignment.image == best_image));
        check.expect(match, "desk-scale trial " + std::to_string(trial));
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 5. Known-input breach reproduction
// ---------------------------------------------------------------------------

// 16-dimensional data shaped like the letter-recognition attributes: a few
// dozen glyph prototypes, per-record scale jitter, small independent noise.
DataMatrix letterlike(int records, RandomStream& rng) {
    const int n = 16, prototypes = 26;
    Matrix proto(n, prototypes);
    for (int k = 0; k < prototypes; ++k)
        for (int i = 0; i < n; ++i) proto(i, k) = 3.0 + 9.0 * rng.uniform();
    DataMatrix X(n, records);
    for (int j = 0; j < records; ++j) {
        int k = static_cast<int>(rng.bounded(prototypes));
        double scale = 0.8 + 0.45 * rng.uniform();
        for (int i = 0; i < n; ++i) X(i, j) = scale * proto(i, k) + 0.3 * rng.normal();
    }
    return X;
}

bool criterion5() {
    Check check(5, "known-input reproduction: letter-like rho >= 0.95 at a=4; 100-dim sweep");
    RandomStream rng(1005);

    for (int trial = 0; trial < 5; ++trial) {
        DataMatrix X = letterlike(2000, rng);
        RigidMotion motion = generate_rigid_motion(16, false, 0.0, rng);
        RecordPermutation perm = random_permutation(2000, rng);
        DataMatrix Y = perturb(X, motion, perm);

        std::vector<int> picks = sample_without_replacement(2000, 4, rng);
        DataMatrix Xa(16, 4);
        for (int t = 0; t < 4; ++t) Xa.col(t) = X.col(picks[static_cast<std::size_t>(t)]);

        kia::KnownInputReport report = kia::known_input_attack(Xa, Y, 0.15, rng);
        check.expect(report.rho_max >= 0.95,
                     "letter-like trial " + std::to_string(trial) + ": rho " +
                         fmt(report.rho_max));
    }

    // 100-dimensional Gaussian with an empirical-covariance spectrum: the
    // transition of rho(0.15) is sharp in the number of known inputs.
    const int n = 100, m = 20000;
    for (int trial = 0; trial < 3; ++trial) {
        Vector mean(n);
        for (int i = 0; i < n; ++i) mean(i) = rng.normal();
        DataMatrix basis = gaussian_matrix(n, n, rng);
        Matrix covariance = sample_covariance(basis);
        GaussianSpec spec{mean, covariance};
        DataMatrix X = sample_gaussian(spec, m, rng);
        RigidMotion motion = generate_rigid_motion(n, false, 0.0, rng);
        RecordPermutation perm = random_permutation(m, rng);
        DataMatrix Y = perturb(X, motion, perm);

        for (int a : {30, 80}) {
            std::vector<int> picks;
            DataMatrix Xa(n, a);
            for (int attempt = 0; attempt < 50; ++attempt) {
                picks = sample_without_replacement(m, a, rng);
                for (int t = 0; t < a; ++t) Xa.col(t) = X.col(picks[static_cast<std::size_t>(t)]);
                if (orthonormal_basis(Xa).k == a) break;
            }
            kia::KnownInputReport report = kia::known_input_attack(Xa, Y, 0.15, rng);
            if (a == 30)
                check.expect(report.rho_max <= 0.1,
                             "a=30 trial " + std::to_string(trial) + ": rho " +
                                 fmt(report.rho_max));
            else
                check.expect(report.rho_max >= 0.9,
                             "a=80 trial " + std::to_string(trial) + ": rho " +
                                 fmt(report.rho_max));
        }
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 6. Sign-matrix reconstruction from exact covariances
// ---------------------------------------------------------------------------

bool criterion6() {
    Check check(6, "some sign matrix reassembles the rotation to 1e-7 (50 pairs)");
    RandomStream rng(1006);
    for (int t = 0; t < 50; ++t) {
        int n = 2 + static_cast<int>(rng.bounded(7));
        Vector lambda(n);
        double value = 1.0 + 9.0 * rng.uniform();
        for (int i = 0; i < n; ++i) {
            lambda(i) = value;
            value *= 0.25 + 0.45 * rng.uniform();  // well separated
        }
        Matrix sigma = oracles::spd_with_spectrum(lambda, rng);
        Matrix M = haar_orthogonal(n, rng);

        EigenModel z_model = eigen_sorted(sigma);
        EigenModel w_model = eigen_sorted(Matrix(M * sigma * M.transpose()));

        double best = 1e300;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            Vector signs(n);
            for (int i = 0; i < n; ++i) signs(i) = (mask >> i) & 1 ? -1.0 : 1.0;
            Matrix candidate =
                w_model.vectors * signs.asDiagonal() * z_model.vectors.transpose();
            best = std::min(best, (candidate - M).cwiseAbs().maxCoeff());
        }
        check.expect(best <= 1e-7, "n=" + std::to_string(n) + ": best gap " + fmt(best));
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 7. PCA attack trends
// ---------------------------------------------------------------------------

struct TrendSetup {
    GaussianSpec gaussian;
    GaussianMixtureSpec mixture;
};

TrendSetup paper_specs() {
    TrendSetup setup;
    Vector mean(3);
    mean << 10, 10, 10;
    Matrix cov(3, 3);
    cov << 1, 1.5, 0.5, 1.5, 3, 2.5, 0.5, 2.5, 75;
    setup.gaussian = {mean, cov};

    Vector mu2(3);
    mu2 << 20, 30, 40;
    Matrix cov2 = Matrix::Zero(3, 3);
    cov2.diagonal() << 0.1, 2, 40;
    setup.mixture.weights = {0.2, 0.8};
    setup.mixture.components = {{mean, cov}, {mu2, cov2}};
    return setup;
}

// One attack run: fresh data, perturbation, and sample; breach flag of the
// randomly chosen record at the given epsilon.
bool pca_run(const TrendSetup& setup, bool mixture_data, int records, double ratio,
             double eps, bool translate, RandomStream stream) {
    RandomStream data_rng = stream.derive(0);
    DataMatrix X = mixture_data ? sample_mixture(setup.mixture, records, data_rng)
                                : sample_gaussian(setup.gaussian, records, data_rng);
    double scale = translate ? 10.0 * X.colwise().norm().mean() : 0.0;
    RandomStream motion_rng = stream.derive(1);
    RigidMotion motion = generate_rigid_motion(3, translate, scale, motion_rng);
    DataMatrix Y = perturb(X, motion, identity_permutation(records));

    int q = std::max(4, static_cast<int>(std::lround(ratio * records)));
    RandomStream sample_rng = stream.derive(2);
    DataMatrix S = mixture_data ? sample_mixture(setup.mixture, q, sample_rng)
                                : sample_gaussian(setup.gaussian, q, sample_rng);

    ksa::KnownSampleOptions options;
    options.permutations = 99;
    options.pool_cap = 600;
    RandomStream attack_rng = stream.derive(3);
    ksa::PcaAttackResult result =
        translate ? ksa::pca_attack_general(S, Y, options, attack_rng)
                  : ksa::pca_attack_orthogonal(S, Y, options, attack_rng);

    const Vector truth = X.col(result.chosen_j);
    return (result.estimates.col(result.chosen_j) - truth).norm() <= eps * truth.norm();
}

double breach_fraction(const TrendSetup& setup, bool mixture_data, int records, double ratio,
                       double eps, bool translate, int runs, std::uint64_t seed) {
    RandomStream root(seed);
    int breaches = 0;
    for (int r = 0; r < runs; ++r)
        if (pca_run(setup, mixture_data, records, ratio, eps, translate, root.derive(r)))
            ++breaches;
    return static_cast<double>(breaches) / runs;
}

bool criterion7() {
    Check check(7, "PCA attack trends: sample size, eigen-ratio, translation asymmetry");
    TrendSetup setup = paper_specs();
    const int runs = 120;
    const int records = 10000;

    // (a) Breach fraction non-decreasing in the sample ratio.
    const double ratios[] = {0.005, 0.01, 0.02, 0.04};
    std::vector<double> curve;
    for (double ratio : ratios)
        curve.push_back(breach_fraction(setup, false, records, ratio, 0.02, false, runs,
                                        7000 + static_cast<std::uint64_t>(ratio * 1e5)));
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
        check.expect(curve[i + 1] >= curve[i] - 1e-12,
                     "ratio curve not monotone: " + fmt(curve[i]) + " -> " + fmt(curve[i + 1]));
    check.expect(curve.back() >= curve.front() + 0.2,
                 "ratio curve gain " + fmt(curve.back() - curve.front()));

    // (b) Breach fraction grows with the minimum eigen-ratio (b = 2 vs 40).
    auto diag_setup = [](double b) {
        TrendSetup s;
        Vector mean(3);
        mean << 10, 10, 10;
        Matrix cov = Matrix::Zero(3, 3);
        cov.diagonal() << 0.1, 2, b;
        s.gaussian = {mean, cov};
        return s;
    };
    double low = breach_fraction(diag_setup(2.0), false, records, 0.02, 0.05, false, runs, 7100);
    double high = breach_fraction(diag_setup(40.0), false, records, 0.02, 0.05, false, runs, 7101);
    check.expect(high - low >= 0.3, "eigen-ratio gain " + fmt(high - low) + " (b=2: " +
                                        fmt(low) + ", b=40: " + fmt(high) + ")");

    // (c) With a translation, the symmetric Gaussian resists while the
    // asymmetric mixture does not.
    double gaussian_translated =
        breach_fraction(setup, false, records, 0.02, 0.05, true, runs, 7200);
    double mixture_translated =
        breach_fraction(setup, true, records, 0.02, 0.05, true, runs, 7201);
    check.expect(gaussian_translated <= 0.1,
                 "translated Gaussian fraction " + fmt(gaussian_translated));
    check.expect(mixture_translated >= gaussian_translated + 0.2,
                 "mixture " + fmt(mixture_translated) + " vs Gaussian " +
                     fmt(gaussian_translated));
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 8. Metric identities
// ---------------------------------------------------------------------------

bool criterion8() {
    Check check(8, "metric identities on 1000 equal-norm pairs");
    RandomStream rng(1008);
    for (int t = 0; t < 1000; ++t) {
        int n = 2 + static_cast<int>(rng.bounded(10));
        Vector x(n), direction(n);
        for (int i = 0; i < n; ++i) {
            x(i) = rng.normal();
            direction(i) = rng.normal();
        }
        if (x.norm() < 1e-8) x(0) += 1.0;
        if (direction.norm() < 1e-8) direction(0) += 1.0;
        Vector xhat = direction * (x.norm() / direction.norm());

        double rel = relative_euclid_error(x, xhat);
        double gap = cosine_gap(x, xhat);
        double nad = minimum_nad(x, xhat);
        check.expect(std::abs(gap - rel * rel / 2.0) <= 1e-12,
                     "cos identity gap " + fmt(std::abs(gap - rel * rel / 2.0)));
        check.expect(nad <= rel + 1e-12, "nad " + fmt(nad) + " > rel " + fmt(rel));

        double eps = 0.01 + rng.uniform();
        bool eps_hit = eps_breach(x, xhat, std::sqrt(2.0 * eps)).first;
        bool cos_hit = cos_breach(x, xhat, eps).first;
        check.expect(eps_hit == cos_hit, "equivalence at eps " + fmt(eps));
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 9. Diagnostics
// ---------------------------------------------------------------------------

bool criterion9() {
    Check check(9, "eigen-ratio and invariance diagnostics");
    Matrix spread = Matrix::Zero(3, 3);
    spread.diagonal() << 0.1, 2, 40;
    check.expect(ksa::min_eigen_ratio(spread) == 20.0,
                 "min_eigen_ratio " + fmt(ksa::min_eigen_ratio(spread)));

    RandomStream rng(1009);
    Vector lambda(3);
    lambda << 11, 3, 0.7;
    Matrix sigma = oracles::spd_with_spectrum(lambda, rng);
    Vector mu(3);
    mu << 0.8, -1.2, 2.0;

    check.expect(ksa::invariance_gaussian(mu, 0.0, sigma) == 0.0, "Inv at alpha 0");
    double base = ksa::invariance_gaussian(mu, 0.7, sigma);
    double doubled = ksa::invariance_gaussian(mu, 1.4, sigma);
    check.expect(std::abs(doubled - 4.0 * base) <= 1e-10 * std::max(1.0, base),
                 "quadratic scaling gap " + fmt(std::abs(doubled - 4.0 * base)));

    for (int t = 0; t < 25; ++t) {
        Vector two(2);
        two << 2.0 + 3.0 * rng.uniform(), 0.1 + 0.6 * rng.uniform();
        Matrix s2 = oracles::spd_with_spectrum(two, rng);
        EigenModel model = eigen_sorted(s2);
        Vector direction(2);
        direction << rng.normal(), rng.normal();
        double alpha = 0.4 + rng.uniform();

        double expected = 1e300;
        for (int mask = 1; mask < 4; ++mask) {
            Vector signs(2);
            signs << (mask & 1 ? -1.0 : 1.0), (mask & 2 ? -1.0 : 1.0);
            Vector mu_flip = signs.asDiagonal() * model.vectors.transpose() * (alpha * direction);
            Vector mu_base = model.vectors.transpose() * (alpha * direction);
            expected = std::min(expected,
                                ksa::sym_kl_gaussian(mu_flip, mu_base,
                                                     Matrix(model.eigenvalues.asDiagonal())));
        }
        double got = ksa::invariance_gaussian(direction, alpha, s2);
        check.expect(std::abs(got - expected) <= 1e-8 * std::max(1.0, expected),
                     "n=2 oracle gap " + fmt(std::abs(got - expected)));
    }
    check.report();
    return check.ok;
}

// ---------------------------------------------------------------------------
// 10. Determinism
// ---------------------------------------------------------------------------

bool criterion10() {
    Check check(10, "experiments are byte-identical for identical seeds");
    const char* known_input_config = R"({
        "attack": "known-input",
        "epsilon": 0.3,
        "repetitions": 4,
        "known_inputs": 3,
        "threads": 2,
        "dataset": {
            "type": "gaussian",
            "records": 50,
            "mean": [1, 2, 3, 4, 5],
            "covariance": [[3,0,0,0,0],[0,2,0,0,0],[0,0,1.5,0,0],[0,0,0,1,0],[0,0,0,0,0.5]]
        }
    })";
    const char* known_sample_config = R"({
        "attack": "known-sample",
        "epsilon": 0.05,
        "repetitions": 3,
        "sample_ratio": 0.1,
        "permutations": 49,
        "pool_cap": 250,
        "dataset": {
            "type": "gaussian",
            "records": 400,
            "mean": [10, 10, 10],
            "covariance": [[0.1,0,0],[0,2,0],[0,0,40]]
        }
    })";

    for (const char* config_text : {known_input_config, known_sample_config}) {
        harness::ExperimentConfig config = harness::parse_config(config_text);
        config.seed = 20260809;
        harness::ExperimentReport first = harness::run_experiment(config);
        harness::ExperimentReport second = harness::run_experiment(config);
        check.expect(harness::report_to_json(first) == harness::report_to_json(second),
                     "JSON reports differ");
        check.expect(harness::report_to_csv(first) == harness::report_to_csv(second),
                     "CSV reports differ");

        harness::ExperimentConfig serial = config;
        serial.threads = 1;
        harness::ExperimentReport unthreaded = harness::run_experiment(serial);
        // Thread count is not part of the result, only of the schedule.
        check.expect(harness::report_to_json(unthreaded).size() > 0, "empty report");
        bool rows_equal = unthreaded.rows.size() == first.rows.size();
        if (rows_equal) {
            for (std::size_t i = 0; i < first.rows.size(); ++i)
                if (first.rows[i].chosen_j != unthreaded.rows[i].chosen_j) rows_equal = false;
        }
        check.expect(rows_equal, "thread count changed the rows");
    }
    check.report();
    return check.ok;
}

} // namespace

int main(int argc, char** argv) {
    int which = argc > 1 ? std::atoi(argv[1]) : 0;
    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                            criterion6, criterion7, criterion8, criterion9, criterion10};
    bool ok = true;
    for (int i = 0; i < 10; ++i) {
        if (which != 0 && which != i + 1) continue;
        ok = criteria[i]() && ok;
    }
    return ok ? 0 : 1;
}
