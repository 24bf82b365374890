#include "known_sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "stopwatch.hpp"

namespace dppriv::ksa {

namespace {

Matrix pairwise_distances(const Matrix& A, const Matrix& B) {
    Matrix out(A.cols(), B.cols());
    for (Eigen::Index j = 0; j < B.cols(); ++j)
        out.col(j) = (A.colwise() - B.col(j)).colwise().norm().transpose();
    return out;
}

double scaled_energy(double sum_ab, double sum_aa, double sum_bb,
                     Eigen::Index p, Eigen::Index r) {
    double dp = static_cast<double>(p);
    double dr = static_cast<double>(r);
    double mean_ab = sum_ab / (dp * dr);
    double mean_aa = 2.0 * sum_aa / (dp * dp);
    double mean_bb = 2.0 * sum_bb / (dr * dr);
    return (dp * dr / (dp + dr)) * (2.0 * mean_ab - mean_aa - mean_bb);
}

double upper_triangle_sum(const Matrix& dist) {
    double s = 0.0;
    for (Eigen::Index j = 1; j < dist.cols(); ++j)
        for (Eigen::Index i = 0; i < j; ++i)
            s += dist(i, j);
    return s;
}

Matrix subsample_columns(const Matrix& M, int count, RandomStream& rng) {
    if (count >= M.cols()) return M;
    std::vector<int> keep = sample_without_replacement(static_cast<int>(M.cols()), count, rng);
    Matrix out(M.rows(), count);
    for (int t = 0; t < count; ++t) out.col(t) = M.col(keep[static_cast<std::size_t>(t)]);
    return out;
}

// Split a pooled cap across the two sides: at most cap/2 each, with slack
// from a small side handed to the other.
std::pair<int, int> pooled_counts(Eigen::Index p, Eigen::Index r, int cap) {
    int half = cap / 2;
    int pa = static_cast<int>(std::min<Eigen::Index>(p, half));
    int pb = static_cast<int>(std::min<Eigen::Index>(r, cap - pa));
    pa = static_cast<int>(std::min<Eigen::Index>(p, cap - pb));
    return {pa, pb};
}

} // namespace

double energy_statistic(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows())
        fail(errc::dimension_mismatch, "energy_statistic: dimension mismatch");
    if (A.cols() < 1 || B.cols() < 1)
        fail(errc::insufficient_data, "energy_statistic: empty sample");
    double sum_ab = pairwise_distances(A, B).sum();
    double sum_aa = upper_triangle_sum(pairwise_distances(A, A));
    double sum_bb = upper_triangle_sum(pairwise_distances(B, B));
    return scaled_energy(sum_ab, sum_aa, sum_bb, A.cols(), B.cols());
}

EnergyPermutationTester::EnergyPermutationTester(Matrix B, int permutations)
    : B_(std::move(B)), permutations_(permutations) {
    if (B_.cols() < 2)
        fail(errc::insufficient_data, "EnergyPermutationTester: need at least 2 columns");
    if (permutations_ < 1)
        fail(errc::invalid_argument, "EnergyPermutationTester: need at least 1 permutation");
    dist_bb_ = pairwise_distances(B_, B_);
}

double EnergyPermutationTester::p_value(const Matrix& A, RandomStream& rng) const {
    if (A.rows() != B_.rows())
        fail(errc::dimension_mismatch, "p_value: dimension mismatch");
    const Eigen::Index pa = A.cols();
    const Eigen::Index pb = B_.cols();
    if (pa < 2) fail(errc::insufficient_data, "p_value: need at least 2 columns");
    const Eigen::Index total = pa + pb;

    // Pooled distance matrix, A columns first.
    Matrix dist(total, total);
    dist.topLeftCorner(pa, pa) = pairwise_distances(A, A);
    dist.topRightCorner(pa, pb) = pairwise_distances(A, B_);
    dist.bottomLeftCorner(pb, pa) = dist.topRightCorner(pa, pb).transpose();
    dist.bottomRightCorner(pb, pb) = dist_bb_;

    Vector row_sums = dist.rowwise().sum();
    const double total_pairs = 0.5 * row_sums.sum();

    auto statistic_for = [&](const std::vector<int>& a_labels) {
        double sum_aa = 0.0;
        double rows = 0.0;
        for (std::size_t u = 0; u < a_labels.size(); ++u) {
            rows += row_sums(a_labels[u]);
            for (std::size_t v = u + 1; v < a_labels.size(); ++v)
                sum_aa += dist(a_labels[u], a_labels[v]);
        }
        double sum_ab = rows - 2.0 * sum_aa;
        double sum_bb = total_pairs - sum_aa - sum_ab;
        return scaled_energy(sum_ab, sum_aa, sum_bb, pa, pb);
    };

    std::vector<int> labels(static_cast<std::size_t>(pa));
    for (Eigen::Index i = 0; i < pa; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i);
    const double observed = statistic_for(labels);

    std::vector<int> pool(static_cast<std::size_t>(total));
    for (Eigen::Index i = 0; i < total; ++i) pool[static_cast<std::size_t>(i)] = static_cast<int>(i);

    int at_least = 0;
    for (int perm = 0; perm < permutations_; ++perm) {
        // Partial Fisher-Yates: the first pa entries become the permuted A.
        for (Eigen::Index i = 0; i < pa; ++i) {
            std::size_t j = static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(total - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        labels.assign(pool.begin(), pool.begin() + pa);
        if (statistic_for(labels) >= observed) ++at_least;
    }
    return static_cast<double>(1 + at_least) / static_cast<double>(permutations_ + 1);
}

double energy_two_sample_p(const Matrix& A, const Matrix& B, int permutations,
                           RandomStream& rng, int pool_cap) {
    if (A.rows() != B.rows())
        fail(errc::dimension_mismatch, "energy_two_sample_p: dimension mismatch");
    if (A.cols() < 2 || B.cols() < 2)
        fail(errc::insufficient_data, "energy_two_sample_p: need at least 2 columns per side");
    if (pool_cap < 4)
        fail(errc::invalid_argument, "energy_two_sample_p: pool_cap too small");

    Matrix A_used = A;
    Matrix B_used = B;
    if (A.cols() + B.cols() > pool_cap) {
        auto [pa, pb] = pooled_counts(A.cols(), B.cols(), pool_cap);
        RandomStream sub = rng.derive(0x5ab5a3fULL);
        A_used = subsample_columns(A, std::max(pa, 2), sub);
        B_used = subsample_columns(B, std::max(pb, 2), sub);
    }
    EnergyPermutationTester tester(std::move(B_used), permutations);
    return tester.p_value(A_used, rng);
}

SignSearchResult sign_search(const Matrix& W, const Matrix& Z,
                             const Matrix& S, const Matrix& Y,
                             const KnownSampleOptions& options, RandomStream& rng) {
    const int n = static_cast<int>(W.rows());
    if (W.cols() != n || Z.rows() != n || Z.cols() != n)
        fail(errc::dimension_mismatch, "sign_search: eigenvector matrices must be n x n");
    if (S.rows() != n || Y.rows() != n)
        fail(errc::dimension_mismatch, "sign_search: sample dimension mismatch");
    if (S.cols() < 2 || Y.cols() < 2)
        fail(errc::insufficient_data, "sign_search: need at least 2 columns per side");
    if (n > options.sign_search_cap)
        fail(errc::budget_exhausted,
             "sign_search: dimension exceeds the exhaustive-search cap");

    // One shared subsample keeps the 2^n evaluations comparable and lets the
    // Y-side distances be cached across candidates.
    Matrix S_used = S;
    Matrix Y_used = Y;
    if (S.cols() + Y.cols() > options.pool_cap) {
        auto [pa, pb] = pooled_counts(S.cols(), Y.cols(), options.pool_cap);
        RandomStream sub = rng.derive(0x5ab5a3fULL);
        S_used = subsample_columns(S, std::max(pa, 2), sub);
        Y_used = subsample_columns(Y, std::max(pb, 2), sub);
    }
    EnergyPermutationTester tester(std::move(Y_used), options.permutations);

    const std::uint64_t candidates = std::uint64_t{1} << n;
    SignSearchResult result;
    result.p_table.reserve(static_cast<std::size_t>(candidates));
    result.signs = Vector::Ones(n);
    result.p_value = -1.0;

    Matrix base = Z.transpose() * S_used;
    for (std::uint64_t c = 0; c < candidates; ++c) {
        // Row 0 is the most significant bit, bit clear = +1, so ascending c
        // enumerates sign vectors in lexicographic order with +1 < -1.
        Vector signs(n);
        for (int i = 0; i < n; ++i)
            signs(i) = ((c >> (n - 1 - i)) & 1u) ? -1.0 : 1.0;
        Matrix A = W * signs.asDiagonal() * base;
        RandomStream candidate_rng = rng.derive(c);
        double p = tester.p_value(A, candidate_rng);
        result.p_table.push_back(p);
        if (p > result.p_value) {
            result.p_value = p;
            result.signs = signs;
        }
    }
    return result;
}

namespace {

PcaDiagnostics make_diagnostics(const EigenModel& sample_model, const EigenModel& data_model) {
    PcaDiagnostics diag;
    diag.sample_min_relative_gap = sample_model.min_relative_gap;
    diag.data_min_relative_gap = data_model.min_relative_gap;
    diag.sample_degenerate = sample_model.degenerate;
    diag.data_degenerate = data_model.degenerate;
    auto ratio_of = [](const EigenModel& model) -> std::optional<double> {
        if (model.eigenvalues.size() < 2) return std::nullopt;
        if (model.eigenvalues.minCoeff() <= 0.0) return std::nullopt;
        double worst = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i + 1 < model.eigenvalues.size(); ++i)
            worst = std::min(worst, model.eigenvalues(i) / model.eigenvalues(i + 1));
        return worst;
    };
    diag.sample_eigen_ratio = ratio_of(sample_model);
    diag.data_eigen_ratio = ratio_of(data_model);
    return diag;
}

Matrix drop_random_column(const Matrix& M, RandomStream& rng) {
    Eigen::Index drop = static_cast<Eigen::Index>(rng.bounded(static_cast<std::uint64_t>(M.cols())));
    Matrix out(M.rows(), M.cols() - 1);
    Eigen::Index col = 0;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        if (j == drop) continue;
        out.col(col++) = M.col(j);
    }
    return out;
}

Matrix disjoint_pair_differences(const Matrix& M) {
    Eigen::Index half = M.cols() / 2;
    Matrix out(M.rows(), half);
    for (Eigen::Index i = 0; i < half; ++i)
        out.col(i) = M.col(i) - M.col(half + i);
    return out;
}

} // namespace

PcaAttackResult pca_attack_orthogonal(const DataMatrix& S, const DataMatrix& Y,
                                      const KnownSampleOptions& options,
                                      RandomStream& rng) {
    if (S.rows() != Y.rows())
        fail(errc::dimension_mismatch, "pca_attack_orthogonal: dimension mismatch");
    if (S.cols() < 2 || Y.cols() < 2)
        fail(errc::insufficient_data, "pca_attack_orthogonal: need at least 2 columns per side");

    EigenModel sample_model = eigen_sorted(sample_covariance(S), options.distinct_tol);
    EigenModel data_model = eigen_sorted(sample_covariance(Y), options.distinct_tol);

    Stopwatch search_clock;
    SignSearchResult search = sign_search(data_model.vectors, sample_model.vectors,
                                          S, Y, options, rng);
    double seconds_sign_search = search_clock.seconds();

    PcaAttackResult result;
    result.signs = search.signs;
    result.p_value = search.p_value;
    result.p_table = std::move(search.p_table);
    result.estimator = data_model.vectors * search.signs.asDiagonal() *
                       sample_model.vectors.transpose();
    result.estimates = result.estimator.transpose() * Y;
    result.chosen_j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(Y.cols())));
    result.mean_correction = Vector::Zero(Y.rows());
    result.diagnostics = make_diagnostics(sample_model, data_model);
    result.seconds_sign_search = seconds_sign_search;
    return result;
}

PcaAttackResult pca_attack_general(const DataMatrix& S, const DataMatrix& Y,
                                   const KnownSampleOptions& options,
                                   RandomStream& rng) {
    if (S.rows() != Y.rows())
        fail(errc::dimension_mismatch, "pca_attack_general: dimension mismatch");
    if (S.cols() < 4 || Y.cols() < 4)
        fail(errc::insufficient_data, "pca_attack_general: need at least 4 columns per side");

    Matrix S_even = (S.cols() % 2 == 0) ? S : drop_random_column(S, rng);
    Matrix Y_even = (Y.cols() % 2 == 0) ? Y : drop_random_column(Y, rng);
    Matrix S_diff = disjoint_pair_differences(S_even);
    Matrix Y_diff = disjoint_pair_differences(Y_even);

    PcaAttackResult result = pca_attack_orthogonal(S_diff, Y_diff, options, rng);

    Vector mu_s = S.rowwise().mean();
    Vector mu_y = Y.rowwise().mean();
    result.mean_correction = mu_y - result.estimator * mu_s;
    result.estimates = result.estimator.transpose() *
                       (Y.colwise() - result.mean_correction);
    result.chosen_j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(Y.cols())));
    return result;
}

double min_eigen_ratio(const Matrix& covariance) {
    EigenModel model = eigen_sorted(covariance);
    if (model.eigenvalues.size() < 2)
        fail(errc::invalid_argument, "min_eigen_ratio: need at least a 2x2 matrix");
    if (model.eigenvalues.minCoeff() <= 0.0)
        fail(errc::invalid_argument, "min_eigen_ratio: nonpositive eigenvalue");
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i)
        for (Eigen::Index j = i + 1; j < model.eigenvalues.size(); ++j)
            worst = std::min(worst, model.eigenvalues(i) / model.eigenvalues(j));
    return worst;
}

double sym_kl_gaussian(const Vector& mu_g, const Vector& mu_h, const Matrix& sigma) {
    if (mu_g.size() != mu_h.size() || sigma.rows() != mu_g.size() || sigma.cols() != mu_g.size())
        fail(errc::dimension_mismatch, "sym_kl_gaussian: dimension mismatch");
    Eigen::FullPivLU<Matrix> lu(sigma);
    if (!lu.isInvertible())
        fail(errc::singular, "sym_kl_gaussian: covariance is singular");
    Vector delta = mu_g - mu_h;
    return delta.dot(lu.solve(delta));
}

double invariance_gaussian(const Vector& mu, double alpha, const Matrix& covariance) {
    if (alpha < 0.0)
        fail(errc::invalid_argument, "invariance_gaussian: alpha must be nonnegative");
    if (covariance.rows() != mu.size())
        fail(errc::dimension_mismatch, "invariance_gaussian: dimension mismatch");
    EigenModel model = eigen_sorted(covariance);
    if (model.eigenvalues.minCoeff() <= 0.0)
        fail(errc::invalid_argument, "invariance_gaussian: covariance is not positive definite");
    if (model.eigenvalues.size() >= 2 && model.min_relative_gap < 1e-12)
        fail(errc::invalid_argument, "invariance_gaussian: repeated eigenvalues");

    // Flipping the sign set F changes the quadratic form by
    // sum_{i in F} 4 (z_i' mu)^2 / lambda_i; every term is positive, so the
    // minimum over nonempty F is the smallest single term.
    Vector projected = model.vectors.transpose() * mu;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < projected.size(); ++i)
        best = std::min(best, 4.0 * projected(i) * projected(i) / model.eigenvalues(i));
    return alpha * alpha * best;
}

} // namespace dppriv::ksa
