#include "known_input.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "linalg.hpp"
#include "stopwatch.hpp"

namespace dppriv::kia {

namespace {

// Relative equality for nonnegative magnitudes (lengths, distances).
bool magnitudes_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(a, b);
}

struct LinkContext {
    const DataMatrix& Xa;
    const DataMatrix& Y;
    LinkOptions options;
    Vector xnorm;
    Vector ynorm;
    Matrix xdist;  // pairwise distances among known inputs

    LinkContext(const DataMatrix& Xa_, const DataMatrix& Y_, const LinkOptions& options_)
        : Xa(Xa_), Y(Y_), options(options_) {
        if (Xa.rows() != Y.rows())
            fail(errc::dimension_mismatch, "linking: known inputs and data differ in dimension");
        xnorm = Xa.colwise().norm();
        ynorm = Y.colwise().norm();
        const Eigen::Index a = Xa.cols();
        xdist = Matrix::Zero(a, a);
        for (Eigen::Index i = 0; i < a; ++i)
            for (Eigen::Index j = i + 1; j < a; ++j)
                xdist(i, j) = xdist(j, i) = (Xa.col(i) - Xa.col(j)).norm();
    }

    // Can i_hat -> j extend the partial assignment (domain[0..level), image[0..level))?
    bool admissible(int i_hat, int j, const std::vector<int>& domain,
                    const std::vector<int>& image, std::size_t level) const {
        if (options.lengths_preserved &&
            !magnitudes_close(xnorm(i_hat), ynorm(j), options.tol))
            return false;
        for (std::size_t t = 0; t < level; ++t) {
            double dy = (Y.col(j) - Y.col(image[t])).norm();
            if (!magnitudes_close(xdist(i_hat, domain[t]), dy, options.tol))
                return false;
        }
        return true;
    }
};

struct UniquenessSearch {
    const LinkContext& ctx;
    const std::vector<int>& indices;
    std::vector<int> image;
    std::vector<char> used;
    std::vector<int> first_image;
    int found = 0;
    std::uint64_t* budget = nullptr;
    bool exhausted = false;

    UniquenessSearch(const LinkContext& ctx_, const std::vector<int>& indices_,
                     std::uint64_t* budget_)
        : ctx(ctx_), indices(indices_),
          image(indices_.size(), -1),
          used(static_cast<std::size_t>(ctx_.Y.cols()), 0),
          budget(budget_) {}

    // Extends by the smallest unassigned index at each node, branching only
    // over its candidate columns; each complete valid assignment is then
    // visited exactly once.
    void run(std::size_t level) {
        if (exhausted || found >= 2) return;
        if (*budget == 0) { exhausted = true; return; }
        --*budget;
        if (level == indices.size()) {
            if (++found == 1) first_image = image;
            return;
        }
        int i_hat = indices[level];
        const int m = static_cast<int>(ctx.Y.cols());
        for (int j = 0; j < m; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            if (!ctx.admissible(i_hat, j, indices, image, level)) continue;
            used[static_cast<std::size_t>(j)] = 1;
            image[level] = j;
            run(level + 1);
            used[static_cast<std::size_t>(j)] = 0;
            if (exhausted || found >= 2) return;
        }
    }
};

UniquenessResult run_uniqueness(const LinkContext& ctx, const std::vector<int>& indices,
                                std::uint64_t* budget) {
    UniquenessSearch search(ctx, indices, budget);
    search.run(0);
    UniquenessResult out;
    out.budget_exhausted = search.exhausted;
    out.unique = !search.exhausted && search.found == 1;
    if (out.unique) {
        out.assignment.domain = indices;
        out.assignment.image = search.first_image;
    }
    return out;
}

// Known-input indices whose record duplicates an earlier one within tol.
std::vector<int> duplicate_indices(const DataMatrix& Xa, double tol) {
    std::vector<int> dropped;
    const Eigen::Index a = Xa.cols();
    for (Eigen::Index i = 1; i < a; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            double d = (Xa.col(i) - Xa.col(j)).norm();
            if (d <= tol * std::max(Xa.col(i).norm(), Xa.col(j).norm())) {
                dropped.push_back(static_cast<int>(i));
                break;
            }
        }
    }
    return dropped;
}

bool next_combination(std::vector<int>& comb, int n) {
    const int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[static_cast<std::size_t>(i)] < n - k + i) {
            ++comb[static_cast<std::size_t>(i)];
            for (int t = i + 1; t < k; ++t)
                comb[static_cast<std::size_t>(t)] = comb[static_cast<std::size_t>(t - 1)] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

std::vector<int> candidate_set(const DataMatrix& Xa, const DataMatrix& Y,
                               const Assignment& alpha1, int i_hat,
                               const LinkOptions& options) {
    if (i_hat < 0 || i_hat >= Xa.cols())
        fail(errc::invalid_argument, "candidate_set: index out of range");
    LinkContext ctx(Xa, Y, options);
    std::vector<char> used(static_cast<std::size_t>(Y.cols()), 0);
    for (int j : alpha1.image) used[static_cast<std::size_t>(j)] = 1;
    std::vector<int> out;
    for (int j = 0; j < Y.cols(); ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        if (ctx.admissible(i_hat, j, alpha1.domain, alpha1.image, alpha1.domain.size()))
            out.push_back(j);
    }
    return out;
}

UniquenessResult is_uniquely_valid(const std::vector<int>& indices,
                                   const DataMatrix& Xa, const DataMatrix& Y,
                                   const LinkOptions& options) {
    for (int i : indices)
        if (i < 0 || i >= Xa.cols())
            fail(errc::invalid_argument, "is_uniquely_valid: index out of range");
    std::vector<int> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    LinkContext ctx(Xa, Y, options);
    std::uint64_t budget = options.node_budget;
    return run_uniqueness(ctx, sorted, &budget);
}

LinkResult find_maximal_uniquely_valid(const DataMatrix& Xa, const DataMatrix& Y,
                                       const LinkOptions& options) {
    if (Xa.cols() < 1)
        fail(errc::invalid_argument, "find_maximal_uniquely_valid: no known inputs");
    LinkContext ctx(Xa, Y, options);

    LinkResult result;
    result.duplicates_dropped = duplicate_indices(Xa, options.tol);
    std::vector<int> pool;
    {
        std::size_t next_dropped = 0;
        for (int i = 0; i < Xa.cols(); ++i) {
            if (next_dropped < result.duplicates_dropped.size() &&
                result.duplicates_dropped[next_dropped] == i) {
                ++next_dropped;
                continue;
            }
            pool.push_back(i);
        }
    }

    std::uint64_t budget = options.node_budget;
    const int a = static_cast<int>(pool.size());
    for (int level = a; level >= 1; --level) {
        std::vector<int> comb(static_cast<std::size_t>(level));
        for (int i = 0; i < level; ++i) comb[static_cast<std::size_t>(i)] = i;
        do {
            std::vector<int> subset(static_cast<std::size_t>(level));
            for (int i = 0; i < level; ++i)
                subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])];
            UniquenessResult uniq = run_uniqueness(ctx, subset, &budget);
            if (uniq.budget_exhausted) {
                result.budget_exhausted = true;
                return result;
            }
            if (uniq.unique) {
                result.assignment = uniq.assignment;
                return result;
            }
        } while (next_combination(comb, a));
    }
    return result;  // empty assignment: no uniquely valid subset
}

// ---------------------------------------------------------------------------
// Constraint-set sampler
// ---------------------------------------------------------------------------

Matrix ConstraintSetSampler::apply(const Matrix& P) const {
    if (P.rows() != codim() || P.cols() != codim())
        fail(errc::dimension_mismatch, "ConstraintSetSampler::apply: P has wrong dimension");
    return MTUk * Uk.transpose() + Vperp * P * Uperp.transpose();
}

Matrix ConstraintSetSampler::invert(const Matrix& Mhat) const {
    if (Mhat.rows() != n() || Mhat.cols() != n())
        fail(errc::dimension_mismatch, "ConstraintSetSampler::invert: matrix has wrong dimension");
    return Vperp.transpose() * Mhat * Uperp;
}

Matrix ConstraintSetSampler::sample(RandomStream& rng) const {
    return apply(haar_orthogonal(codim(), rng));
}

ConstraintSetSampler constraint_set_sampler(const Matrix& Xq, const Matrix& Yq,
                                            double rank_tol, double feas_tol) {
    if (Xq.rows() != Yq.rows() || Xq.cols() != Yq.cols())
        fail(errc::dimension_mismatch, "constraint_set_sampler: shapes differ");
    if (Xq.cols() < 1)
        fail(errc::invalid_argument, "constraint_set_sampler: no linked pairs");

    // An orthogonal map taking Xq to Yq exists iff the Gram matrices agree.
    Matrix gx = Xq.transpose() * Xq;
    Matrix gy = Yq.transpose() * Yq;
    double scale = std::max({gx.cwiseAbs().maxCoeff(), gy.cwiseAbs().maxCoeff(), 1e-300});
    if ((gx - gy).cwiseAbs().maxCoeff() > feas_tol * scale)
        fail(errc::infeasible,
             "constraint_set_sampler: no orthogonal matrix maps the inputs to the outputs");

    OrthonormalBasisPair ux = orthonormal_basis(Xq, rank_tol);
    OrthonormalBasisPair vy = orthonormal_basis(Yq, rank_tol);
    if (ux.k != vy.k)
        fail(errc::infeasible, "constraint_set_sampler: linked inputs and outputs differ in rank");

    ConstraintSetSampler sampler;
    sampler.Uk = ux.basis;
    sampler.Uperp = ux.complement;
    sampler.Vperp = vy.complement;
    // Solve Xq * A = Uk; then Yq * A equals the hidden rotation applied to Uk.
    Matrix A = Xq.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(ux.basis);
    sampler.MTUk = Yq * A;

    if (ux.k > 0) {
        Matrix gram = sampler.MTUk.transpose() * sampler.MTUk;
        if ((gram - Matrix::Identity(ux.k, ux.k)).cwiseAbs().maxCoeff() > 1e-6)
            fail(errc::infeasible, "constraint_set_sampler: inconsistent linked pairs");
    }
    return sampler;
}

// ---------------------------------------------------------------------------
// Numeric kernels and the closed-form breach probability
// ---------------------------------------------------------------------------

double gamma_ratio(int m) {
    if (m < 1) fail(errc::invalid_argument, "gamma_ratio: m must be >= 1");
    const double root_pi = std::sqrt(std::numbers::pi);
    if (m == 1) return root_pi / 2.0;
    if (m == 2) return 2.0 / root_pi;
    double g = (m % 2 == 1) ? root_pi / 2.0 : 2.0 / root_pi;
    for (int t = (m % 2 == 1) ? 3 : 4; t <= m; t += 2)
        g *= static_cast<double>(t) / static_cast<double>(t - 1);
    return g;
}

double sine_integral(double z, int m) {
    if (m < 1) fail(errc::invalid_argument, "sine_integral: m must be >= 1");
    if (!(z >= 0.0 && z <= 1.0))
        fail(errc::invalid_argument, "sine_integral: z must lie in [0, 1]");
    if (m == 1) return std::acos(z);
    if (m == 2) return 1.0 - z;
    double s = (m % 2 == 1) ? std::acos(z) : 1.0 - z;
    const double zfac = 1.0 - z * z;
    for (int t = (m % 2 == 1) ? 3 : 4; t <= m; t += 2) {
        s = (static_cast<double>(t - 2) / (t - 1)) * s -
            z * std::pow(zfac, (t - 2) / 2.0) / (t - 1);
    }
    return s;
}

double breach_probability(const BreachProbabilityInputs& inputs) {
    if (inputs.codim < 0)
        fail(errc::invalid_argument, "breach_probability: negative codimension");
    if (inputs.eps < 0.0 || inputs.y_norm < 0.0)
        fail(errc::invalid_argument, "breach_probability: negative magnitude");
    if (inputs.vperp_y_norm < 0.0 || inputs.vperp_y_norm > inputs.y_norm + 1e-9)
        fail(errc::invalid_argument,
             "breach_probability: ||Vperp' y|| must lie in [0, ||y||]");

    const int m = inputs.codim;
    const double c = inputs.y_norm * inputs.eps;
    const double w = inputs.vperp_y_norm;

    if (m == 0) return 1.0;
    if (c >= 2.0 * w) return 1.0;
    if (m == 1) return 0.5;

    // Fraction of the radius-w sphere in R^m within distance c of a surface
    // point: a cap with polar angle arccos(1 - t2), t2 = [c / (w sqrt 2)]^2.
    // The cap fraction integrates sin^(m-2), hence SI(., m-1) below.
    const double t2 = (c * c) / (2.0 * w * w);
    if (m == 2) {
        if (t2 <= 1.0) return std::acos(1.0 - t2) / std::numbers::pi;
        return 1.0 - std::acos(t2 - 1.0) / std::numbers::pi;
    }
    const double coef = gamma_ratio(m - 2) / std::sqrt(std::numbers::pi);
    if (t2 <= 1.0) return coef * sine_integral(1.0 - t2, m - 1);
    return 1.0 - coef * sine_integral(std::min(t2 - 1.0, 1.0), m - 1);
}

// ---------------------------------------------------------------------------
// Full attack
// ---------------------------------------------------------------------------

namespace {

Matrix select_columns(const DataMatrix& M, const std::vector<int>& cols) {
    Matrix out(M.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t t = 0; t < cols.size(); ++t)
        out.col(static_cast<Eigen::Index>(t)) = M.col(cols[t]);
    return out;
}

std::vector<int> unlinked_columns(Eigen::Index m, const std::vector<int>& image) {
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    for (int j : image) used[static_cast<std::size_t>(j)] = 1;
    std::vector<int> out;
    for (Eigen::Index j = 0; j < m; ++j)
        if (!used[static_cast<std::size_t>(j)]) out.push_back(static_cast<int>(j));
    return out;
}

double rho_for_target(const ConstraintSetSampler& sampler, const Vector& target,
                      double eps) {
    BreachProbabilityInputs inputs;
    inputs.y_norm = target.norm();
    inputs.vperp_y_norm = std::min((sampler.Vperp.transpose() * target).norm(), inputs.y_norm);
    inputs.eps = eps;
    inputs.codim = sampler.codim();
    return breach_probability(inputs);
}

} // namespace

KnownInputReport known_input_attack(const DataMatrix& Xa, const DataMatrix& Y,
                                    double eps, RandomStream& rng,
                                    const KnownInputOptions& options) {
    if (Xa.cols() < 1)
        fail(errc::invalid_argument, "known_input_attack: no known inputs");
    if (eps < 0.0)
        fail(errc::invalid_argument, "known_input_attack: eps must be nonnegative");

    LinkOptions link_options = options.link;
    link_options.lengths_preserved = true;

    KnownInputReport report;
    Stopwatch link_clock;
    report.link = find_maximal_uniquely_valid(Xa, Y, link_options);
    report.seconds_link = link_clock.seconds();
    if (report.link.budget_exhausted)
        fail(errc::budget_exhausted, "known_input_attack: linking budget exhausted");
    if (report.link.assignment.domain.empty())
        fail(errc::infeasible, "known_input_attack: no uniquely valid subset of known inputs");

    Matrix Xq = select_columns(Xa, report.link.assignment.domain);
    Matrix Yq = select_columns(Y, report.link.assignment.image);
    ConstraintSetSampler sampler = constraint_set_sampler(Xq, Yq, options.rank_tol);
    report.k = sampler.k();
    report.codim = sampler.codim();

    std::vector<int> targets = unlinked_columns(Y.cols(), report.link.assignment.image);
    if (targets.empty())
        fail(errc::infeasible, "known_input_attack: every record is linked; nothing to estimate");

    Stopwatch rho_clock;
    report.rho_table.reserve(targets.size());
    for (int j : targets) {
        double rho = rho_for_target(sampler, Y.col(j), eps);
        report.rho_table.emplace_back(j, rho);
        if (report.chosen_j < 0 || rho > report.rho_max) {
            report.chosen_j = j;
            report.rho_max = rho;
        }
    }
    report.seconds_rho = rho_clock.seconds();

    report.estimator = sampler.sample(rng);
    report.estimate = report.estimator.transpose() * Y.col(report.chosen_j);
    return report;
}

KnownInputReport known_input_attack_general(const DataMatrix& Xa, const DataMatrix& Y,
                                            double eps, RandomStream& rng,
                                            const KnownInputOptions& options) {
    if (eps < 0.0)
        fail(errc::invalid_argument, "known_input_attack_general: eps must be nonnegative");

    LinkOptions link_options = options.link;
    link_options.lengths_preserved = false;

    KnownInputReport report;
    Stopwatch link_clock;
    report.link = find_maximal_uniquely_valid(Xa, Y, link_options);
    report.seconds_link = link_clock.seconds();
    if (report.link.budget_exhausted)
        fail(errc::budget_exhausted, "known_input_attack_general: linking budget exhausted");
    const std::vector<int>& domain = report.link.assignment.domain;
    const std::vector<int>& image = report.link.assignment.image;
    if (domain.size() < 2)
        fail(errc::infeasible,
             "known_input_attack_general: need at least two linked records");

    std::vector<int> targets = unlinked_columns(Y.cols(), image);
    if (targets.empty())
        fail(errc::infeasible,
             "known_input_attack_general: every record is linked; nothing to estimate");

    const std::size_t q = domain.size();
    struct AnchorChoice {
        ConstraintSetSampler sampler;
        std::vector<std::pair<int, double>> table;
        int chosen_j = -1;
        double rho = -1.0;
        std::size_t anchor_pos = 0;
    };
    AnchorChoice best;
    Stopwatch rho_clock;

    // The differencing anchor matters; scan every linked record and keep the
    // anchor/target pair with the highest breach probability.
    for (std::size_t anchor = 0; anchor < q; ++anchor) {
        Matrix Xd(Xa.rows(), static_cast<Eigen::Index>(q - 1));
        Matrix Yd(Y.rows(), static_cast<Eigen::Index>(q - 1));
        Eigen::Index col = 0;
        for (std::size_t t = 0; t < q; ++t) {
            if (t == anchor) continue;
            Xd.col(col) = Xa.col(domain[t]) - Xa.col(domain[anchor]);
            Yd.col(col) = Y.col(image[t]) - Y.col(image[anchor]);
            ++col;
        }
        ConstraintSetSampler sampler = constraint_set_sampler(Xd, Yd, options.rank_tol);

        std::vector<std::pair<int, double>> table;
        table.reserve(targets.size());
        int chosen_j = -1;
        double rho_max = -1.0;
        for (int j : targets) {
            Vector diff = Y.col(j) - Y.col(image[anchor]);
            double rho = rho_for_target(sampler, diff, eps);
            table.emplace_back(j, rho);
            if (chosen_j < 0 || rho > rho_max) {
                chosen_j = j;
                rho_max = rho;
            }
        }
        if (rho_max > best.rho) {
            best.sampler = std::move(sampler);
            best.table = std::move(table);
            best.chosen_j = chosen_j;
            best.rho = rho_max;
            best.anchor_pos = anchor;
        }
    }

    report.seconds_rho = rho_clock.seconds();
    report.k = best.sampler.k();
    report.codim = best.sampler.codim();
    report.anchor = domain[best.anchor_pos];
    report.rho_table = std::move(best.table);
    report.chosen_j = best.chosen_j;
    report.rho_max = best.rho;
    report.estimator = best.sampler.sample(rng);
    Vector diff = Y.col(report.chosen_j) - Y.col(image[best.anchor_pos]);
    report.estimate = report.estimator.transpose() * diff + Xa.col(domain[best.anchor_pos]);
    return report;
}

} // namespace dppriv::kia
