#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "random.hpp"
#include "types.hpp"

namespace dppriv::kia {

// ---------------------------------------------------------------------------
// Linking known inputs to perturbed records
// ---------------------------------------------------------------------------

struct LinkOptions {
    // Relative tolerance for length/distance equality tests.
    double tol = 1e-6;
    // True for purely orthogonal perturbations: record lengths must match as
    // well as pairwise distances.  False drops the length condition, which is
    // the validity notion for perturbations that may include a translation.
    bool lengths_preserved = true;
    // Abort the search after this many visited nodes; the result is then
    // empty and flagged.  Guards against the O(m^a) worst case.
    std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
};

// Partial injective map from known-input indices to perturbed columns.
// domain is ascending; image[t] is the column assigned to domain[t].
struct Assignment {
    std::vector<int> domain;
    std::vector<int> image;
};

// All columns j of Y, outside the image of alpha1, that could validly extend
// alpha1 with i_hat -> j: lengths match (when lengths_preserved) and the
// distance from x_{i_hat} to every already-linked known input equals the
// distance between the corresponding images.
std::vector<int> candidate_set(const DataMatrix& Xa, const DataMatrix& Y,
                               const Assignment& alpha1, int i_hat,
                               const LinkOptions& options = {});

struct UniquenessResult {
    bool unique = false;
    Assignment assignment;          // populated when unique
    bool budget_exhausted = false;
};

// Depth-first search over assignments on I, pruned by candidate sets;
// terminates as soon as a second valid assignment is found.
UniquenessResult is_uniquely_valid(const std::vector<int>& indices,
                                   const DataMatrix& Xa, const DataMatrix& Y,
                                   const LinkOptions& options = {});

struct LinkResult {
    Assignment assignment;               // maximal uniquely valid subset
    bool budget_exhausted = false;
    std::vector<int> duplicates_dropped; // known-input indices collapsed up front
};

// Level-wise descent over subset sizes from a down to 1, subsets enumerated
// in ascending lexicographic order; the first uniquely valid subset found is
// the unique maximal one.  Duplicate known inputs are collapsed up front
// (a subset holding two copies of a record can never be uniquely valid).
LinkResult find_maximal_uniquely_valid(const DataMatrix& Xa, const DataMatrix& Y,
                                       const LinkOptions& options = {});

// ---------------------------------------------------------------------------
// Uniform estimator over the constraint set of orthogonal matrices
// ---------------------------------------------------------------------------

// Parameterizes the set of orthogonal M with M * Xq = Yq through the affine
// bijection L(P) = MTUk * Uk' + Vperp * P * Uperp', P in O(n-k).
struct ConstraintSetSampler {
    Matrix Uk;      // n x k, orthonormal basis of Col(Xq)
    Matrix Uperp;   // n x (n-k), basis of the complement of Col(Xq)
    Matrix Vperp;   // n x (n-k), basis of the complement of Col(Yq)
    Matrix MTUk;    // n x k, the image of Uk under the hidden rotation

    int n() const { return static_cast<int>(Uk.rows()); }
    int k() const { return static_cast<int>(Uk.cols()); }
    int codim() const { return n() - k(); }

    Matrix apply(const Matrix& P) const;        // L(P)
    Matrix invert(const Matrix& Mhat) const;    // L^{-1}(Mhat) = Vperp' Mhat Uperp
    Matrix sample(RandomStream& rng) const;     // L(P) with P Haar on O(n-k)
};

// Builds the sampler from linked pairs (column i of Yq is the image of
// column i of Xq).  MTUk = Yq * A where A solves Xq * A = Uk.  Fails when no
// orthogonal matrix can map Xq to Yq within tolerance (Gram mismatch).
ConstraintSetSampler constraint_set_sampler(const Matrix& Xq, const Matrix& Yq,
                                            double rank_tol = 1e-9,
                                            double feas_tol = 1e-6);

// ---------------------------------------------------------------------------
// Closed-form breach probability
// ---------------------------------------------------------------------------

// GR(m) = Gamma((m+2)/2) / Gamma((m+1)/2), by the recursion
// GR(1) = sqrt(pi)/2, GR(2) = 2/sqrt(pi), GR(m) = (m/(m-1)) GR(m-2).
double gamma_ratio(int m);

// SI(z, m) = integral of sin^(m-1)(theta) from 0 to arccos(z), 0 <= z <= 1,
// by the recursion SI(z,1) = arccos z, SI(z,2) = 1 - z,
// SI(z,m) = ((m-2)/(m-1)) SI(z,m-2) - z (1-z^2)^((m-2)/2) / (m-1).
double sine_integral(double z, int m);

struct BreachProbabilityInputs {
    double y_norm = 0.0;        // ||y_j||
    double vperp_y_norm = 0.0;  // ||Vperp' y_j||
    double eps = 0.0;
    int codim = 0;              // n - k
};

// Probability that a uniformly chosen constraint-set estimator produces an
// eps-breach of the record behind y_j: the fraction of the radius-w sphere
// in R^codim lying within distance ||y_j|| * eps of a fixed surface point,
// with w = ||Vperp' y_j||.
double breach_probability(const BreachProbabilityInputs& inputs);

// ---------------------------------------------------------------------------
// Full attack
// ---------------------------------------------------------------------------

struct KnownInputOptions {
    LinkOptions link;
    double rank_tol = 1e-9;
};

struct KnownInputReport {
    LinkResult link;
    int k = 0;            // rank of the linked inputs (difference rank in the
                          // general case)
    int codim = 0;        // n - k
    int anchor = -1;      // known-input index used for differencing; -1 when
                          // the perturbation was treated as orthogonal
    // (column j, breach probability) for every unlinked column, ascending j.
    std::vector<std::pair<int, double>> rho_table;
    int chosen_j = -1;    // argmax of the table, smallest j on ties
    double rho_max = 0.0;
    Vector estimate;      // estimate of the record perturbed into column chosen_j
    Matrix estimator;     // the sampled orthogonal matrix
    double seconds_link = 0.0;  // wall clock spent linking
    double seconds_rho = 0.0;   // wall clock spent on the probability table
};

// Orthogonal-perturbation attack: link, build the sampler, rank every
// unlinked column by its closed-form breach probability, then sample one
// estimator uniformly from the constraint set and estimate the best target.
KnownInputReport known_input_attack(const DataMatrix& Xa, const DataMatrix& Y,
                                    double eps, RandomStream& rng,
                                    const KnownInputOptions& options = {});

// General-perturbation attack: link on distances only, then for every choice
// of anchor among the linked records run the orthogonal attack on difference
// tuples and keep the anchor/column pair with the highest breach
// probability.  Breach probabilities refer to the difference geometry.
KnownInputReport known_input_attack_general(const DataMatrix& Xa, const DataMatrix& Y,
                                            double eps, RandomStream& rng,
                                            const KnownInputOptions& options = {});

} // namespace dppriv::kia
