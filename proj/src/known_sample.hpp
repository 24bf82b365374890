#pragma once

#include <optional>
#include <vector>

#include "linalg.hpp"
#include "random.hpp"
#include "types.hpp"

namespace dppriv::ksa {

struct KnownSampleOptions {
    int permutations = 199;   // label permutations per p-value
    int pool_cap = 2000;      // pooled-sample cap; larger pools are subsampled
    int sign_search_cap = 20; // refuse exhaustive search above this dimension
    double distinct_tol = 1e-6;
};

// Energy statistic between two column-sample matrices, scaled by
// p*r/(p+r).  Pair means follow the V-statistic convention (all ordered
// pairs, zero diagonal included).
double energy_statistic(const Matrix& A, const Matrix& B);

// Permutation p-value for the null hypothesis that the columns of A and B
// arose from the same distribution:
//   p = (1 + #{permuted statistics >= observed}) / (permutations + 1).
// When the pooled column count exceeds pool_cap, the test runs on a seeded
// subsample (at most pool_cap/2 columns per side, topped up from the other).
double energy_two_sample_p(const Matrix& A, const Matrix& B, int permutations,
                           RandomStream& rng, int pool_cap = 2000);

// Fixed-sample permutation tester: the B side and its internal distances are
// cached so that many A candidates can be scored against the same B.
class EnergyPermutationTester {
public:
    EnergyPermutationTester(Matrix B, int permutations);

    double p_value(const Matrix& A, RandomStream& rng) const;

private:
    Matrix B_;
    Matrix dist_bb_;
    int permutations_;
};

struct SignSearchResult {
    Vector signs;                 // entries +1/-1; diagonal of the winner
    double p_value = 0.0;
    std::vector<double> p_table;  // all 2^n p-values, lexicographic order
};

// Exhaustive search over the 2^n sign matrices D, maximizing the two-sample
// p-value of (W D Z' S, Y).  Candidates are enumerated in lexicographic
// order with +1 before -1, and the first maximum wins, so ties resolve to
// the lexicographically smallest sign vector.  One pooled subsample is drawn
// up front and shared by all candidates; each candidate permutes labels on
// its own derived stream.
SignSearchResult sign_search(const Matrix& W, const Matrix& Z,
                             const Matrix& S, const Matrix& Y,
                             const KnownSampleOptions& options, RandomStream& rng);

struct PcaDiagnostics {
    double sample_min_relative_gap = 0.0;  // eigen gaps of cov(S)
    double data_min_relative_gap = 0.0;    // eigen gaps of cov(Y)
    bool sample_degenerate = false;
    bool data_degenerate = false;
    std::optional<double> sample_eigen_ratio;  // min eigen-ratio when defined
    std::optional<double> data_eigen_ratio;
};

struct PcaAttackResult {
    Matrix estimator;        // estimated rotation, W D Z'
    Vector signs;            // winning sign vector
    double p_value = 0.0;
    std::vector<double> p_table;
    Matrix estimates;        // estimate of every record, column for column of Y
    int chosen_j = 0;        // the randomly chosen headline record
    Vector mean_correction;  // zero for the orthogonal attack
    PcaDiagnostics diagnostics;
    double seconds_sign_search = 0.0;  // wall clock spent in the sign search
};

// PCA attack assuming a purely orthogonal perturbation: eigendecompose both
// sample covariances, resolve the per-eigenvector mirror ambiguity by sign
// search, then undo the rotation.  Degenerate eigen-gaps produce diagnostics,
// not errors.
PcaAttackResult pca_attack_orthogonal(const DataMatrix& S, const DataMatrix& Y,
                                      const KnownSampleOptions& options,
                                      RandomStream& rng);

// General perturbation: run the orthogonal attack on disjoint-pair
// difference tuples, then correct each estimate by the sample means of the
// two sides.  Odd column counts lose one random column.
PcaAttackResult pca_attack_general(const DataMatrix& S, const DataMatrix& Y,
                                   const KnownSampleOptions& options,
                                   RandomStream& rng);

// Smallest ratio lambda_i / lambda_j over descending eigenvalue pairs i < j;
// 1 signals a repeated eigenvalue.  All eigenvalues must be positive.
double min_eigen_ratio(const Matrix& covariance);

// Symmetric KL divergence between Gaussians sharing an invertible
// covariance: (mu_g - mu_h)' Sigma^{-1} (mu_g - mu_h).
double sym_kl_gaussian(const Vector& mu_g, const Vector& mu_h, const Matrix& sigma);

// Distinguishability of the distribution from its nearest sign-flipped
// version: alpha^2 min over nonempty flip sets of sum 4 (z_i' mu)^2 /
// lambda_i, which for a positive-definite covariance is attained by a
// single flip.  Requires distinct, positive eigenvalues.
double invariance_gaussian(const Vector& mu, double alpha, const Matrix& covariance);

} // namespace dppriv::ksa
