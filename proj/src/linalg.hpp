#pragma once

#include "random.hpp"
#include "types.hpp"

namespace dppriv {

// Orthonormal basis of a column space together with a basis of its
// orthogonal complement.  basis is n x k, complement is n x (n-k), and
// [basis | complement] is square orthogonal.
struct OrthonormalBasisPair {
    int k = 0;
    Matrix basis;
    Matrix complement;
};

// Basis pair for Col(M).  k is the numerical rank of M: the number of
// singular values above rank_tol times the largest singular value.
OrthonormalBasisPair orthonormal_basis(const Matrix& M, double rank_tol = 1e-9);

// Haar-uniform draw from the orthogonal group O(dim).  QR of a standard
// normal matrix with the sign of each R diagonal entry folded into the
// corresponding Q column, which makes the factorization unique and the
// distribution exactly Haar.  dim == 0 yields the empty 0x0 matrix.
Matrix haar_orthogonal(int dim, RandomStream& rng);

// Unbiased sample covariance over records (columns), divisor m-1.
Matrix sample_covariance(const DataMatrix& D);

// Eigendecomposition of a symmetric matrix with descending eigenvalues and
// sign-canonicalized eigenvectors: each column is flipped, if necessary, so
// that its first entry of magnitude above 1e-12 is positive (the
// lexicographically larger of the two unit eigenvectors).
struct EigenModel {
    Vector eigenvalues;       // descending
    Matrix vectors;           // column i pairs with eigenvalues[i]
    double min_relative_gap = 0.0;  // min adjacent gap / max |eigenvalue|
    bool degenerate = false;        // min_relative_gap below distinct_tol
};

EigenModel eigen_sorted(const Matrix& S, double distinct_tol = 1e-6);

} // namespace dppriv
