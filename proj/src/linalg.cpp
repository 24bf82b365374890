#include "linalg.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace dppriv {

OrthonormalBasisPair orthonormal_basis(const Matrix& M, double rank_tol) {
    if (M.rows() < 1 || M.cols() < 1)
        fail(errc::invalid_argument, "orthonormal_basis: matrix must be non-empty");
    if (!M.allFinite())
        fail(errc::invalid_argument, "orthonormal_basis: non-finite entries");
    if (rank_tol < 0.0)
        fail(errc::invalid_argument, "orthonormal_basis: rank_tol must be nonnegative");

    const Eigen::Index n = M.rows();
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeFullU);
    const Vector& sv = svd.singularValues();
    const double threshold = sv.size() > 0 ? rank_tol * sv(0) : 0.0;

    int k = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold && sv(i) > 0.0) ++k;

    OrthonormalBasisPair out;
    out.k = k;
    out.basis = svd.matrixU().leftCols(k);
    out.complement = svd.matrixU().rightCols(n - k);
    return out;
}

Matrix haar_orthogonal(int dim, RandomStream& rng) {
    if (dim < 0) fail(errc::invalid_argument, "haar_orthogonal: dim must be >= 0");
    if (dim == 0) return Matrix(0, 0);

    Matrix A(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            A(i, j) = rng.normal();

    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ();
    const Matrix& QR = qr.matrixQR();
    for (int i = 0; i < dim; ++i)
        if (QR(i, i) < 0.0) Q.col(i) = -Q.col(i);
    return Q;
}

Matrix sample_covariance(const DataMatrix& D) {
    const Eigen::Index m = D.cols();
    if (m < 2)
        fail(errc::insufficient_data, "sample_covariance: need at least 2 records");
    Matrix centered = D.colwise() - D.rowwise().mean();
    return (centered * centered.transpose()) / static_cast<double>(m - 1);
}

EigenModel eigen_sorted(const Matrix& S, double distinct_tol) {
    if (S.rows() != S.cols())
        fail(errc::invalid_argument, "eigen_sorted: matrix must be square");
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        fail(errc::invalid_argument, "eigen_sorted: matrix is not symmetric");

    const Eigen::Index n = S.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (S + S.transpose()));
    if (solver.info() != Eigen::Success)
        fail(errc::invalid_argument, "eigen_sorted: eigendecomposition failed");

    EigenModel out;
    out.eigenvalues = Vector(n);
    out.vectors = Matrix(n, n);
    // Eigen returns ascending order; reverse to descending.
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }

    // Sign canonicalization: first entry with |v_i| > 1e-12 made positive.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(out.vectors(i, j)) > 1e-12) {
                if (out.vectors(i, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
                break;
            }
        }
    }

    if (n < 2) {
        out.min_relative_gap = std::numeric_limits<double>::infinity();
        out.degenerate = false;
        return out;
    }
    const double mag = out.eigenvalues.cwiseAbs().maxCoeff();
    if (mag == 0.0) {
        out.min_relative_gap = 0.0;
    } else {
        double min_gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            double gap = (out.eigenvalues(i) - out.eigenvalues(i + 1)) / mag;
            min_gap = std::min(min_gap, std::max(gap, 0.0));
        }
        out.min_relative_gap = min_gap;
    }
    out.degenerate = out.min_relative_gap < distinct_tol;
    return out;
}

} // namespace dppriv
