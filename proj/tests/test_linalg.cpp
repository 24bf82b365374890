#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "linalg.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace dppriv;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("orthonormal_basis: full-rank identity") {
    auto pair = orthonormal_basis(Matrix::Identity(3, 3));
    CHECK(pair.k == 3);
    CHECK(pair.complement.cols() == 0);
    CHECK((pair.basis.transpose() * pair.basis - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("orthonormal_basis: rank one by construction") {
    Matrix M(3, 2);
    M << 1, 2, 0, 0, 0, 0;
    auto pair = orthonormal_basis(M);
    CHECK(pair.k == 1);
    CHECK(std::abs(std::abs(pair.basis(0, 0)) - 1.0) <= 1e-12);
    CHECK(pair.complement.cols() == 2);
    // Complement spans the yz-plane: first coordinate of both columns is 0.
    CHECK(pair.complement.row(0).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("orthonormal_basis: duplicated columns, rank vs row-reduction oracle") {
    RandomStream rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix M(6, 4);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 3; ++j) M(i, j) = rng.normal();
        M.col(3) = M.col(1);  // duplication drops the rank to 3
        auto pair = orthonormal_basis(M);
        CHECK(pair.k == oracles::row_reduction_rank(M));
        CHECK(pair.k == 3);
    }
}

TEST_CASE("orthonormal_basis: projector decomposition of the identity") {
    RandomStream rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + static_cast<int>(rng.bounded(6));
        int q = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n + 2)));
        Matrix M(n, q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < q; ++j) M(i, j) = rng.normal();
        auto pair = orthonormal_basis(M);
        Matrix projector = pair.basis * pair.basis.transpose() +
                           pair.complement * pair.complement.transpose();
        CHECK((projector - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("orthonormal_basis: non-finite entries rejected") {
    Matrix M = Matrix::Identity(2, 2);
    M(0, 0) = std::nan("");
    CHECK_THROWS_AS((void)orthonormal_basis(M), error);
}

TEST_CASE("haar_orthogonal: dimension zero is the empty matrix") {
    RandomStream rng(1);
    Matrix P = haar_orthogonal(0, rng);
    CHECK(P.rows() == 0);
    CHECK(P.cols() == 0);
}

TEST_CASE("haar_orthogonal: dimension one is a fair sign") {
    RandomStream rng(2);
    int plus = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
        Matrix P = haar_orthogonal(1, rng);
        double v = P(0, 0);
        CHECK(std::abs(std::abs(v) - 1.0) <= 1e-12);
        if (v > 0) ++plus;
    }
    double freq = static_cast<double>(plus) / draws;
    CHECK(freq == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("haar_orthogonal: orthogonality at dimension five") {
    RandomStream rng(3);
    Matrix P = haar_orthogonal(5, rng);
    CHECK((P.transpose() * P - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("haar_orthogonal: left invariance of trace moments") {
    // For fixed orthogonal Q, the trace distributions of P and QP agree.
    const int dim = 4;
    const int draws = 10000;
    RandomStream rng(5);
    Matrix Q = haar_orthogonal(dim, rng);

    double sum_p = 0, sum_p2 = 0, sum_qp = 0, sum_qp2 = 0;
    for (int t = 0; t < draws; ++t) {
        double tp = haar_orthogonal(dim, rng).trace();
        double tqp = (Q * haar_orthogonal(dim, rng)).trace();
        sum_p += tp;
        sum_p2 += tp * tp;
        sum_qp += tqp;
        sum_qp2 += tqp * tqp;
    }
    auto moments = [&](double sum, double sum2) {
        double mean = sum / draws;
        double var = sum2 / draws - mean * mean;
        return std::pair<double, double>(mean, var);
    };
    auto [mean_p, var_p] = moments(sum_p, sum_p2);
    auto [mean_qp, var_qp] = moments(sum_qp, sum_qp2);
    double se_mean = std::sqrt((var_p + var_qp) / draws);
    CHECK(std::abs(mean_p - mean_qp) <= 3.0 * se_mean);
    // Variance of the squared traces for the second-moment comparison.
    double se_m2 = std::sqrt(2.0 * (var_p * var_p + var_qp * var_qp) / draws +
                             4.0 * (mean_p * mean_p * var_p + mean_qp * mean_qp * var_qp) / draws);
    CHECK(std::abs((sum_p2 / draws) - (sum_qp2 / draws)) <= 3.0 * se_m2 + 1e-12);
}

TEST_CASE("sample_covariance: hand examples") {
    Matrix D(2, 2);
    D << 0, 2, 0, 0;
    Matrix cov = sample_covariance(D);
    CHECK(cov(0, 0) == doctest::Approx(2.0));
    CHECK(cov(0, 1) == doctest::Approx(0.0));
    CHECK(cov(1, 1) == doctest::Approx(0.0));

    Matrix equal = Matrix::Ones(3, 5) * 4.2;
    CHECK(sample_covariance(equal).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS((void)sample_covariance(Matrix::Ones(3, 1)), error);
}

TEST_CASE("sample_covariance: law of large numbers against the generator") {
    RandomStream rng(17);
    const int samples = 100000;
    Vector scales(3);
    scales << std::sqrt(0.1), std::sqrt(2.0), std::sqrt(40.0);
    DataMatrix D(3, samples);
    for (int j = 0; j < samples; ++j)
        for (int i = 0; i < 3; ++i) D(i, j) = scales(i) * rng.normal();
    Matrix cov = sample_covariance(D);
    Vector truth(3);
    truth << 0.1, 2.0, 40.0;
    for (int i = 0; i < 3; ++i) {
        CHECK(cov(i, i) == doctest::Approx(truth(i)).epsilon(0.05));
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(cov(i, j)) <= 0.05 * std::sqrt(truth(i) * truth(j)));
    }
}

TEST_CASE("eigen_sorted: diagonal example") {
    Vector d(3);
    d << 1, 2, 3;
    EigenModel model = eigen_sorted(Matrix(d.asDiagonal()));
    CHECK(model.eigenvalues(0) == doctest::Approx(3.0));
    CHECK(model.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(model.eigenvalues(2) == doctest::Approx(1.0));
    // Columns are signed unit coordinate vectors.
    Matrix expected(3, 3);
    expected << 0, 0, 1, 0, 1, 0, 1, 0, 0;
    CHECK((model.vectors - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_FALSE(model.degenerate);
}

TEST_CASE("eigen_sorted: identity is degenerate") {
    EigenModel model = eigen_sorted(Matrix::Identity(3, 3));
    CHECK(model.min_relative_gap == doctest::Approx(0.0));
    CHECK(model.degenerate);
    CHECK((model.vectors.transpose() * model.vectors - Matrix::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
}

TEST_CASE("eigen_sorted: construct-then-decompose recovers spectrum and vectors") {
    RandomStream rng(23);
    Vector lambda(3);
    lambda << 40, 2, 0.1;
    for (int trial = 0; trial < 25; ++trial) {
        Matrix Z = haar_orthogonal(3, rng);
        // Canonicalize the construction so vectors compare exactly.
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i)
                if (std::abs(Z(i, j)) > 1e-12) {
                    if (Z(i, j) < 0) Z.col(j) = -Z.col(j);
                    break;
                }
        Matrix sigma = Z * lambda.asDiagonal() * Z.transpose();
        EigenModel model = eigen_sorted(sigma);
        CHECK((model.eigenvalues - lambda).cwiseAbs().maxCoeff() <= 1e-8 * 40);
        CHECK((model.vectors - Z).cwiseAbs().maxCoeff() <= 1e-7);
    }
}

TEST_CASE("eigen_sorted: residual invariant") {
    RandomStream rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng.bounded(6));
        Matrix A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
        Matrix sigma = A + A.transpose();
        EigenModel model = eigen_sorted(sigma);
        double scale = sigma.cwiseAbs().maxCoeff();
        for (int i = 0; i < n; ++i) {
            Vector residual = sigma * model.vectors.col(i) -
                              model.eigenvalues(i) * model.vectors.col(i);
            CHECK(residual.cwiseAbs().maxCoeff() <= 1e-8 * scale);
            CHECK(model.vectors.col(i).norm() == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("eigen_sorted: rejects asymmetric input") {
    Matrix M(2, 2);
    M << 1, 2, 0, 1;
    CHECK_THROWS_AS((void)eigen_sorted(M), error);
}

TEST_SUITE_END();
