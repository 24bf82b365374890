// Test-only oracles, independent of the implementation paths they check.

#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "linalg.hpp"
#include "random.hpp"
#include "types.hpp"

namespace oracles {

using dppriv::Matrix;
using dppriv::RandomStream;
using dppriv::Vector;

// Adaptive Simpson quadrature.
inline double simpson_slice(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_slice(f, a, m, fa, flm, fm);
    double right = simpson_slice(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson_slice(f, a, b, fa, fm, fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Gamma-function ratio through log-gamma.
inline double gamma_ratio_lgamma(int m) {
    return std::exp(std::lgamma((m + 2) / 2.0) - std::lgamma((m + 1) / 2.0));
}

// Numerical rank by Gaussian elimination with partial pivoting.
inline int row_reduction_rank(Matrix M, double tol = 1e-9) {
    const Eigen::Index rows = M.rows(), cols = M.cols();
    double scale = M.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0;
    int rank = 0;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
        Eigen::Index pivot = row;
        for (Eigen::Index r = row + 1; r < rows; ++r)
            if (std::abs(M(r, col)) > std::abs(M(pivot, col))) pivot = r;
        if (std::abs(M(pivot, col)) <= tol * scale) continue;
        M.row(pivot).swap(M.row(row));
        for (Eigen::Index r = row + 1; r < rows; ++r)
            M.row(r) -= (M(r, col) / M(row, col)) * M.row(row);
        ++row;
        ++rank;
    }
    return rank;
}

// Uniform point on the sphere of the given radius in R^dim (normalized
// Gaussian), independent of the library's Haar sampler.
inline Vector uniform_sphere_point(int dim, double radius, RandomStream& rng) {
    Vector v(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) v(i) = rng.normal();
        norm = v.norm();
    } while (norm == 0.0);
    return v * (radius / norm);
}

// Monte-Carlo breach probability: the fraction of uniform points u on the
// sphere of radius ||z|| in R^dim with ||u - z|| <= c.
inline double monte_carlo_cap_fraction(const Vector& z, double c, int draws,
                                       RandomStream& rng) {
    const int dim = static_cast<int>(z.size());
    if (dim == 0) return 1.0;
    int hits = 0;
    for (int t = 0; t < draws; ++t) {
        Vector u = uniform_sphere_point(dim, z.norm(), rng);
        if ((u - z).norm() <= c) ++hits;
    }
    return static_cast<double>(hits) / draws;
}

// Exhaustive enumeration of valid assignments from the index set I into the
// columns of Y (definition-level, no pruning).
inline bool assignment_valid(const Matrix& Xa, const Matrix& Y, const std::vector<int>& domain,
                             const std::vector<int>& image, double tol, bool lengths) {
    auto close = [tol](double a, double b) { return std::abs(a - b) <= tol * std::max(a, b); };
    for (std::size_t t = 0; t < domain.size(); ++t) {
        if (lengths && !close(Xa.col(domain[t]).norm(), Y.col(image[t]).norm())) return false;
        for (std::size_t u = t + 1; u < domain.size(); ++u) {
            double dx = (Xa.col(domain[t]) - Xa.col(domain[u])).norm();
            double dy = (Y.col(image[t]) - Y.col(image[u])).norm();
            if (!close(dx, dy)) return false;
        }
    }
    return true;
}

inline void enumerate_valid_assignments(const Matrix& Xa, const Matrix& Y,
                                        const std::vector<int>& domain, double tol, bool lengths,
                                        std::vector<std::vector<int>>& found) {
    const int m = static_cast<int>(Y.cols());
    std::vector<int> image(domain.size(), -1);
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t level) {
        if (level == domain.size()) {
            if (assignment_valid(Xa, Y, domain, image, tol, lengths)) found.push_back(image);
            return;
        }
        for (int j = 0; j < m; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            used[static_cast<std::size_t>(j)] = 1;
            image[level] = j;
            rec(level + 1);
            used[static_cast<std::size_t>(j)] = 0;
        }
    };
    rec(0);
}

// Symmetric KL between Gaussians via the full closed form (covariances may
// differ), summing both directions.
inline double symmetric_kl_full(const Vector& mu_g, const Vector& mu_h,
                                const Matrix& sigma_g, const Matrix& sigma_h) {
    auto kl = [](const Vector& m0, const Matrix& s0, const Vector& m1, const Matrix& s1) {
        Eigen::FullPivLU<Matrix> lu(s1);
        Matrix s1_inv = lu.inverse();
        double n = static_cast<double>(m0.size());
        Vector d = m1 - m0;
        double trace = (s1_inv * s0).trace();
        double quad = d.dot(s1_inv * d);
        double logdet = std::log(s1.determinant()) - std::log(s0.determinant());
        return 0.5 * (trace + quad - n + logdet);
    };
    return kl(mu_g, sigma_g, mu_h, sigma_h) + kl(mu_h, sigma_h, mu_g, sigma_g);
}

// Random symmetric positive-definite matrix with the given spectrum.
inline Matrix spd_with_spectrum(const Vector& eigenvalues, RandomStream& rng) {
    Matrix Q = dppriv::haar_orthogonal(static_cast<int>(eigenvalues.size()), rng);
    return Q * eigenvalues.asDiagonal() * Q.transpose();
}

} // namespace oracles
