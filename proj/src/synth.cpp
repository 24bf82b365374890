#include "synth.hpp"

#include <cmath>
#include <numeric>

#include "error.hpp"
#include "linalg.hpp"

namespace dppriv {

Matrix psd_sqrt(const Matrix& covariance) {
    EigenModel model = eigen_sorted(covariance);
    Vector roots(model.eigenvalues.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        if (model.eigenvalues(i) < -1e-8 * std::max(1.0, std::abs(model.eigenvalues(0))))
            fail(errc::invalid_argument, "psd_sqrt: covariance has a negative eigenvalue");
        roots(i) = std::sqrt(std::max(model.eigenvalues(i), 0.0));
    }
    return model.vectors * roots.asDiagonal() * model.vectors.transpose();
}

DataMatrix sample_gaussian(const GaussianSpec& spec, int records, RandomStream& rng) {
    if (records < 1) fail(errc::invalid_argument, "sample_gaussian: records must be >= 1");
    if (spec.covariance.rows() != spec.mean.size() || spec.covariance.cols() != spec.mean.size())
        fail(errc::dimension_mismatch, "sample_gaussian: mean and covariance disagree");
    const Eigen::Index n = spec.mean.size();
    Matrix root = psd_sqrt(spec.covariance);
    DataMatrix out(n, records);
    for (int j = 0; j < records; ++j) {
        Vector z(n);
        for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
        out.col(j) = spec.mean + root * z;
    }
    return out;
}

DataMatrix sample_mixture(const GaussianMixtureSpec& spec, int records, RandomStream& rng) {
    if (spec.components.empty())
        fail(errc::invalid_argument, "sample_mixture: no components");
    if (spec.weights.size() != spec.components.size())
        fail(errc::invalid_argument, "sample_mixture: weights and components disagree");
    double total = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
    if (!(total > 0.0))
        fail(errc::invalid_argument, "sample_mixture: weights must sum to a positive value");
    const Eigen::Index n = spec.components.front().mean.size();

    std::vector<Matrix> roots;
    roots.reserve(spec.components.size());
    for (const auto& component : spec.components) {
        if (component.mean.size() != n)
            fail(errc::dimension_mismatch, "sample_mixture: components differ in dimension");
        if (component.covariance.rows() != n || component.covariance.cols() != n)
            fail(errc::dimension_mismatch, "sample_mixture: covariance dimension mismatch");
        roots.push_back(psd_sqrt(component.covariance));
    }

    DataMatrix out(n, records);
    for (int j = 0; j < records; ++j) {
        double pick = rng.uniform() * total;
        std::size_t component = 0;
        double seen = 0.0;
        for (std::size_t t = 0; t < spec.weights.size(); ++t) {
            seen += spec.weights[t];
            if (pick < seen) { component = t; break; }
            component = t;
        }
        Vector z(n);
        for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
        out.col(j) = spec.components[component].mean + roots[component] * z;
    }
    return out;
}

} // namespace dppriv
