#pragma once

#include <vector>

#include "random.hpp"
#include "types.hpp"

namespace dppriv {

struct GaussianSpec {
    Vector mean;
    Matrix covariance;
};

struct GaussianMixtureSpec {
    std::vector<double> weights;         // nonnegative, normalized internally
    std::vector<GaussianSpec> components;
};

// Symmetric positive-semidefinite square root (eigenvalue based, so mildly
// indefinite inputs from roundoff are clamped at zero).
Matrix psd_sqrt(const Matrix& covariance);

DataMatrix sample_gaussian(const GaussianSpec& spec, int records, RandomStream& rng);
DataMatrix sample_mixture(const GaussianMixtureSpec& spec, int records, RandomStream& rng);

} // namespace dppriv
