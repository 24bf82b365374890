#pragma once

#include "types.hpp"

namespace dppriv {

// Outcome of testing an estimate against a true record under the three
// breach definitions at a common threshold epsilon.
struct BreachOutcome {
    double relative_euclid = 0.0;  // ||xhat - x|| / ||x||
    double min_nad = 0.0;          // min over entries of NAD(x_i, xhat_i)
    double cos_gap = 0.0;          // 1 - cos(x, xhat)
    bool eps_breach = false;
    bool med_breach = false;
    bool cos_breach = false;
};

// NAD(a, ahat): |ahat| when a == 0, otherwise |a - ahat| / |a|.
double normalized_absolute_difference(double a, double ahat);

// Relative Euclidean error; the true record must be non-zero.
double relative_euclid_error(const Vector& x, const Vector& xhat);

// Minimum entry-wise NAD.
double minimum_nad(const Vector& x, const Vector& xhat);

// Cosine gap 1 - x'xhat / (||x|| ||xhat||); both vectors must be non-zero.
double cosine_gap(const Vector& x, const Vector& xhat);

// An estimate breaches when its error is at most epsilon.
std::pair<bool, double> eps_breach(const Vector& x, const Vector& xhat, double eps);
std::pair<bool, double> med_breach(const Vector& x, const Vector& xhat, double eps);
std::pair<bool, double> cos_breach(const Vector& x, const Vector& xhat, double eps);

BreachOutcome evaluate_breach(const Vector& x, const Vector& xhat, double eps);

} // namespace dppriv
