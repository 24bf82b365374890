#include "breach.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace dppriv {

namespace {

void check_dims(const Vector& x, const Vector& xhat) {
    if (x.size() != xhat.size())
        fail(errc::dimension_mismatch, "breach metric: vectors differ in dimension");
    if (x.size() == 0)
        fail(errc::invalid_argument, "breach metric: empty vectors");
}

} // namespace

double normalized_absolute_difference(double a, double ahat) {
    if (a == 0.0) return std::abs(ahat);
    return std::abs(a - ahat) / std::abs(a);
}

double relative_euclid_error(const Vector& x, const Vector& xhat) {
    check_dims(x, xhat);
    double nx = x.norm();
    if (nx == 0.0)
        fail(errc::invalid_argument, "relative_euclid_error: true record is zero");
    return (xhat - x).norm() / nx;
}

double minimum_nad(const Vector& x, const Vector& xhat) {
    check_dims(x, xhat);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        best = std::min(best, normalized_absolute_difference(x(i), xhat(i)));
    return best;
}

double cosine_gap(const Vector& x, const Vector& xhat) {
    check_dims(x, xhat);
    double nx = x.norm();
    double nxhat = xhat.norm();
    if (nx == 0.0 || nxhat == 0.0)
        fail(errc::invalid_argument, "cosine_gap: zero-norm vector");
    return 1.0 - x.dot(xhat) / (nx * nxhat);
}

std::pair<bool, double> eps_breach(const Vector& x, const Vector& xhat, double eps) {
    double err = relative_euclid_error(x, xhat);
    return {err <= eps, err};
}

std::pair<bool, double> med_breach(const Vector& x, const Vector& xhat, double eps) {
    double nad = minimum_nad(x, xhat);
    return {nad <= eps, nad};
}

std::pair<bool, double> cos_breach(const Vector& x, const Vector& xhat, double eps) {
    double gap = cosine_gap(x, xhat);
    return {gap <= eps, gap};
}

BreachOutcome evaluate_breach(const Vector& x, const Vector& xhat, double eps) {
    BreachOutcome out;
    out.relative_euclid = relative_euclid_error(x, xhat);
    out.min_nad = minimum_nad(x, xhat);
    out.cos_gap = cosine_gap(x, xhat);
    out.eps_breach = out.relative_euclid <= eps;
    out.med_breach = out.min_nad <= eps;
    out.cos_breach = out.cos_gap <= eps;
    return out;
}

} // namespace dppriv
