#include <doctest.h>

#include <cmath>

#include "breach.hpp"
#include "error.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace dppriv;

TEST_SUITE_BEGIN("breach-metrics");

TEST_CASE("eps_breach: hand examples") {
    Vector x(2), exact(2), close(2), perp(2);
    x << 1, 0;
    exact = x;
    close << 1.1, 0;
    perp << 0, 1;

    auto [hit0, err0] = eps_breach(x, exact, 0.0);
    CHECK(hit0);
    CHECK(err0 == 0.0);

    auto [hit1, err1] = eps_breach(x, close, 0.15);
    CHECK(hit1);
    CHECK(err1 == doctest::Approx(0.1));

    auto [hit2, err2] = eps_breach(x, perp, 0.15);
    CHECK_FALSE(hit2);
    CHECK(err2 == doctest::Approx(std::sqrt(2.0)));

    Vector zero = Vector::Zero(2);
    CHECK_THROWS_AS((void)eps_breach(zero, close, 0.1), error);
}

TEST_CASE("med_breach: hand examples") {
    Vector x(2), xhat(2);
    x << 2, 0;
    xhat << 3, 5;
    auto [hit, nad] = med_breach(x, xhat, 0.6);
    CHECK(nad == doctest::Approx(0.5));
    CHECK(hit);

    auto [hit_exact, nad_exact] = med_breach(x, x, 0.0);
    CHECK(nad_exact == 0.0);
    CHECK(hit_exact);
}

TEST_CASE("med_breach: bounded by the relative Euclidean error") {
    RandomStream rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng.bounded(8));
        Vector x(n), xhat(n);
        for (int i = 0; i < n; ++i) {
            // Mix in exact zeros to exercise the NAD zero branch.
            x(i) = rng.bounded(5) == 0 ? 0.0 : rng.normal();
            xhat(i) = rng.normal();
        }
        if (x.norm() == 0.0) x(0) = 1.0;
        CHECK(minimum_nad(x, xhat) <= relative_euclid_error(x, xhat) + 1e-12);
    }
}

TEST_CASE("NAD is scale covariant in the estimate") {
    for (double a : {0.5, -2.0, 7.0}) {
        for (double delta : {0.01, -0.3, 1.5}) {
            CHECK(normalized_absolute_difference(a, a * (1.0 + delta)) ==
                  doctest::Approx(std::abs(delta)));
        }
    }
}

TEST_CASE("cos_breach: hand examples") {
    Vector x(3);
    x << 1, 2, -1;
    auto [hit_scaled, gap_scaled] = cos_breach(x, Vector(3 * x), 0.0);
    CHECK(gap_scaled <= 1e-15);
    CHECK(hit_scaled);

    Vector perp(3);
    perp << 2, -1, 0;  // orthogonal to x
    auto [hit_perp, gap_perp] = cos_breach(x, perp, 0.5);
    CHECK(gap_perp == doctest::Approx(1.0));
    CHECK_FALSE(hit_perp);

    CHECK_THROWS_AS((void)cos_breach(x, Vector(Vector::Zero(3)), 0.1), error);
}

TEST_CASE("equal-norm pairs tie the cosine gap to the squared relative error") {
    RandomStream rng(10);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 2 + static_cast<int>(rng.bounded(7));
        Vector x(n);
        for (int i = 0; i < n; ++i) x(i) = rng.normal();
        if (x.norm() < 1e-6) x(0) += 1.0;
        Vector direction(n);
        for (int i = 0; i < n; ++i) direction(i) = rng.normal();
        Vector xhat = direction * (x.norm() / direction.norm());

        double rel = relative_euclid_error(x, xhat);
        double gap = cosine_gap(x, xhat);
        CHECK(std::abs(gap - rel * rel / 2.0) <= 1e-12);

        // eps-breach at sqrt(2 eps) iff cos-breach at eps.
        double eps = 0.05 + 0.4 * rng.uniform();
        bool eps_hit = eps_breach(x, xhat, std::sqrt(2.0 * eps)).first;
        bool cos_hit = cos_breach(x, xhat, eps).first;
        CHECK(eps_hit == cos_hit);
    }
}

TEST_CASE("evaluate_breach: flags line up with the individual metrics") {
    RandomStream rng(11);
    Vector x(4), xhat(4);
    for (int i = 0; i < 4; ++i) {
        x(i) = rng.normal();
        xhat(i) = x(i) + 0.05 * rng.normal();
    }
    double eps = 0.2;
    BreachOutcome outcome = evaluate_breach(x, xhat, eps);
    CHECK(outcome.eps_breach == eps_breach(x, xhat, eps).first);
    CHECK(outcome.med_breach == med_breach(x, xhat, eps).first);
    CHECK(outcome.cos_breach == cos_breach(x, xhat, eps).first);
    CHECK(outcome.min_nad <= outcome.relative_euclid + 1e-12);
}

TEST_SUITE_END();
