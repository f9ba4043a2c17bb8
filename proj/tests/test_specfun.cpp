#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "agrs/random.hpp"
#include "agrs/specfun.hpp"

using namespace agrs;

namespace {

// Bisection oracle: invert std_normal_cdf without using the quantile code.
double quantile_by_bisection(double p) {
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (std_normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Box-Muller normals, independent of the quantile path under test.
double box_muller(SharedRandomness& rng) {
    double u1 = rng.uniform();
    double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

TEST_CASE("std_normal_cdf basic values") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(std_normal_cdf(-std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(std::fabs(std_normal_cdf(1.959963985) - 0.975) <= 1e-9);
    CHECK_THROWS_AS(std_normal_cdf(std::nan("")), std::invalid_argument);
}

TEST_CASE("std_normal_cdf is monotone, symmetric, and accurate at the seam") {
    double prev = 0.0;
    for (double x = -9.0; x <= 9.0; x += 0.004) {
        double v = std_normal_cdf(x);
        CHECK(v >= prev);
        CHECK(std::fabs(v + std_normal_cdf(-x) - 1.0) < 1e-14);
        prev = v;
    }
    // Series/continued-fraction seam at |x| = 1: each side is within an ulp
    // of the true value, so allow an ulp-scale step between them.
    double below = std_normal_cdf(std::nextafter(1.0, 0.0));
    double at = std_normal_cdf(1.0);
    double above = std_normal_cdf(std::nextafter(1.0, 2.0));
    CHECK(below <= at + 5e-16);
    CHECK(at <= above + 5e-16);
    CHECK(std::fabs(at - 0.8413447460685429) < 1e-13);
}

TEST_CASE("std_normal_quantile matches bisection oracle") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std::fabs(std_normal_quantile(0.975) - 1.959963985) <= 1e-7);
    for (double p : {1e-8, 1e-5, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-5, 1.0 - 1e-8}) {
        double oracle = quantile_by_bisection(p);
        CHECK(std::fabs(std_normal_quantile(p) - oracle) < 1e-8 * (1.0 + std::fabs(oracle)));
    }
    CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(-0.5), std::domain_error);
}

TEST_CASE("quantile/cdf roundtrip") {
    std::vector<double> grid = {1e-8, 1e-6, 1e-4, 0.01, 0.1, 0.25, 0.5,
                                0.75, 0.9,  0.99, 1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8};
    double prev_x = -std::numeric_limits<double>::infinity();
    for (double p : grid) {
        double x = std_normal_quantile(p);
        CHECK(x > prev_x);
        CHECK(std::fabs(std_normal_cdf(x) - p) <= 1e-10);
        prev_x = x;
    }
}

TEST_CASE("regularized lower gamma against closed forms") {
    // P(1, x) = 1 - e^{-x}
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        CHECK(std::fabs(regularized_lower_gamma(1.0, x) - (1.0 - std::exp(-x))) < 1e-14);
    }
    // P(1/2, x) = erf(sqrt(x)) = 2 Phi(sqrt(2x)) - 1
    for (double x : {0.05, 0.3, 1.0, 3.0, 10.0}) {
        double expected = 2.0 * std_normal_cdf(std::sqrt(2.0 * x)) - 1.0;
        CHECK(std::fabs(regularized_lower_gamma(0.5, x) - expected) < 1e-13);
    }
    CHECK(regularized_lower_gamma(3.0, 0.0) == 0.0);
}

TEST_CASE("noncentral chi-square: central reductions") {
    // chi^2(2) CDF is 1 - e^{-x/2}: at x = 2 ln 2 the CDF is 1/2.
    CHECK(std::fabs(noncentral_chisq_cdf(2, 0.0, 2.0 * std::log(2.0)) - 0.5) < 1e-13);
    for (int d : {1, 2, 3, 4, 7, 12}) {
        for (double x : {0.2, 1.0, 3.5, 9.0, 25.0}) {
            double central = regularized_lower_gamma(0.5 * d, 0.5 * x);
            CHECK(std::fabs(noncentral_chisq_cdf(d, 0.0, x) - central) <= 1e-12);
        }
    }
}

TEST_CASE("noncentral chi-square: d=1 normal-CDF identity") {
    // P[chi^2(1, lambda) <= x] = Phi(sqrt(x) - sqrt(lambda)) - Phi(-sqrt(x) - sqrt(lambda))
    for (double lambda : {0.25, 1.0, 4.0, 9.0, 30.0}) {
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 12.0, 40.0}) {
            double sx = std::sqrt(x), sl = std::sqrt(lambda);
            double expected = std_normal_cdf(sx - sl) - std_normal_cdf(-sx - sl);
            CHECK(std::fabs(noncentral_chisq_cdf(1, lambda, x) - expected) <= 1e-10);
        }
    }
    CHECK(std::fabs(noncentral_chisq_cdf(1, 1.0, 1.0) -
                    (std_normal_cdf(0.0) - std_normal_cdf(-2.0))) <= 1e-10);
}

TEST_CASE("noncentral chi-square: monotone with saturating tails") {
    for (int d : {1, 4}) {
        for (double lambda : {0.0, 0.5, 9.0, 80.0}) {
            double prev = 0.0;
            double top = lambda + d + 40.0 * std::sqrt(2.0 * d + 4.0 * lambda);
            for (int i = 1; i <= 60; ++i) {
                double x = top * i / 60.0;
                double v = noncentral_chisq_cdf(d, lambda, x);
                CHECK(v >= prev - 1e-15);
                prev = v;
            }
            CHECK(noncentral_chisq_cdf(d, lambda, 1e-12) < 1e-5);
            CHECK(noncentral_chisq_cdf(d, lambda, top) >= 1.0 - 1e-8);
        }
    }
}

TEST_CASE("noncentral chi-square: Monte Carlo check") {
    struct Case {
        int d;
        double lambda;
    };
    for (Case c : {Case{1, 0.5}, Case{4, 9.0}}) {
        const int n = 100000;
        SharedRandomness rng(SharedRandomness::substream_seed(0xC41501, c.d));
        double shift = std::sqrt(c.lambda / c.d);
        std::vector<double> draws(n);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < c.d; ++j) {
                double z = box_muller(rng) + shift;
                s += z * z;
            }
            draws[i] = s;
        }
        double top = c.lambda + c.d + 4.0 * std::sqrt(2.0 * c.d + 4.0 * c.lambda);
        for (int i = 1; i <= 10; ++i) {
            double x = top * i / 10.0;
            double p = noncentral_chisq_cdf(c.d, c.lambda, x);
            int count = 0;
            for (double v : draws) count += v <= x;
            double emp = double(count) / n;
            double se = std::sqrt(p * (1.0 - p) / n) + 1e-12;
            CHECK(std::fabs(emp - p) <= 3.0 * se);
        }
    }
}

TEST_CASE("noncentral chi-square: argument validation") {
    CHECK_THROWS_AS(noncentral_chisq_cdf(0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(noncentral_chisq_cdf(1, -1.0, 1.0), std::invalid_argument);
    CHECK(noncentral_chisq_cdf(3, 2.0, 0.0) == 0.0);
}
