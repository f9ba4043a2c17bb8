#include "agrs/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace agrs {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrtPi = 0.5641895835477563;
constexpr double kSqrt2Pi = 2.5066282746310002;

// erf(z) for 0 <= z <= 1/sqrt(2), via the all-positive-terms series
// erf(z) = (2z/sqrt(pi)) e^{-z^2} sum_n (2z^2)^n / (2n+1)!!.
double erf_series(double z) {
    double z2 = 2.0 * z * z;
    double term = 1.0;
    double sum = 1.0;
    double denom = 1.0;
    for (int n = 1; n < 64; ++n) {
        denom += 2.0;
        term *= z2 / denom;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return 2.0 * kInvSqrtPi * z * std::exp(-z * z) * sum;
}

// erfc(z) for z >= 1/sqrt(2), via the Laplace continued fraction
// sqrt(pi) e^{z^2} erfc(z) = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
// evaluated with the modified Lentz algorithm.
double erfc_cf(double z) {
    const double tiny = 1e-300;
    double f = z != 0.0 ? z : tiny;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < 400; ++n) {
        double a = 0.5 * n;
        d = z + a * d;
        if (d == 0.0) d = tiny;
        c = z + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return kInvSqrtPi * std::exp(-z * z) / f;
}

}  // namespace

double std_normal_cdf(double x) {
    if (std::isnan(x)) throw std::invalid_argument("std_normal_cdf: invalid argument");
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    double ax = std::fabs(x);
    if (ax <= 1.0) {
        double e = erf_series(ax / kSqrt2);
        return x >= 0.0 ? 0.5 + 0.5 * e : 0.5 - 0.5 * e;
    }
    double tail = 0.5 * erfc_cf(ax / kSqrt2);
    return x > 0.0 ? 1.0 - tail : tail;
}

double std_normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("std_normal_quantile: domain error, p must be in (0, 1)");
    }

    // Acklam's rational approximation (|rel err| < 1.2e-9), then one
    // Newton step on the CDF.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    double err = std_normal_cdf(x) - p;
    x -= err * kSqrt2Pi * std::exp(0.5 * x * x);
    return x;
}

namespace {

// Lower-gamma series, valid (fast) for x < a + 1.
double gamma_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("regularized_lower_gamma: convergence failure (series)");
}

// Continued fraction for the upper tail Q(a, x), valid for x >= a + 1.
double gamma_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int n = 1; n < 1000; ++n) {
        double an = -n * (n - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) {
            return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("regularized_lower_gamma: convergence failure (cf)");
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || std::isnan(a) || std::isnan(x)) {
        throw std::invalid_argument("regularized_lower_gamma: invalid argument");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_cf(a, x);
}

double noncentral_chisq_cdf(int dof, double lambda, double x) {
    if (dof < 1 || lambda < 0.0 || std::isnan(lambda) || std::isnan(x)) {
        throw std::invalid_argument("noncentral_chisq_cdf: invalid argument");
    }
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;

    double half_dof = 0.5 * dof;
    double half_x = 0.5 * x;
    if (lambda == 0.0) return regularized_lower_gamma(half_dof, half_x);

    double half_lambda = 0.5 * lambda;
    // Expand the Poisson mixture both ways from its mode so the largest
    // weights are accumulated first.
    long n0 = static_cast<long>(half_lambda);
    double log_hl = std::log(half_lambda);
    auto poisson = [&](long n) {
        return std::exp(n * log_hl - half_lambda - std::lgamma(double(n) + 1.0));
    };
    // Central chi-square term at mode, with both step directions driven by
    // the recurrence P(s + 1, x) = P(s, x) - x^s e^{-x} / Gamma(s + 1).
    auto gamma_step = [&](double s) {
        return std::exp(s * std::log(half_x) - half_x - std::lgamma(s + 1.0));
    };

    double p_fwd = poisson(n0);
    double g_fwd = regularized_lower_gamma(half_dof + n0, half_x);
    double p_bwd = p_fwd;
    double g_bwd = g_fwd;

    double sum = p_fwd * g_fwd;
    double pois_mass = p_fwd;

    const long max_terms = 1000000;
    long fwd = n0;
    long bwd = n0;
    bool fwd_done = false;
    bool bwd_done = n0 == 0;
    while (pois_mass < 1.0 - 1e-14) {
        bool progressed = false;
        if (!fwd_done) {
            double t = gamma_step(half_dof + fwd);
            p_fwd *= half_lambda / double(fwd + 1);
            g_fwd -= t;
            if (g_fwd < 0.0) g_fwd = 0.0;
            ++fwd;
            sum += p_fwd * g_fwd;
            pois_mass += p_fwd;
            progressed = true;
            // Beyond this point every remaining forward term is below the
            // series tolerance; only the Poisson tail check remains.
            if (p_fwd * g_fwd < 1e-18 && p_fwd < 1e-17) fwd_done = true;
        }
        if (!bwd_done) {
            p_bwd *= double(bwd) / half_lambda;
            g_bwd += gamma_step(half_dof + bwd - 1);
            if (g_bwd > 1.0) g_bwd = 1.0;
            --bwd;
            sum += p_bwd * g_bwd;
            pois_mass += p_bwd;
            progressed = true;
            if (bwd == 0) bwd_done = true;
        }
        if (!progressed || fwd - n0 > max_terms) {
            if (pois_mass < 1.0 - 1e-12) {
                throw std::runtime_error("noncentral_chisq_cdf: convergence failure");
            }
            break;
        }
    }
    if (sum < 0.0) sum = 0.0;
    if (sum > 1.0) sum = 1.0;
    return sum;
}

}  // namespace agrs
