#include "agrs/gaussian.hpp"

#include <cmath>
#include <limits>

#include "agrs/specfun.hpp"

namespace agrs {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;
}

RatioParams ratio_params(const GaussianChannelSpec& spec) {
    RatioParams out;
    double t = spec.proposal_variance();
    double blow = t / spec.s2;
    out.nu = Point(std::size_t(spec.d));
    for (std::size_t i = 0; i < out.nu.size(); ++i) out.nu[i] = spec.mu[i] * blow;
    out.kappa2 = blow * spec.rho2;
    // ln zeta = d ln((s2+rho2)/s2) - ln N(mu | 0, s2 I)
    out.log_zeta = spec.d * std::log(blow) + 0.5 * spec.d * (kLog2Pi + std::log(spec.s2)) +
                   spec.mu_norm_sq() / (2.0 * spec.s2);
    return out;
}

double superlevel_radius_sq_log(double log_level, const RatioParams& params, int d) {
    return params.kappa2 * (-2.0 * log_level + 2.0 * params.log_zeta - d * kLog2Pi -
                            d * std::log(params.kappa2));
}

double superlevel_radius_sq(double level, const RatioParams& params, int d) {
    return superlevel_radius_sq_log(std::log(level), params, d);
}

double sphere_mass_proposal(double r2, const GaussianChannelSpec& spec) {
    if (r2 <= 0.0) return 0.0;
    double t = spec.proposal_variance();
    RatioParams params = ratio_params(spec);
    return noncentral_chisq_cdf(spec.d, params.nu_norm_sq() / t, r2 / t);
}

double sphere_mass_target(double r2, const GaussianChannelSpec& spec) {
    if (r2 <= 0.0) return 0.0;
    RatioParams params = ratio_params(spec);
    double off = 0.0;
    for (std::size_t i = 0; i < params.nu.size(); ++i) {
        double delta = params.nu[i] - spec.mu[i];
        off += delta * delta;
    }
    return noncentral_chisq_cdf(spec.d, off / spec.rho2, r2 / spec.rho2);
}

double expected_runtime_given_mu(const GaussianChannelSpec& spec) {
    double log_sup = 0.5 * spec.d * std::log(spec.proposal_variance() / spec.rho2) +
                     spec.mu_norm_sq() / (2.0 * spec.s2);
    return std::exp(log_sup);
}

double mean_runtime_over_prior(int d, double rho2, double sigma2, double s2) {
    if (s2 <= sigma2) return std::numeric_limits<double>::infinity();
    double base = s2 / (s2 - sigma2) * (rho2 + s2) / rho2;
    return std::pow(base, 0.5 * d);
}

double optimal_overdispersion(double rho2, double sigma2) {
    return sigma2 + std::sqrt(sigma2) * std::sqrt(rho2 + sigma2);
}

Divergences divergences(const GaussianChannelSpec& spec) {
    Divergences out;
    double t = spec.proposal_variance();
    double log_var_ratio = std::log(t / spec.rho2);
    out.kl_nats =
        0.5 * (spec.d * log_var_ratio + spec.d * spec.rho2 / t + spec.mu_norm_sq() / t - spec.d);
    out.d_inf_nats = 0.5 * spec.d * log_var_ratio + spec.mu_norm_sq() / (2.0 * spec.s2);
    out.mutual_info_bits = 0.5 * spec.d * std::log2(1.0 + spec.sigma2 / spec.rho2);
    return out;
}

GaussianPair::GaussianPair(const GaussianChannelSpec& spec)
    : spec_(spec), params_(ratio_params(spec)), proposal_sd_(std::sqrt(spec.proposal_variance())) {}

double GaussianPair::log_ratio(const Point& x) const {
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double delta = x[i] - params_.nu[i];
        dist += delta * delta;
    }
    return params_.log_zeta -
           0.5 * spec_.d * (kLog2Pi + std::log(params_.kappa2)) - dist / (2.0 * params_.kappa2);
}

double GaussianPair::ratio(const Point& x) const { return std::exp(log_ratio(x)); }

double GaussianPair::target_mass_above(double level) const {
    if (level <= 0.0) return 1.0;
    return sphere_mass_target(superlevel_radius_sq(level, params_, spec_.d), spec_);
}

double GaussianPair::proposal_mass_above(double level) const {
    if (level <= 0.0) return 1.0;
    return sphere_mass_proposal(superlevel_radius_sq(level, params_, spec_.d), spec_);
}

Point GaussianPair::sample_restricted(const Bound& b, SharedRandomness& rng) const {
    Point x(std::size_t(spec_.d));
    if (b.is_full()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = proposal_sd_ * std_normal_quantile(rng.uniform());
        }
        return x;
    }
    if (spec_.d != 1) {
        throw std::runtime_error(
            "bounds violation: restricted Gaussian proposals are 1D intervals only");
    }
    double u = b.phi_lo + b.width() * rng.uniform();
    x[0] = proposal_sd_ * std_normal_quantile(u);
    return x;
}

Bound GaussianPair::phi_interval_above(double level) const {
    if (spec_.d != 1) {
        throw std::runtime_error("bounds violation: level-set intervals require d == 1");
    }
    if (level <= 0.0) return Bound{};
    double r2 = superlevel_radius_sq(level, params_, spec_.d);
    if (r2 <= 0.0) {
        double center = std_normal_cdf(params_.nu[0] / proposal_sd_);
        return Bound{center, center};
    }
    double r = std::sqrt(r2);
    return Bound{std_normal_cdf((params_.nu[0] - r) / proposal_sd_),
                 std_normal_cdf((params_.nu[0] + r) / proposal_sd_)};
}

}  // namespace agrs
