#ifndef AGRS_GAUSSIAN_HPP
#define AGRS_GAUSSIAN_HPP

#include <array>
#include <cstddef>
#include <stdexcept>

#include "agrs/random.hpp"
#include "agrs/sampler.hpp"

namespace agrs {

// Point in R^d with small inline capacity; the Gaussian instances in scope
// are low-dimensional.
class Point {
  public:
    static constexpr std::size_t kMaxDim = 16;

    Point() = default;
    explicit Point(std::size_t d, double fill = 0.0) : size_(d) {
        if (d > kMaxDim) throw std::invalid_argument("Point: dimension too large");
        for (std::size_t i = 0; i < d; ++i) v_[i] = fill;
    }

    std::size_t size() const { return size_; }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    bool operator==(const Point& o) const {
        if (size_ != o.size_) return false;
        for (std::size_t i = 0; i < size_; ++i) {
            if (v_[i] != o.v_[i]) return false;
        }
        return true;
    }

  private:
    std::array<double, kMaxDim> v_{};
    std::size_t size_ = 0;
};

// Gaussian channel instance: target Q = N(mu, rho2 I), prior mu ~ N(0,
// sigma2 I), proposal P = N(0, (rho2 + s2) I). The non-overdispersed
// marginal proposal corresponds to s2 == sigma2.
struct GaussianChannelSpec {
    int d = 1;
    double rho2 = 1.0;
    double sigma2 = 1.0;
    double s2 = 1.0;
    Point mu;

    GaussianChannelSpec(int dim, double rho2_, double sigma2_, double s2_, const Point& mu_)
        : d(dim), rho2(rho2_), sigma2(sigma2_), s2(s2_), mu(mu_) {
        if (d < 1 || rho2 <= 0.0 || sigma2 <= 0.0 || s2 <= 0.0 || mu.size() != std::size_t(d)) {
            throw std::invalid_argument("GaussianChannelSpec: invalid parameters");
        }
    }

    static GaussianChannelSpec scalar_mean(int dim, double rho2, double sigma2, double s2,
                                           double mu_each) {
        return GaussianChannelSpec(dim, rho2, sigma2, s2, Point(std::size_t(dim), mu_each));
    }

    double proposal_variance() const { return rho2 + s2; }
    double mu_norm_sq() const {
        double n = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) n += mu[i] * mu[i];
        return n;
    }
};

// Parameters of the density ratio r(x) = zeta * N(x | nu, kappa2 I).
struct RatioParams {
    Point nu;
    double kappa2 = 0.0;
    double log_zeta = 0.0;

    double nu_norm_sq() const {
        double n = 0.0;
        for (std::size_t i = 0; i < nu.size(); ++i) n += nu[i] * nu[i];
        return n;
    }
};

RatioParams ratio_params(const GaussianChannelSpec& spec);

// Squared radius of the superlevel set {r >= L} around nu; negative means
// the set is empty. The log-level variant avoids overflow for extreme L.
double superlevel_radius_sq(double level, const RatioParams& params, int d);
double superlevel_radius_sq_log(double log_level, const RatioParams& params, int d);

// P_s({|x - nu|^2 <= r2}) and Q({|x - nu|^2 <= r2}) via noncentral
// chi-square CDFs. Negative r2 gives mass 0.
double sphere_mass_proposal(double r2, const GaussianChannelSpec& spec);
double sphere_mass_target(double r2, const GaussianChannelSpec& spec);

// exp(D_inf(Q || P_s)) = ((rho2+s2)/rho2)^{d/2} exp(|mu|^2 / (2 s2)).
double expected_runtime_given_mu(const GaussianChannelSpec& spec);

// Prior-averaged runtime; +infinity when s2 <= sigma2.
double mean_runtime_over_prior(int d, double rho2, double sigma2, double s2);

// s2 minimizing mean_runtime_over_prior: sigma2 + sigma * sqrt(rho2 + sigma2).
double optimal_overdispersion(double rho2, double sigma2);

struct Divergences {
    double kl_nats = 0.0;
    double d_inf_nats = 0.0;
    double mutual_info_bits = 0.0;
};

Divergences divergences(const GaussianChannelSpec& spec);

// TargetProposalPair over R^d for the Gaussian channel. Restricted
// sampling supports the full space for any d, and proposal-CDF intervals
// for d == 1.
class GaussianPair {
  public:
    using point_type = Point;

    explicit GaussianPair(const GaussianChannelSpec& spec);

    double ratio(const Point& x) const;
    double log_ratio(const Point& x) const;
    double target_mass_above(double level) const;
    double proposal_mass_above(double level) const;
    double bound_mass(const Bound& b) const { return b.width(); }
    Point sample_restricted(const Bound& b, SharedRandomness& rng) const;

    // Phi-space interval of {r >= level}; requires d == 1.
    Bound phi_interval_above(double level) const;

    const GaussianChannelSpec& spec() const { return spec_; }
    const RatioParams& params() const { return params_; }

  private:
    GaussianChannelSpec spec_;
    RatioParams params_;
    double proposal_sd_;
};

}  // namespace agrs

#endif
