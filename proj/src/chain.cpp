#include "agrs/chain.hpp"

#include <cmath>
#include <stdexcept>

#include "agrs/bbq.hpp"
#include "agrs/gaussian.hpp"
#include "agrs/specfun.hpp"

namespace agrs {

ReferenceChain::ReferenceChain(double rho2, double sigma2, WidthMode mode, const ChainConfig& cfg)
    : rho2_(rho2), sigma2_(sigma2), mode_(mode) {
    if (!(rho2 > 0.0) || !(sigma2 > 0.0)) {
        throw std::invalid_argument("ReferenceChain: variances must be positive");
    }
    auto spec = GaussianChannelSpec::scalar_mean(1, rho2, sigma2, sigma2, 0.0);
    auto params = ratio_params(spec);
    double t = spec.proposal_variance();
    double sqrt_t = std::sqrt(t);
    double rho = std::sqrt(rho2);

    double level = 0.0;
    double survival = 1.0;
    double ref_lo = 0.0;
    double ref_hi = 1.0;

    for (std::size_t k = 1; k <= cfg.max_steps; ++k) {
        ChainStep step;
        step.ref_lo = ref_lo;
        step.ref_hi = ref_hi;
        step.raw_width = ref_hi - ref_lo;
        if (mode == WidthMode::integer_reciprocal) {
            auto b = uint64_t(std::floor(1.0 / step.raw_width));
            while (b > 1 && 1.0 / double(b) < step.raw_width) --b;
            step.a = 1;
            step.b = b;
        } else {
            Rational r = rationalize_width_above(step.raw_width, 1u << 16);
            step.a = r.a;
            step.b = r.b;
        }
        step.width = double(step.a) / double(step.b);
        step.survival = survival;

        // The reference level sets evolve under the unrestricted (GRS)
        // recursion. Restricting the zero-mean recursion by its own level
        // sets shrinks the shared widths faster than off-center targets'
        // level sets shrink, and containment provably fails once the
        // rational floor binds; the GRS-evolved sets keep every target's
        // level set inside the bound. The bound mass P(B_k) is still the
        // (widened) width of Phi(H0_{k-1}).
        level += survival;
        step.level = level;
        steps_.push_back(step);

        double r2 = superlevel_radius_sq(level, params, 1);
        if (r2 <= 0.0) return;  // reference superlevel set emptied out
        double r = std::sqrt(r2);
        double p_hi = std_normal_cdf(r / sqrt_t);
        double p_mass = 2.0 * p_hi - 1.0;
        double q_mass = 2.0 * std_normal_cdf(r / rho) - 1.0;
        survival = q_mass - level * p_mass;
        if (survival <= cfg.survival_floor) return;
        ref_lo = 1.0 - p_hi;
        ref_hi = p_hi;
        if (p_mass < cfg.width_floor) return;
    }
    truncated_ = true;
}

const ChainStep& ReferenceChain::step(std::size_t k) const {
    if (k < 1 || k > steps_.size()) {
        throw std::runtime_error("chain truncated: step index beyond the built chain");
    }
    return steps_[k - 1];
}

}  // namespace agrs
