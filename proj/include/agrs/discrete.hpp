#ifndef AGRS_DISCRETE_HPP
#define AGRS_DISCRETE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "agrs/random.hpp"
#include "agrs/sampler.hpp"

namespace agrs {

// Finite target/proposal pair over {0, ..., n-1}. Superlevel-set masses are
// exact sums; ties r(x) == L are included (closed superlevel sets).
class DiscretePair {
  public:
    using point_type = std::size_t;

    DiscretePair(std::vector<double> target, std::vector<double> proposal)
        : q_(std::move(target)), p_(std::move(proposal)) {
        if (q_.size() != p_.size() || q_.empty()) {
            throw std::invalid_argument("DiscretePair: mismatched outcome counts");
        }
        double qs = 0.0, ps = 0.0;
        for (std::size_t i = 0; i < q_.size(); ++i) {
            if (q_[i] < 0.0 || p_[i] <= 0.0) {
                throw std::invalid_argument("DiscretePair: needs q >= 0 and p > 0");
            }
            qs += q_[i];
            ps += p_[i];
        }
        if (std::fabs(qs - 1.0) > 1e-9 || std::fabs(ps - 1.0) > 1e-9) {
            throw std::invalid_argument("DiscretePair: distributions must sum to 1");
        }
    }

    std::size_t size() const { return q_.size(); }
    double target_prob(std::size_t i) const { return q_[i]; }
    double proposal_prob(std::size_t i) const { return p_[i]; }

    double ratio(std::size_t i) const { return q_[i] / p_[i]; }

    double target_mass_above(double level) const {
        double m = 0.0;
        for (std::size_t i = 0; i < q_.size(); ++i) {
            if (ratio(i) >= level) m += q_[i];
        }
        return m;
    }

    double proposal_mass_above(double level) const {
        double m = 0.0;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            if (ratio(i) >= level) m += p_[i];
        }
        return m;
    }

    double bound_mass(const Bound& b) const {
        if (!b.is_full()) {
            throw std::runtime_error("bounds violation: discrete pair supports only full bounds");
        }
        return 1.0;
    }

    std::size_t sample_restricted(const Bound& b, SharedRandomness& rng) const {
        bound_mass(b);
        double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < p_.size(); ++i) {
            acc += p_[i];
            if (u < acc) return i;
        }
        return p_.size() - 1;
    }

    // exp(D_inf) = max_i q_i / p_i.
    double sup_ratio() const {
        double m = 0.0;
        for (std::size_t i = 0; i < q_.size(); ++i) m = std::max(m, ratio(i));
        return m;
    }

    // D_KL(Q || P) in nats.
    double kl_nats() const {
        double kl = 0.0;
        for (std::size_t i = 0; i < q_.size(); ++i) {
            if (q_[i] > 0.0) kl += q_[i] * std::log(ratio(i));
        }
        return kl;
    }

  private:
    std::vector<double> q_;
    std::vector<double> p_;
};

}  // namespace agrs

#endif
