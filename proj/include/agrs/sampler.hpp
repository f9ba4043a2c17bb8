#ifndef AGRS_SAMPLER_HPP
#define AGRS_SAMPLER_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "agrs/random.hpp"

namespace agrs {

// A proposal restriction. Bounds are described by their image under the
// proposal CDF, so the interval [phi_lo, phi_hi] in [0, 1] has proposal
// mass phi_hi - phi_lo by construction. The default is the whole space.
struct Bound {
    double phi_lo = 0.0;
    double phi_hi = 1.0;

    bool is_full() const { return phi_lo == 0.0 && phi_hi == 1.0; }
    double width() const { return phi_hi - phi_lo; }

    bool contains(const Bound& other, double slack = 1e-13) const {
        return other.phi_lo >= phi_lo - slack && other.phi_hi <= phi_hi + slack;
    }
};

// A fixed, nested chain of bounds B_1 >= B_2 >= ...; steps past the end
// reuse the last bound. The unrestricted schedule turns the sampler into
// plain greedy rejection sampling.
class BoundsSchedule {
  public:
    BoundsSchedule() = default;

    explicit BoundsSchedule(std::vector<Bound> bounds) : bounds_(std::move(bounds)) {
        for (std::size_t i = 0; i + 1 < bounds_.size(); ++i) {
            if (!bounds_[i].contains(bounds_[i + 1])) {
                throw std::invalid_argument("bounds violation: schedule is not nested");
            }
        }
    }

    static BoundsSchedule unrestricted() { return BoundsSchedule(); }

    // 1-based step index.
    Bound bound(std::size_t k) const {
        if (bounds_.empty()) return Bound{};
        return k <= bounds_.size() ? bounds_[k - 1] : bounds_.back();
    }

  private:
    std::vector<Bound> bounds_;
};

struct SamplerConfig {
    std::size_t max_steps = 10'000'000;
    double survival_floor = 1e-15;
};

// Per-step record. `survival` is S_k on entry to step k; `level` is L_k
// computed after the step, and the two masses are Q(H_k) and P(H_k).
struct StepRecord {
    double survival = 0.0;
    double beta = 0.0;
    double bound_mass = 0.0;
    double level = 0.0;
    double level_mass_q = 0.0;
    double level_mass_p = 0.0;
};

struct SamplerTrace {
    std::vector<StepRecord> steps;
    std::size_t accepted_index = 0;            // K
    double final_survival = 0.0;               // S_{K+1}
    std::size_t min_survival_ratio_index = 0;  // m_K = argmin_n S_n / P(B_n)
    double min_survival_ratio = 0.0;

    double log_bound_mass_at_min() const {
        return std::log(steps[min_survival_ratio_index - 1].bound_mass);
    }
};

template <class Pair>
struct SampleResult {
    typename Pair::point_type sample;
    std::size_t index = 0;  // K
    SamplerTrace trace;
};

// clip(P(B_k) * (r(x) - L_{k-1}) / S_k) into [0, 1].
inline double acceptance_prob(double r_x, double L_prev, double S_k, double P_Bk) {
    if (!(S_k > 0.0)) throw std::runtime_error("degenerate survival");
    double beta = P_Bk * (r_x - L_prev) / S_k;
    if (beta < 0.0) return 0.0;
    if (beta > 1.0) return 1.0;
    return beta;
}

// One level/survival update: L_k = L_{k-1} + S_k / P(B_k) and
// S_{k+1} = Q(H_k) - L_k * P(H_k). Returns (L_k, S_{k+1}) along with the
// two masses through the out parameters.
template <class QMass, class PMass>
inline std::pair<double, double> step_levels(double L_prev, double S_k, double P_Bk,
                                             QMass&& target_mass_above,
                                             PMass&& proposal_mass_above,
                                             double* q_out = nullptr, double* p_out = nullptr) {
    double L = L_prev + S_k / P_Bk;
    double q = target_mass_above(L);
    double p = proposal_mass_above(L);
    double S_next = q - L * p;
    if (S_next < -1e-12) throw std::runtime_error("mass inconsistency");
    if (S_next < 0.0) S_next = 0.0;
    if (q_out) *q_out = q;
    if (p_out) *p_out = p;
    return {L, S_next};
}

namespace detail {

template <class Pair>
inline void check_containment(const Pair& pair, double level, const Bound& b) {
    if (b.is_full()) return;
    if constexpr (requires { pair.phi_interval_above(level); }) {
        Bound h = pair.phi_interval_above(level);
        if (!b.contains(h)) throw std::runtime_error("bounds violation: H not contained in B");
    } else {
        throw std::runtime_error(
            "bounds violation: restricted bounds need a pair with representable level sets");
    }
}

inline void note_survival_ratio(SamplerTrace& trace, std::size_t k, double S, double P_Bk) {
    double ratio = S / P_Bk;
    if (trace.min_survival_ratio_index == 0 || ratio < trace.min_survival_ratio) {
        trace.min_survival_ratio = ratio;
        trace.min_survival_ratio_index = k;
    }
}

}  // namespace detail

// Adaptive greedy rejection sampling. Draws one restricted-proposal
// candidate and one acceptance uniform per step, in that order; the trace
// records the full level/survival history including the accepted step.
template <class Pair, class Schedule = BoundsSchedule>
SampleResult<Pair> agrs_sample(const Pair& pair, const Schedule& schedule, SharedRandomness& rng,
                               const SamplerConfig& cfg = {}) {
    SampleResult<Pair> out;
    double L = 0.0;
    double S = 1.0;
    auto q_above = [&](double level) { return pair.target_mass_above(level); };
    auto p_above = [&](double level) { return pair.proposal_mass_above(level); };

    for (std::size_t k = 1; k <= cfg.max_steps; ++k) {
        Bound b = schedule.bound(k);
        double pB = pair.bound_mass(b);
        detail::check_containment(pair, L, b);

        auto x = pair.sample_restricted(b, rng);
        double u = rng.uniform();
        double beta = acceptance_prob(pair.ratio(x), L, S, pB);
        detail::note_survival_ratio(out.trace, k, S, pB);

        StepRecord rec;
        rec.survival = S;
        rec.beta = beta;
        rec.bound_mass = pB;
        auto [L_next, S_next] =
            step_levels(L, S, pB, q_above, p_above, &rec.level_mass_q, &rec.level_mass_p);
        rec.level = L_next;
        out.trace.steps.push_back(rec);

        if (u <= beta) {
            out.sample = std::move(x);
            out.index = k;
            out.trace.accepted_index = k;
            out.trace.final_survival = S_next;
            return out;
        }
        if (S_next <= cfg.survival_floor) throw std::runtime_error("survival underflow");
        L = L_next;
        S = S_next;
    }
    throw std::runtime_error("iteration cap");
}

namespace detail {

// Depth k of the recursive formulation. The residual target Q_k is carried
// through its density against the original proposal,
// dQ_k/dP = max(r - threshold, 0) / scale, and each depth renormalizes by
// n_k = Q_k(H_k) - P_k(H_k) exactly as in the recursive algorithm.
template <class Pair, class Schedule>
SampleResult<Pair> agrs_recurse(const Pair& pair, const Schedule& schedule, SharedRandomness& rng,
                                const SamplerConfig& cfg, std::size_t k, double threshold,
                                double scale, SamplerTrace trace) {
    if (k > cfg.max_steps) throw std::runtime_error("iteration cap");
    if (!(scale > 0.0)) throw std::runtime_error("degenerate survival");

    Bound b = schedule.bound(k);
    double pB = pair.bound_mass(b);
    check_containment(pair, threshold, b);

    auto x = pair.sample_restricted(b, rng);
    double u = rng.uniform();
    double residual_ratio = pB * std::max(pair.ratio(x) - threshold, 0.0) / scale;
    double beta = residual_ratio < 1.0 ? residual_ratio : 1.0;
    note_survival_ratio(trace, k, scale, pB);

    double next_threshold = threshold + scale / pB;
    double q = pair.target_mass_above(next_threshold);
    double p = pair.proposal_mass_above(next_threshold);
    // Q_k(H_k) and P_k(H_k) in the residual pair's own measures.
    double q_k = (q - threshold * p) / scale;
    double p_k = p / pB;
    double normalizer = q_k - p_k;

    StepRecord rec;
    rec.survival = scale;
    rec.beta = beta;
    rec.bound_mass = pB;
    rec.level = next_threshold;
    rec.level_mass_q = q;
    rec.level_mass_p = p;
    trace.steps.push_back(rec);

    double next_scale = scale * normalizer;
    if (u <= beta) {
        SampleResult<Pair> out;
        out.sample = std::move(x);
        out.index = k;
        out.trace = std::move(trace);
        out.trace.accepted_index = k;
        out.trace.final_survival = next_scale;
        return out;
    }
    if (normalizer < -1e-12) throw std::runtime_error("mass inconsistency");
    if (next_scale <= cfg.survival_floor) throw std::runtime_error("survival underflow");
    return agrs_recurse(pair, schedule, rng, cfg, k + 1, next_threshold, next_scale,
                        std::move(trace));
}

}  // namespace detail

// Recursive formulation: each rejection hands the residual target and the
// restricted proposal to the next depth. Equivalent to agrs_sample when
// driven by the same randomness stream.
template <class Pair, class Schedule = BoundsSchedule>
SampleResult<Pair> agrs_sample_recursive(const Pair& pair, const Schedule& schedule,
                                         SharedRandomness& rng, const SamplerConfig& cfg = {}) {
    return detail::agrs_recurse(pair, schedule, rng, cfg, 1, 0.0, 1.0, SamplerTrace{});
}

// True iff every recorded survival satisfies
// S_{k+1} <= exp(-sum_{n<=k} P(H_n) / P(B_n)) within 1e-12 slack.
inline bool survival_bound_check(const SamplerTrace& trace) {
    double exponent = 0.0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const StepRecord& rec = trace.steps[i];
        exponent += rec.level_mass_p / rec.bound_mass;
        double s_next =
            i + 1 < trace.steps.size() ? trace.steps[i + 1].survival : trace.final_survival;
        if (s_next > std::exp(-exponent) + 1e-12) return false;
    }
    return true;
}

}  // namespace agrs

#endif
