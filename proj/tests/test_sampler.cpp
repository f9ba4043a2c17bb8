#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "agrs/discrete.hpp"
#include "agrs/random.hpp"
#include "agrs/sampler.hpp"
#include "oracles.hpp"

using namespace agrs;

namespace {

DiscretePair two_point() { return DiscretePair({0.9, 0.1}, {0.5, 0.5}); }

}  // namespace

TEST_CASE("acceptance_prob clips the scaled residual ratio") {
    CHECK(acceptance_prob(1.0, 0.0, 1.0, 1.0) == 1.0);
    CHECK(acceptance_prob(1.8, 0.0, 1.0, 1.0) == 1.0);
    CHECK(acceptance_prob(0.2, 0.0, 1.0, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(acceptance_prob(0.2, 1.0, 0.4, 1.0) == 0.0);
    CHECK_THROWS_WITH_AS(acceptance_prob(1.0, 0.0, 0.0, 1.0), "degenerate survival",
                         std::runtime_error);
}

TEST_CASE("step_levels follows the hand-enumerated two-point recursion") {
    auto pair = two_point();
    auto q = [&](double level) { return pair.target_mass_above(level); };
    auto p = [&](double level) { return pair.proposal_mass_above(level); };

    auto [l1, s2] = step_levels(0.0, 1.0, 1.0, q, p);
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s2 == doctest::Approx(0.4).epsilon(1e-12));

    auto [l2, s3] = step_levels(l1, s2, 1.0, q, p);
    CHECK(l2 == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(s3 == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("step_levels with Q = P exhausts after one step") {
    DiscretePair pair({0.5, 0.5}, {0.5, 0.5});
    auto q = [&](double level) { return pair.target_mass_above(level); };
    auto p = [&](double level) { return pair.proposal_mass_above(level); };
    auto [l1, s2] = step_levels(0.0, 1.0, 1.0, q, p);
    CHECK(l1 == 1.0);
    CHECK(s2 == 0.0);
}

TEST_CASE("step_levels flags broken mass functions") {
    auto bad_q = [](double) { return 0.0; };
    auto bad_p = [](double) { return 1.0; };
    CHECK_THROWS_WITH_AS(step_levels(0.0, 1.0, 1.0, bad_q, bad_p), "mass inconsistency",
                         std::runtime_error);
}

TEST_CASE("Q = P accepts at the first step") {
    DiscretePair pair({0.3, 0.7}, {0.3, 0.7});
    for (uint64_t t = 0; t < 100; ++t) {
        auto rng = SharedRandomness::substream(7, t);
        auto res = agrs_sample(pair, BoundsSchedule::unrestricted(), rng);
        CHECK(res.index == 1);
        CHECK(res.trace.steps[0].beta == 1.0);
        CHECK(survival_bound_check(res.trace));
    }
}

TEST_CASE("two-point GRS mean runtime matches exp(D_inf) = 1.8") {
    auto pair = two_point();
    const int trials = 100000;
    std::vector<double> ks(trials);
    for (int t = 0; t < trials; ++t) {
        auto rng = SharedRandomness::substream(0x2B0, uint64_t(t));
        ks[t] = double(agrs_sample(pair, BoundsSchedule::unrestricted(), rng).index);
    }
    auto [mean, se] = oracles::mean_se(ks);
    CHECK(std::fabs(mean - 1.8) <= 3.0 * se);
    CHECK(pair.sup_ratio() == doctest::Approx(1.8).epsilon(1e-15));
}

TEST_CASE("two-point GRS codelength bound (E[ln K] <= D_KL + 1 + ln 2)") {
    auto pair = two_point();
    const int trials = 100000;
    std::vector<double> lnks(trials);
    for (int t = 0; t < trials; ++t) {
        auto rng = SharedRandomness::substream(0x10C, uint64_t(t));
        lnks[t] = std::log(double(agrs_sample(pair, BoundsSchedule::unrestricted(), rng).index));
    }
    auto [mean, se] = oracles::mean_se(lnks);
    CHECK(mean <= pair.kl_nats() + 1.0 + std::log(2.0) + 3.0 * se);
}

TEST_CASE("traces: levels increase to exp(D_inf), survivals obey the bound") {
    auto pair = two_point();
    double sup = pair.sup_ratio();
    for (uint64_t t = 0; t < 2000; ++t) {
        auto rng = SharedRandomness::substream(0x7AACE, t);
        auto res = agrs_sample(pair, BoundsSchedule::unrestricted(), rng);
        double prev_level = 0.0;
        double prev_survival = 1.0 + 1e-15;
        for (const auto& rec : res.trace.steps) {
            CHECK(rec.level > prev_level);
            CHECK(rec.level <= sup + 1e-9);
            CHECK(rec.survival <= prev_survival);
            CHECK(rec.survival > 0.0);
            CHECK(rec.beta >= 0.0);
            CHECK(rec.beta <= 1.0);
            prev_level = rec.level;
            prev_survival = rec.survival;
        }
        CHECK(survival_bound_check(res.trace));
        CHECK(res.trace.min_survival_ratio_index >= 1);
        CHECK(res.trace.min_survival_ratio_index <= res.index);
    }
    // Hand check from the enumeration: S_2 = 0.4 <= e^{-P(H_1)/P(B_1)} = e^{-0.5}.
    CHECK(0.4 <= std::exp(-0.5));
}

TEST_CASE("recursive and iterative samplers agree trial-by-trial") {
    auto pair = two_point();
    for (uint64_t t = 0; t < 10000; ++t) {
        auto rng_a = SharedRandomness::substream(0xEC0, t);
        auto rng_b = SharedRandomness::substream(0xEC0, t);
        auto a = agrs_sample(pair, BoundsSchedule::unrestricted(), rng_a);
        auto b = agrs_sample_recursive(pair, BoundsSchedule::unrestricted(), rng_b);
        REQUIRE(a.index == b.index);
        REQUIRE(a.sample == b.sample);
    }
}

TEST_CASE("recursive sampler returns at depth 1 when Q = P") {
    DiscretePair pair({0.25, 0.75}, {0.25, 0.75});
    auto rng = SharedRandomness::substream(3, 1);
    auto res = agrs_sample_recursive(pair, BoundsSchedule::unrestricted(), rng);
    CHECK(res.index == 1);
}

TEST_CASE("exact enumeration reproduces the target distribution") {
    auto pair = two_point();
    auto e = oracles::enumerate_grs(pair, 50);
    CHECK(e.tv_vs_target <= 1e-9);
    CHECK(std::fabs(e.expected_k - pair.sup_ratio()) <= 1e-6);

    // Distribution over outcomes from 1e5 sampler runs matches Q within 3 SE.
    const int trials = 100000;
    int count0 = 0;
    for (int t = 0; t < trials; ++t) {
        auto rng = SharedRandomness::substream(0xD15C, uint64_t(t));
        count0 += agrs_sample(pair, BoundsSchedule::unrestricted(), rng).sample == 0;
    }
    double emp = double(count0) / trials;
    double se = std::sqrt(0.9 * 0.1 / trials);
    CHECK(std::fabs(emp - 0.9) <= 3.0 * se);
}

TEST_CASE("random bounded-ratio pairs: sampler and enumeration agree") {
    auto meta = SharedRandomness(0x9E11);
    for (int inst = 0; inst < 20; ++inst) {
        auto pair = oracles::random_bounded_ratio_pair(meta, 8);
        auto e = oracles::enumerate_grs(pair, 50);
        CHECK(e.tv_vs_target <= 1e-9);
        CHECK(std::fabs(e.expected_k - pair.sup_ratio()) <= 1e-6);
    }
}

TEST_CASE("pair invariants: residual slice mass is nonnegative and nonincreasing") {
    auto meta = SharedRandomness(0xFACE);
    for (int inst = 0; inst < 50; ++inst) {
        auto pair = oracles::random_bounded_ratio_pair(meta, 8);
        CHECK(pair.target_mass_above(0.0) == doctest::Approx(1.0).epsilon(1e-12));
        double prev_q = 1.0, prev_p = 1.0, prev_slice = 1.0;
        for (double level = 0.0; level <= 2.6; level += 0.01) {
            double q = pair.target_mass_above(level);
            double p = pair.proposal_mass_above(level);
            CHECK(q >= level * p - 1e-12);
            CHECK(q <= prev_q + 1e-15);
            CHECK(p <= prev_p + 1e-15);
            double slice = q - level * p;
            CHECK(slice <= prev_slice + 1e-12);
            prev_q = q;
            prev_p = p;
            prev_slice = slice;
        }
    }
}

TEST_CASE("schedule validation and runtime guards") {
    CHECK_THROWS_AS(BoundsSchedule({Bound{0.2, 0.4}, Bound{0.1, 0.3}}), std::invalid_argument);

    // A non-full bound on a pair without representable level sets.
    auto pair = two_point();
    BoundsSchedule narrow({Bound{}, Bound{0.1, 0.9}});
    bool threw = false;
    for (uint64_t t = 0; t < 200 && !threw; ++t) {
        auto rng = SharedRandomness::substream(0xBAD, t);
        try {
            agrs_sample(pair, narrow, rng);
        } catch (const std::runtime_error& e) {
            threw = std::string(e.what()).find("bounds violation") != std::string::npos;
        }
    }
    CHECK(threw);

    // Iteration cap.
    SamplerConfig cfg;
    cfg.max_steps = 1;
    auto stubborn = DiscretePair({0.9, 0.1}, {0.5, 0.5});
    bool capped = false;
    for (uint64_t t = 0; t < 300 && !capped; ++t) {
        auto rng = SharedRandomness::substream(0xCA9, t);
        try {
            agrs_sample(stubborn, BoundsSchedule::unrestricted(), rng, cfg);
        } catch (const std::runtime_error& e) {
            capped = std::string(e.what()) == "iteration cap";
        }
    }
    CHECK(capped);
}
