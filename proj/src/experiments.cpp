#include "agrs/experiments.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "agrs/chain.hpp"
#include "agrs/codec.hpp"
#include "agrs/discrete.hpp"
#include "agrs/gaussian.hpp"
#include "agrs/sampler.hpp"
#include "agrs/specfun.hpp"
#include "agrs/stats.hpp"

namespace agrs {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(threads, int(n));
    pool.reserve(std::size_t(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

RunMode parse_run_mode(const std::string& name) {
    if (name == "grs") return RunMode::grs;
    if (name == "agrs") return RunMode::agrs;
    if (name == "agrs-int") return RunMode::agrs_int;
    throw std::invalid_argument("unknown mode: " + name);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::string format_int(long long v) { return std::to_string(v); }

WidthMode width_mode_of(RunMode mode) {
    return mode == RunMode::agrs_int ? WidthMode::integer_reciprocal : WidthMode::rational;
}

// Prior-averaged KL(Q_mu || P_s) in bits.
double mean_kl_bits(int d, double rho2, double sigma2, double s2) {
    double t = rho2 + s2;
    return 0.5 * d * (std::log(t / rho2) + (rho2 + sigma2) / t - 1.0) / kLn2;
}

struct EncodeSummary {
    double k = 0.0;
    double kl_bits = 0.0;
    double neg_log2_bound = 0.0;
    std::size_t k_int = 0;
    bool failed = false;
};

}  // namespace

std::string run_overdispersion_sweep(const SweepConfig& cfg) {
    if (cfg.mode != RunMode::grs) {
        throw std::invalid_argument("overdispersion sweep runs in grs mode");
    }
    if (cfg.s_grid.empty()) throw std::invalid_argument("overdispersion sweep needs an s grid");
    double rho2 = cfg.rho * cfg.rho;
    double sigma2 = cfg.sigma * cfg.sigma;
    for (double s : cfg.s_grid) {
        if (s <= cfg.sigma) {
            throw std::invalid_argument("overdispersion sweep needs s > sigma throughout");
        }
    }

    double s2_opt = optimal_overdispersion(rho2, sigma2);
    double s_opt = std::sqrt(s2_opt);

    // Monte Carlo confirmation at the optimum.
    std::vector<double> ks(std::size_t(cfg.trials), 0.0);
    parallel_for(ks.size(), cfg.threads, [&](std::size_t i) {
        auto rng = SharedRandomness::substream(cfg.seed, i);
        Point mu(std::size_t(cfg.d));
        for (std::size_t j = 0; j < mu.size(); ++j) {
            mu[j] = cfg.sigma * std_normal_quantile(rng.uniform());
        }
        GaussianPair pair(GaussianChannelSpec(cfg.d, rho2, sigma2, s2_opt, mu));
        ks[i] = double(agrs_sample(pair, BoundsSchedule::unrestricted(), rng).index);
    });
    auto mc = mean_se(ks);

    std::ostringstream out;
    out << "# columns: s (proposal overdispersion stddev), expected_runtime (mean samples, "
           "analytic), expected_kl (bits, prior-averaged analytic), is_optimum (0/1), mc_mean_k "
           "(mean samples over mc_trials), mc_se_k (standard error), mc_trials (count)\n";
    out << "s,expected_runtime,expected_kl,is_optimum,mc_mean_k,mc_se_k,mc_trials\n";
    auto emit = [&](double s, bool optimum) {
        double s2 = s * s;
        out << format_double(s) << ',' << format_double(mean_runtime_over_prior(cfg.d, rho2, sigma2, s2))
            << ',' << format_double(mean_kl_bits(cfg.d, rho2, sigma2, s2)) << ','
            << (optimum ? '1' : '0');
        if (optimum) {
            out << ',' << format_double(mc.mean) << ',' << format_double(mc.se) << ','
                << format_int(cfg.trials);
        } else {
            out << ",,,";
        }
        out << '\n';
    };
    bool optimum_emitted = false;
    for (double s : cfg.s_grid) {
        if (!optimum_emitted && s >= s_opt) {
            emit(s_opt, true);
            optimum_emitted = true;
        }
        emit(s, false);
    }
    if (!optimum_emitted) emit(s_opt, true);
    return out.str();
}

namespace {

std::vector<EncodeSummary> run_codec_block(const ReferenceChain& chain, double sigma,
                                           uint64_t sigma_seed, int targets, int trials,
                                           int threads) {
    double rho2 = chain.rho2();
    std::size_t total = std::size_t(targets) * std::size_t(trials);
    std::vector<EncodeSummary> rows(total);
    parallel_for(total, threads, [&](std::size_t i) {
        std::size_t target_index = i / std::size_t(trials);
        std::size_t trial_index = i % std::size_t(trials);
        uint64_t target_seed = SharedRandomness::substream_seed(sigma_seed, target_index);
        auto mu_rng = SharedRandomness(target_seed);
        double mu = sigma * std_normal_quantile(mu_rng.uniform());
        auto rng = SharedRandomness::substream(target_seed, 1 + trial_index);
        EncodeSummary& row = rows[i];
        auto spec = GaussianChannelSpec::scalar_mean(1, rho2, sigma * sigma, sigma * sigma, mu);
        row.kl_bits = divergences(spec).kl_nats / kLn2;
        try {
            auto enc = encode(mu, chain, rng);
            row.k = double(enc.k);
            row.k_int = enc.k;
            row.neg_log2_bound = enc.diagnostics.neg_log2_bound;
        } catch (const std::exception&) {
            row.failed = true;
        }
    });
    return rows;
}

}  // namespace

std::string run_agrs_runtime_sweep(const SweepConfig& cfg) {
    if (cfg.mode == RunMode::grs) {
        throw std::invalid_argument("runtime sweep needs an agrs mode");
    }
    if (cfg.sigma_grid.empty()) throw std::invalid_argument("runtime sweep needs a sigma grid");
    double rho2 = cfg.rho * cfg.rho;

    std::ostringstream out;
    out << "# columns: row_type (target | sigma-mean | error), sigma (prior stddev), kld (bits), "
           "num_iter (mean samples), se (standard error of num_iter), trials (count)\n";
    out << "row_type,sigma,kld,num_iter,se,trials\n";
    for (std::size_t si = 0; si < cfg.sigma_grid.size(); ++si) {
        double sigma = cfg.sigma_grid[si];
        ReferenceChain chain(rho2, sigma * sigma, width_mode_of(cfg.mode));
        uint64_t sigma_seed = SharedRandomness::substream_seed(cfg.seed, si);
        auto rows =
            run_codec_block(chain, sigma, sigma_seed, cfg.targets, cfg.trials, cfg.threads);

        std::vector<double> all_k;
        all_k.reserve(rows.size());
        double kl_sum = 0.0;
        int ok_targets = 0;
        for (int t = 0; t < cfg.targets; ++t) {
            std::vector<double> ks;
            ks.reserve(std::size_t(cfg.trials));
            double kl_bits = 0.0;
            bool failed = false;
            for (int j = 0; j < cfg.trials; ++j) {
                const auto& row = rows[std::size_t(t) * std::size_t(cfg.trials) + std::size_t(j)];
                kl_bits = row.kl_bits;
                if (row.failed) failed = true;
                ks.push_back(row.k);
            }
            if (failed) {
                out << "error," << format_double(sigma) << ',' << format_double(kl_bits)
                    << ",,," << format_int(cfg.trials) << '\n';
                continue;
            }
            auto ms = mean_se(ks);
            out << "target," << format_double(sigma) << ',' << format_double(kl_bits) << ','
                << format_double(ms.mean) << ',' << format_double(ms.se) << ','
                << format_int(cfg.trials) << '\n';
            all_k.insert(all_k.end(), ks.begin(), ks.end());
            kl_sum += kl_bits;
            ++ok_targets;
        }
        if (ok_targets > 0) {
            auto ms = mean_se(all_k);
            out << "sigma-mean," << format_double(sigma) << ','
                << format_double(kl_sum / ok_targets) << ',' << format_double(ms.mean) << ','
                << format_double(ms.se) << ',' << format_int(int(all_k.size())) << '\n';
        }
    }
    return out.str();
}

std::string run_coding_cost(const SweepConfig& cfg) {
    if (cfg.mode == RunMode::grs) {
        throw std::invalid_argument("coding-cost sweep needs an agrs mode");
    }
    if (cfg.sigma_grid.empty()) throw std::invalid_argument("coding-cost sweep needs a sigma grid");
    double rho2 = cfg.rho * cfg.rho;

    std::ostringstream out;
    out << "# columns: info (bits, I[X;mu]), bound (bits, mean -log2 P(B_K)), index (bits, "
           "plug-in H[K]), sum (bits, bound + index)\n";
    out << "info,bound,index,sum\n";
    for (std::size_t si = 0; si < cfg.sigma_grid.size(); ++si) {
        double sigma = cfg.sigma_grid[si];
        ReferenceChain chain(rho2, sigma * sigma, width_mode_of(cfg.mode));
        uint64_t sigma_seed = SharedRandomness::substream_seed(cfg.seed, si);
        auto rows = run_codec_block(chain, sigma, sigma_seed, 1, cfg.trials, cfg.threads);

        double info =
            divergences(GaussianChannelSpec::scalar_mean(1, rho2, sigma * sigma, sigma * sigma, 0.0))
                .mutual_info_bits;
        std::vector<std::size_t> ks;
        double bound_sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : rows) {
            if (row.failed) continue;
            ks.push_back(row.k_int);
            bound_sum += row.neg_log2_bound;
            ++n;
        }
        if (n == 0) continue;
        double bound = bound_sum / double(n);
        double index = plugin_entropy_bits(ks);
        out << format_double(info) << ',' << format_double(bound) << ',' << format_double(index)
            << ',' << format_double(bound + index) << '\n';
    }
    return out.str();
}

namespace {

struct TraceStats {
    std::vector<double> ks;
    std::vector<double> ln_ks;
    std::vector<std::size_t> k_hist;
    double mean_ln_bound_at_min = 0.0;  // mean ln P(B_{m_K})
    bool survival_ok = true;
};

template <class RunFn>
TraceStats collect_traces(int trials, int threads, RunFn&& run) {
    TraceStats stats;
    stats.ks.resize(std::size_t(trials));
    stats.ln_ks.resize(std::size_t(trials));
    stats.k_hist.resize(std::size_t(trials));
    std::vector<double> ln_bound(std::size_t(trials), 0.0);
    std::vector<uint8_t> ok(std::size_t(trials), 1);
    parallel_for(std::size_t(trials), threads, [&](std::size_t i) {
        SamplerTrace trace = run(i);
        stats.ks[i] = double(trace.accepted_index);
        stats.ln_ks[i] = std::log(double(trace.accepted_index));
        stats.k_hist[i] = trace.accepted_index;
        ln_bound[i] = trace.log_bound_mass_at_min();
        ok[i] = survival_bound_check(trace) ? 1 : 0;
    });
    for (std::size_t i = 0; i < ln_bound.size(); ++i) {
        stats.mean_ln_bound_at_min += ln_bound[i];
        if (!ok[i]) stats.survival_ok = false;
    }
    stats.mean_ln_bound_at_min /= double(trials);
    return stats;
}

void add_check(VerifyReport& report, const std::string& name, double expected, double observed,
               double tolerance, bool pass) {
    report.checks.push_back({name, expected, observed, tolerance, pass});
    if (!pass) report.all_pass = false;
}

void add_runtime_checks(VerifyReport& report, const std::string& prefix, const TraceStats& stats,
                        double sup_ratio, double kl_nats) {
    auto mk = mean_se(stats.ks);
    add_check(report, prefix + ".mean_k_equals_exp_dinf", sup_ratio, mk.mean, 3.0 * mk.se,
              std::fabs(mk.mean - sup_ratio) <= 3.0 * mk.se);

    auto ml = mean_se(stats.ln_ks);
    double code_bound = kl_nats + 1.0 + kLn2;
    add_check(report, prefix + ".codelength_bound_nats", code_bound, ml.mean, 3.0 * ml.se,
              ml.mean <= code_bound + 3.0 * ml.se);

    double c = kl_nats + stats.mean_ln_bound_at_min;
    double entropy_bound = c + std::log(c + 1.0) + 3.63;
    double h_nats = plugin_entropy_bits(stats.k_hist) * kLn2;
    add_check(report, prefix + ".index_entropy_bound_nats", entropy_bound, h_nats, 0.0,
              h_nats <= entropy_bound);

    add_check(report, prefix + ".survival_bound", 1.0, stats.survival_ok ? 1.0 : 0.0, 0.0,
              stats.survival_ok);
}

}  // namespace

VerifyReport verify_theorems(uint64_t seed, int trials, int threads) {
    VerifyReport report;
    if (trials < 100) throw std::invalid_argument("verify needs at least 100 trials");

    // Two-point discrete instance: Q = (0.9, 0.1) against P = (0.5, 0.5).
    DiscretePair two_point({0.9, 0.1}, {0.5, 0.5});
    uint64_t seed_a = SharedRandomness::substream_seed(seed, 1);
    auto stats_a = collect_traces(trials, threads, [&](std::size_t i) {
        auto rng = SharedRandomness::substream(seed_a, i);
        return agrs_sample(two_point, BoundsSchedule::unrestricted(), rng).trace;
    });
    add_runtime_checks(report, "two_point_grs", stats_a, two_point.sup_ratio(),
                       two_point.kl_nats());

    // Gaussian d=1 instance: mu=1, rho2=1, proposal variance 4.
    auto gspec = GaussianChannelSpec::scalar_mean(1, 1.0, 1.0, 3.0, 1.0);
    GaussianPair gpair(gspec);
    uint64_t seed_b = SharedRandomness::substream_seed(seed, 2);
    auto stats_b = collect_traces(trials, threads, [&](std::size_t i) {
        auto rng = SharedRandomness::substream(seed_b, i);
        return agrs_sample(gpair, BoundsSchedule::unrestricted(), rng).trace;
    });
    add_runtime_checks(report, "gaussian_1d_grs", stats_b, expected_runtime_given_mu(gspec),
                       divergences(gspec).kl_nats);

    // Q = P sanity: the sampler must stop at the first step.
    DiscretePair equal({0.25, 0.75}, {0.25, 0.75});
    uint64_t seed_c = SharedRandomness::substream_seed(seed, 3);
    std::vector<uint8_t> first(std::size_t(std::min(trials, 10000)), 0);
    parallel_for(first.size(), threads, [&](std::size_t i) {
        auto rng = SharedRandomness::substream(seed_c, i);
        first[i] = agrs_sample(equal, BoundsSchedule::unrestricted(), rng).index == 1;
    });
    bool all_first = true;
    for (uint8_t b : first) all_first = all_first && b;
    add_check(report, "equal_pair.k_is_one", 1.0, all_first ? 1.0 : 0.0, 0.0, all_first);

    // Recursive/iterative equivalence under shared streams.
    int eq_trials = std::min(trials, 10000);
    uint64_t seed_d = SharedRandomness::substream_seed(seed, 4);
    std::vector<uint8_t> same(std::size_t(eq_trials) * 2, 0);
    parallel_for(std::size_t(eq_trials), threads, [&](std::size_t i) {
        auto rng1 = SharedRandomness::substream(seed_d, i);
        auto rng2 = SharedRandomness::substream(seed_d, i);
        auto it = agrs_sample(two_point, BoundsSchedule::unrestricted(), rng1);
        auto rec = agrs_sample_recursive(two_point, BoundsSchedule::unrestricted(), rng2);
        same[2 * i] = it.index == rec.index && it.sample == rec.sample;
        auto rng3 = SharedRandomness::substream(seed_d, i + std::size_t(eq_trials));
        auto rng4 = SharedRandomness::substream(seed_d, i + std::size_t(eq_trials));
        auto git = agrs_sample(gpair, BoundsSchedule::unrestricted(), rng3);
        auto grec = agrs_sample_recursive(gpair, BoundsSchedule::unrestricted(), rng4);
        same[2 * i + 1] = git.index == grec.index && git.sample == grec.sample;
    });
    bool equivalent = true;
    for (uint8_t b : same) equivalent = equivalent && b;
    add_check(report, "recursive_iterative_equivalence", 1.0, equivalent ? 1.0 : 0.0, 0.0,
              equivalent);

    // RCC-style index entropy bound for the 1D AGRS codec: H[K] against
    // C + ln(C + 1) + 3.63 with C = I[X;mu] + E[ln P(B_{m_K})].
    {
        double sigma = 3.0, rho2 = 1.0;
        ReferenceChain chain(rho2, sigma * sigma, WidthMode::rational);
        uint64_t seed_e = SharedRandomness::substream_seed(seed, 5);
        int codec_trials = std::min(trials, 20000);
        std::vector<std::size_t> ks(std::size_t(codec_trials), 0);
        std::vector<double> ln_bound(std::size_t(codec_trials), 0.0);
        parallel_for(ks.size(), threads, [&](std::size_t i) {
            auto rng = SharedRandomness::substream(seed_e, i);
            double mu = sigma * std_normal_quantile(rng.uniform());
            auto enc = encode(mu, chain, rng);
            ks[i] = enc.k;
            ln_bound[i] = enc.trace.log_bound_mass_at_min();
        });
        double mean_ln_bound = 0.0;
        for (double v : ln_bound) mean_ln_bound += v;
        mean_ln_bound /= double(codec_trials);
        double info_nats =
            divergences(GaussianChannelSpec::scalar_mean(1, rho2, sigma * sigma, sigma * sigma, 0.0))
                .mutual_info_bits *
            kLn2;
        double c = info_nats + mean_ln_bound;
        double bound = c + std::log(c + 1.0) + 3.63;
        double h_nats = plugin_entropy_bits(ks) * kLn2;
        add_check(report, "agrs_codec.index_entropy_bound_nats", bound, h_nats, 0.0,
                  h_nats <= bound);
    }

    return report;
}

std::string verify_report_json(const VerifyReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"check_name", c.name},
                          {"expected", c.expected},
                          {"observed", c.observed},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    nlohmann::json root = {{"checks", checks}, {"all_pass", report.all_pass}};
    return root.dump(2) + "\n";
}

}  // namespace agrs
