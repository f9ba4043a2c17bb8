#ifndef AGRS_STATS_HPP
#define AGRS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace agrs {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("mean_se: need at least two samples");
    MeanSe out;
    out.n = xs.size();
    for (double x : xs) out.mean += x;
    out.mean /= double(out.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / double(out.n - 1) / double(out.n));
    return out;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        double diff = std::fabs(double(i) / double(a.size()) - double(j) / double(b.size()));
        d = std::max(d, diff);
    }
    return d;
}

// One-sample KS statistic against a CDF callable.
template <class Cdf>
inline double one_sample_ks(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max(d, std::fabs(f - double(i) / double(xs.size())));
        d = std::max(d, std::fabs(double(i + 1) / double(xs.size()) - f));
    }
    return d;
}

// Asymptotic KS critical values, c(alpha) = sqrt(-ln(alpha/2) / 2).
inline double ks_critical_two_sample(double alpha, std::size_t n, std::size_t m) {
    double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

inline double ks_critical_one_sample(double alpha, std::size_t n) {
    double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(double(n));
}

// Plug-in entropy (in bits) of an integer-valued sample.
inline double plugin_entropy_bits(const std::vector<std::size_t>& values) {
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t v : values) ++counts[v];
    double h = 0.0;
    double n = double(values.size());
    for (const auto& [v, c] : counts) {
        double p = double(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

// Plug-in conditional entropy H[N | K] in nats from paired observations.
inline double plugin_conditional_entropy_nats(const std::vector<std::size_t>& k,
                                              const std::vector<long long>& n) {
    std::map<std::size_t, std::map<long long, std::size_t>> by_k;
    for (std::size_t i = 0; i < k.size(); ++i) ++by_k[k[i]][n[i]];
    double h = 0.0;
    double total = double(k.size());
    for (const auto& [kv, hist] : by_k) {
        double nk = 0.0;
        for (const auto& [nv, c] : hist) nk += double(c);
        double hk = 0.0;
        for (const auto& [nv, c] : hist) {
            double p = double(c) / nk;
            hk -= p * std::log(p);
        }
        h += nk / total * hk;
    }
    return h;
}

}  // namespace agrs

#endif
