#ifndef AGRS_EXPERIMENTS_HPP
#define AGRS_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace agrs {

// Deterministic parallel loop: every index owns a slot, so results are
// independent of the thread count and schedule.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

enum class RunMode { grs, agrs, agrs_int };

RunMode parse_run_mode(const std::string& name);  // "grs" | "agrs" | "agrs-int"

struct SweepConfig {
    RunMode mode = RunMode::agrs;
    int d = 1;
    double rho = 1.0;
    double sigma = 3.0;              // overdispersion sweep
    std::vector<double> s_grid;      // overdispersion sweep (values of s)
    std::vector<double> sigma_grid;  // runtime / coding-cost sweeps
    int trials = 400;                // per point (per target for runtime)
    int targets = 50;                // targets per sigma (runtime sweep)
    uint64_t seed = 0x5EED;
    int threads = 1;
};

// Fig-1A style sweep: analytic prior-averaged runtime and KL per s, the
// marked optimum row, and a Monte Carlo confirmation at the optimum.
std::string run_overdispersion_sweep(const SweepConfig& cfg);

// Fig-1B style sweep: per-target (KL bits, mean K) rows plus a per-sigma
// mean row, 1D Gaussian AGRS codec.
std::string run_agrs_runtime_sweep(const SweepConfig& cfg);

// Fig-1C style sweep: per sigma, info/bound/index/sum in bits.
std::string run_coding_cost(const SweepConfig& cfg);

struct VerifyCheck {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass = true;
};

// Built-in theorem checks: exact GRS runtime, codelength bound, index
// entropy bound, survival bounds, recursive/iterative equivalence.
VerifyReport verify_theorems(uint64_t seed, int trials, int threads);

std::string verify_report_json(const VerifyReport& report);

// Shortest-roundtrip decimal formatting used for all CSV output.
std::string format_double(double v);

}  // namespace agrs

#endif
