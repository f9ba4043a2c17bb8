#ifndef AGRS_CHAIN_HPP
#define AGRS_CHAIN_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace agrs {

// How the shared bound widths are made rational. `rational` uses the
// tightest fraction a/b >= w with b <= 2^16 (bits-back codable);
// `integer_reciprocal` widens to 1/floor(1/w) so 1/P(B_k) is an integer
// and the digit can be sent in a fixed-radix field.
enum class WidthMode { rational, integer_reciprocal };

struct ChainStep {
    double ref_lo = 0.0;     // Phi-space interval of the reference
    double ref_hi = 1.0;     // superlevel set H0_{k-1}
    double raw_width = 1.0;  // |Phi(H0_{k-1})|
    uint64_t a = 1;          // bound width as a fraction a/b >= raw_width;
    uint64_t b = 1;          // b <= 2^16 in rational mode
    double width = 1.0;      // double(a) / double(b)
    double level = 0.0;      // L0_k, after this step
    double survival = 1.0;   // S0_k, entering this step
};

struct ChainConfig {
    std::size_t max_steps = 4096;
    double width_floor = 1e-13;
    double survival_floor = 1e-250;
};

// Deterministic zero-mean level/survival recursion for target N(0, rho2)
// against proposal N(0, sigma2 + rho2), with bounds equal to the previous
// superlevel set widened per the width mode. Encoder and decoder build it
// from the same parameters, so the bound masses P(B_k) are shared without
// communication.
class ReferenceChain {
  public:
    ReferenceChain(double rho2, double sigma2, WidthMode mode, const ChainConfig& cfg = {});

    std::size_t size() const { return steps_.size(); }
    const ChainStep& step(std::size_t k) const;  // 1-based

    double rho2() const { return rho2_; }
    double sigma2() const { return sigma2_; }
    double proposal_variance() const { return rho2_ + sigma2_; }
    WidthMode mode() const { return mode_; }

    // True when max_steps was reached before the width floor.
    bool truncated() const { return truncated_; }

  private:
    double rho2_;
    double sigma2_;
    WidthMode mode_;
    bool truncated_ = false;
    std::vector<ChainStep> steps_;
};

inline ReferenceChain build_reference_chain(double rho2, double sigma2, WidthMode mode,
                                            std::size_t max_steps) {
    ChainConfig cfg;
    cfg.max_steps = max_steps;
    return ReferenceChain(rho2, sigma2, mode, cfg);
}

}  // namespace agrs

#endif
