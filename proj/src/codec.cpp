#include "agrs/codec.hpp"

#include <cmath>
#include <stdexcept>

#include "agrs/gaussian.hpp"
#include "agrs/specfun.hpp"

namespace agrs {

void BitWriter::put_bit(int bit) {
    if (bit_count_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= uint8_t(0x80u >> (bit_count_ % 8));
    ++bit_count_;
}

void BitWriter::put_bits(uint64_t value, int count) {
    for (int i = count - 1; i >= 0; --i) put_bit(int((value >> i) & 1u));
}

void BitWriter::put_bytes(const std::vector<uint8_t>& bytes) {
    for (uint8_t b : bytes) put_bits(b, 8);
}

int BitReader::get_bit() {
    if (pos_ >= bytes_.size() * 8) throw std::runtime_error("decode error: bitstream exhausted");
    int bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
    ++pos_;
    return bit;
}

uint64_t BitReader::get_bits(int count) {
    uint64_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | uint64_t(get_bit());
    return v;
}

std::vector<uint8_t> BitReader::get_byte_block(std::size_t count) {
    std::vector<uint8_t> out(count);
    for (auto& b : out) b = uint8_t(get_bits(8));
    return out;
}

void elias_delta_encode(uint64_t value, BitWriter& w) {
    if (value == 0) throw std::invalid_argument("elias_delta_encode: value must be positive");
    int len = 63;
    while (!((value >> len) & 1u)) --len;  // len = floor(log2 value)
    uint64_t len_code = uint64_t(len) + 1;
    int len_len = 63;
    while (!((len_code >> len_len) & 1u)) --len_len;
    for (int i = 0; i < len_len; ++i) w.put_bit(0);
    w.put_bits(len_code, len_len + 1);
    if (len > 0) w.put_bits(value & ((uint64_t(1) << len) - 1), len);
}

uint64_t elias_delta_decode(BitReader& r) {
    int len_len = 0;
    while (r.get_bit() == 0) {
        if (++len_len > 63) throw std::runtime_error("decode error: bad Elias-delta prefix");
    }
    uint64_t len_code = 1;
    for (int i = 0; i < len_len; ++i) len_code = (len_code << 1) | uint64_t(r.get_bit());
    int len = int(len_code) - 1;
    uint64_t value = 1;
    for (int i = 0; i < len; ++i) value = (value << 1) | uint64_t(r.get_bit());
    return value;
}

std::size_t elias_delta_length(uint64_t value) {
    if (value == 0) throw std::invalid_argument("elias_delta_length: value must be positive");
    std::size_t len = 0;
    while (value >> (len + 1)) ++len;
    std::size_t len_len = 0;
    while ((len + 1) >> (len_len + 1)) ++len_len;
    return len + 2 * len_len + 1;
}

double choose_offset(double target_lo, double target_hi, double width) {
    double target_width = target_hi - target_lo;
    if (target_width > width + 1e-12) {
        throw std::runtime_error("containment violation: target interval wider than the bound");
    }
    double center = 0.5 * (target_lo + target_hi);
    double half = 0.5 * width;
    if (center < half) center = half;
    if (center > 1.0 - half) center = 1.0 - half;
    if (target_lo < center - half - 1e-12 || target_hi > center + half + 1e-12) {
        throw std::runtime_error("window overflow: clamped window cannot cover the target");
    }
    return center - 0.5;
}

DqCandidate dq_candidate(double offset, double width, double dither, double proposal_variance) {
    DqCandidate out;
    double center = 0.5 + offset;
    out.n = (long long)(std::floor(center / width - dither + 0.5));
    out.y = (double(out.n) + dither) * width;
    if (!(out.y > 0.0) || !(out.y < 1.0)) {
        throw std::runtime_error("window overflow: quantized point left the unit interval");
    }
    out.x = std::sqrt(proposal_variance) * std_normal_quantile(out.y);
    return out;
}

MessageRegister CodecConfig::default_register() {
    SharedRandomness rng(0x1B17B5ACC0DEULL);
    return MessageRegister::random_bits(256, rng);
}

namespace {

int ceil_log2(uint64_t b) {
    int bits = 0;
    while ((uint64_t(1) << bits) < b) ++bits;
    return bits;
}

// Smallest digit with (n + V) * w in [0, 1) at window position 0.
long long n_min_for(double dither) { return dither < 0.0 ? 1 : 0; }

// Per-target state for the 1D chain recursion. Shares ratio_params and the
// radius formula with the chain builder, so at mu = 0 the superlevel
// intervals match the reference chain bitwise.
struct Target1D {
    RatioParams params;
    double mu;
    double rho;
    double sqrt_t;
    double log_norm;  // (1/2) ln(2 pi kappa2)

    Target1D(double mu_, const ReferenceChain& chain)
        : params(ratio_params(GaussianChannelSpec::scalar_mean(1, chain.rho2(), chain.sigma2(),
                                                               chain.sigma2(), mu_))),
          mu(mu_),
          rho(std::sqrt(chain.rho2())),
          sqrt_t(std::sqrt(chain.proposal_variance())),
          log_norm(0.5 * std::log(2.0 * M_PI * params.kappa2)) {}

    double ratio(double x) const {
        double d = x - params.nu[0];
        return std::exp(params.log_zeta - log_norm - d * d / (2.0 * params.kappa2));
    }

    struct LevelSet {
        Bound phi;
        double radius = 0.0;
        bool empty = true;
    };

    LevelSet level_set(double level) const {
        LevelSet out;
        double r2 = superlevel_radius_sq(level, params, 1);
        if (r2 <= 0.0) {
            double c = std_normal_cdf(params.nu[0] / sqrt_t);
            out.phi = Bound{c, c};
            return out;
        }
        out.radius = std::sqrt(r2);
        out.empty = false;
        out.phi = Bound{std_normal_cdf((params.nu[0] - out.radius) / sqrt_t),
                        std_normal_cdf((params.nu[0] + out.radius) / sqrt_t)};
        return out;
    }

    // Q mass of the interval [nu - r, nu + r] under N(mu, rho2).
    double target_mass(double radius) const {
        return std_normal_cdf((params.nu[0] + radius - mu) / rho) -
               std_normal_cdf((params.nu[0] - radius - mu) / rho);
    }
};

}  // namespace

EncodedSample encode(double mu, const ReferenceChain& chain, SharedRandomness& rng,
                     const CodecConfig& cfg) {
    Target1D target(mu, chain);
    const bool rational = chain.mode() == WidthMode::rational;

    EncodedSample out;
    MessageRegister reg = cfg.initial_register;
    double level = 0.0;
    double survival = 1.0;
    Bound h_prev{};  // Phi(H_{k-1}), starts as the whole interval

    for (std::size_t k = 1; k <= chain.size() && k <= cfg.sampler.max_steps; ++k) {
        const ChainStep& cs = chain.step(k);
        double w = cs.width;
        if (h_prev.width() > w + 1e-12) {
            throw std::runtime_error("containment violation: superlevel set wider than bound");
        }
        double offset = choose_offset(h_prev.phi_lo, h_prev.phi_hi, w);
        double win_lo = 0.5 + offset - 0.5 * w;
        double win_hi = 0.5 + offset + 0.5 * w;
        if (h_prev.phi_lo < win_lo - 1e-12 || h_prev.phi_hi > win_hi + 1e-12) {
            throw std::runtime_error("containment violation: window misses the superlevel set");
        }

        double dither = rng.dither();
        long long n = 0;
        double y = 0.0;
        MessageRegister snapshot;
        if (rational) {
            snapshot = reg;
            double kappa = win_lo < 0.0 ? 0.0 : win_lo;
            if (kappa > 1.0 - w) kappa = 1.0 - w;
            auto enc = bbq_encode(reg, RationalWindow(kappa, uint32_t(cs.a), uint32_t(cs.b)), dither);
            n = enc.n;
            y = enc.y;
            if (!(y > 0.0) || !(y < 1.0)) {
                throw std::runtime_error("window overflow: quantized point left the unit interval");
            }
        } else {
            auto cand = dq_candidate(offset, w, dither, chain.proposal_variance());
            n = cand.n;
            y = cand.y;
        }
        double x = target.sqrt_t * std_normal_quantile(y);

        double u = rng.uniform();
        double beta = acceptance_prob(target.ratio(x), level, survival, w);
        detail::note_survival_ratio(out.trace, k, survival, w);

        double next_level = level + survival / w;
        auto h_next = target.level_set(next_level);
        double p_mass = h_next.empty ? 0.0 : h_next.phi.width();
        double q_mass = h_next.empty ? 0.0 : target.target_mass(h_next.radius);
        double next_survival = q_mass - next_level * p_mass;
        if (next_survival < -1e-12) throw std::runtime_error("mass inconsistency");
        if (next_survival < 0.0) next_survival = 0.0;

        StepRecord rec;
        rec.survival = survival;
        rec.beta = beta;
        rec.bound_mass = w;
        rec.level = next_level;
        rec.level_mass_q = q_mass;
        rec.level_mass_p = p_mass;
        out.trace.steps.push_back(rec);

        if (u <= beta) {
            out.k = k;
            out.n = n;
            out.x = x;
            out.trace.accepted_index = k;
            out.trace.final_survival = next_survival;

            BitWriter writer;
            elias_delta_encode(uint64_t(k), writer);
            out.diagnostics.k_bits = writer.bit_count();
            if (rational) {
                writer.put_bytes(reg.serialize());
                out.diagnostics.n_bits = std::log2(double(cs.b)) - std::log2(double(cs.a));
            } else {
                int bits = ceil_log2(cs.b);
                long long field = n - n_min_for(dither);
                if (field < 0 || field >= (long long)(cs.b)) {
                    throw std::logic_error("encode: fixed-radix digit out of range");
                }
                writer.put_bits(uint64_t(field), bits);
                out.diagnostics.n_bits = double(bits);
            }
            out.diagnostics.neg_log2_bound = -std::log2(w);
            out.diagnostics.dither_at_accept = dither;
            out.diagnostics.payload_bits = writer.bit_count();
            out.bytes = writer.bytes();
            out.bit_count = writer.bit_count();
            return out;
        }

        if (rational) reg = snapshot;
        if (next_survival <= cfg.sampler.survival_floor) {
            throw std::runtime_error("survival underflow");
        }
        level = next_level;
        survival = next_survival;
        h_prev = h_next.phi;
    }
    if (chain.size() < cfg.sampler.max_steps) {
        throw std::runtime_error("chain truncated: sampler outran the reference chain");
    }
    throw std::runtime_error("iteration cap");
}

DecodeResult decode(const std::vector<uint8_t>& bytes, const ReferenceChain& chain,
                    SharedRandomness& rng) {
    BitReader reader(bytes);
    DecodeResult out;
    out.k = std::size_t(elias_delta_decode(reader));
    if (out.k == 0 || out.k > chain.size()) throw std::runtime_error("decode error: bad index");

    // Replay exactly what the encoder consumed: one dither then one
    // acceptance uniform per step.
    double dither = 0.0;
    for (std::size_t i = 1; i <= out.k; ++i) {
        dither = rng.dither();
        rng.uniform();
    }

    const ChainStep& cs = chain.step(out.k);
    double y;
    if (chain.mode() == WidthMode::rational) {
        std::size_t count = reader.get_bits(32);
        if (count > bytes.size()) throw std::runtime_error("decode error: truncated register");
        std::vector<uint8_t> framed;
        framed.reserve(4 + count);
        framed.push_back(uint8_t(count >> 24));
        framed.push_back(uint8_t(count >> 16));
        framed.push_back(uint8_t(count >> 8));
        framed.push_back(uint8_t(count));
        auto block = reader.get_byte_block(count);
        framed.insert(framed.end(), block.begin(), block.end());
        std::size_t offset = 0;
        MessageRegister reg = MessageRegister::deserialize(framed, &offset);
        auto dec = bbq_decode(reg, uint32_t(cs.a), uint32_t(cs.b), dither);
        out.n = dec.n;
        y = dec.y;
        out.recovered_register = reg;
    } else {
        int bits = ceil_log2(cs.b);
        long long field = (long long)(reader.get_bits(bits));
        out.n = field + n_min_for(dither);
        y = (double(out.n) + dither) * cs.width;
    }
    if (!(y > 0.0) || !(y < 1.0)) throw std::runtime_error("decode error: sample off the window");
    out.x = std::sqrt(chain.proposal_variance()) * std_normal_quantile(y);
    return out;
}

}  // namespace agrs
