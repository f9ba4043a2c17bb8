#ifndef AGRS_CODEC_HPP
#define AGRS_CODEC_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "agrs/bbq.hpp"
#include "agrs/chain.hpp"
#include "agrs/random.hpp"
#include "agrs/sampler.hpp"

namespace agrs {

// MSB-first bit packing; the byte vector is zero-padded at the end and the
// unpadded bit count is tracked separately.
class BitWriter {
  public:
    void put_bit(int bit);
    void put_bits(uint64_t value, int count);  // big-endian within the field
    void put_bytes(const std::vector<uint8_t>& bytes);

    const std::vector<uint8_t>& bytes() const { return bytes_; }
    std::size_t bit_count() const { return bit_count_; }

  private:
    std::vector<uint8_t> bytes_;
    std::size_t bit_count_ = 0;
};

class BitReader {
  public:
    explicit BitReader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}

    int get_bit();
    uint64_t get_bits(int count);
    std::vector<uint8_t> get_byte_block(std::size_t count);
    std::size_t position() const { return pos_; }

  private:
    const std::vector<uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

// Elias-delta code for positive integers; prefix-free, length
// floor(log2 K) + 2 floor(log2(floor(log2 K) + 1)) + 1 bits.
void elias_delta_encode(uint64_t value, BitWriter& w);
uint64_t elias_delta_decode(BitReader& r);
std::size_t elias_delta_length(uint64_t value);

// Window placement: returns the shift c of the reference window (which
// sits centered at 1/2) so that the shifted window covers the target
// interval and stays inside [0, 1); centered on the target, then clamped.
double choose_offset(double target_lo, double target_hi, double width);

// Appendix-style dithered quantization candidate for a window of width w
// centered at 1/2 + offset. Used in integer mode; rational mode goes
// through bbq_encode instead.
struct DqCandidate {
    long long n = 0;
    double y = 0.0;  // in (0, 1)
    double x = 0.0;  // proposal sample, sqrt(T) * Phi^-1(y)
};

DqCandidate dq_candidate(double offset, double width, double dither, double proposal_variance);

struct EncodeDiagnostics {
    std::size_t k_bits = 0;        // Elias-delta length of K
    double n_bits = 0.0;           // ceil(log2 b) or the bits-back net log2(b/a)
    double neg_log2_bound = 0.0;   // -log2 P(B_K)
    double dither_at_accept = 0.0;
    std::size_t payload_bits = 0;  // total stream bits before byte padding
};

struct EncodedSample {
    std::size_t k = 0;
    long long n = 0;
    double x = 0.0;
    std::vector<uint8_t> bytes;
    std::size_t bit_count = 0;
    EncodeDiagnostics diagnostics;
    SamplerTrace trace;
};

struct CodecConfig {
    SamplerConfig sampler;
    // Bits-back stack the encoder starts from in rational mode; the
    // decoder recovers it exactly. Tests rely on the default being a
    // fixed 256-bit register.
    MessageRegister initial_register = default_register();

    static MessageRegister default_register();
};

EncodedSample encode(double mu, const ReferenceChain& chain, SharedRandomness& rng,
                     const CodecConfig& cfg = {});

struct DecodeResult {
    double x = 0.0;
    std::size_t k = 0;
    long long n = 0;
    MessageRegister recovered_register;  // rational mode only
};

DecodeResult decode(const std::vector<uint8_t>& bytes, const ReferenceChain& chain,
                    SharedRandomness& rng);

}  // namespace agrs

#endif
