#ifndef AGRS_BBQ_HPP
#define AGRS_BBQ_HPP

#include <cstdint>
#include <cstddef>
#include <vector>

#include "agrs/random.hpp"

namespace agrs {

// Arbitrary-precision nonnegative integer used as a bits-back stack. Mixed
// -radix push/pop are exact: push(m, n) maps value -> value * m + n and
// pop(m) is its inverse. The nominal bit account grows by log2(m) on a
// push and shrinks by log2(m) on a pop.
class MessageRegister {
  public:
    MessageRegister() = default;

    static MessageRegister from_value(uint64_t value);
    static MessageRegister random_bits(std::size_t bits, SharedRandomness& rng);

    void push(uint32_t base, uint32_t symbol);
    uint32_t pop(uint32_t base);

    // Pads the low end with random bits when the register runs short of
    // entropy; the pad count is recorded.
    void ensure_bits(std::size_t bits, SharedRandomness& rng);

    std::size_t bit_length() const;
    bool is_zero() const { return limbs_.empty(); }
    double nominal_bits() const { return nominal_bits_; }
    std::size_t padded_bits() const { return padded_bits_; }

    bool operator==(const MessageRegister& o) const { return limbs_ == o.limbs_; }

    // Big-endian byte string of the value, prefixed with a 32-bit
    // big-endian byte count.
    std::vector<uint8_t> serialize() const;
    static MessageRegister deserialize(const std::vector<uint8_t>& bytes, std::size_t* offset);

  private:
    std::vector<uint32_t> limbs_;  // little-endian, no leading zero limbs
    double nominal_bits_ = 0.0;
    std::size_t padded_bits_ = 0;

    void trim();
};

// Window kappa + [0, a/b) inside [0, 1), with rational mass a/b.
struct RationalWindow {
    double kappa = 0.0;
    uint32_t a = 1;
    uint32_t b = 1;

    RationalWindow(double kappa_, uint32_t a_, uint32_t b_);
    double mass() const { return double(a) / double(b); }
};

struct BbqEncodeResult {
    double y = 0.0;       // sample in kappa + (0, a/b]
    uint32_t n = 0;       // transmitted digit, in [0, b-1]
    uint32_t index = 0;   // window replica popped from the register
    double net_bits = 0.0;  // log2(b) - log2(a)
};

// Pops I ~ U[0:a-1] from the register, quantizes the dithered offset, and
// pushes the transmitted digit N back; the register's nominal account
// grows by exactly log2(b) - log2(a).
BbqEncodeResult bbq_encode(MessageRegister& msg, const RationalWindow& win, double dither);

struct BbqDecodeResult {
    double y = 0.0;
    uint32_t n = 0;
    uint32_t index = 0;
};

// Inverse of bbq_encode given the same (a, b, dither); restores the
// register to its pre-encode value exactly. The decoder never sees kappa.
BbqDecodeResult bbq_decode(MessageRegister& msg, uint32_t a, uint32_t b, double dither);

// Best rational a/b >= w with b <= max_denominator (Stern-Brocot walk).
// Never returns a fraction below w, so bounds derived from it can only
// widen.
struct Rational {
    uint32_t a = 1;
    uint32_t b = 1;
    double value() const { return double(a) / double(b); }
};

Rational rationalize_width_above(double w, uint32_t max_denominator);

}  // namespace agrs

#endif
