#include "agrs/bbq.hpp"

#include <cmath>
#include <stdexcept>

namespace agrs {

MessageRegister MessageRegister::from_value(uint64_t value) {
    MessageRegister out;
    if (value != 0) out.limbs_.push_back(uint32_t(value & 0xFFFFFFFFu));
    if (value >> 32) out.limbs_.push_back(uint32_t(value >> 32));
    return out;
}

MessageRegister MessageRegister::random_bits(std::size_t bits, SharedRandomness& rng) {
    MessageRegister out;
    std::size_t limbs = (bits + 31) / 32;
    out.limbs_.resize(limbs);
    for (std::size_t i = 0; i < limbs; ++i) out.limbs_[i] = uint32_t(rng.next_u64());
    std::size_t excess = limbs * 32 - bits;
    if (limbs > 0 && excess > 0) out.limbs_.back() >>= excess;
    out.trim();
    return out;
}

void MessageRegister::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

void MessageRegister::push(uint32_t base, uint32_t symbol) {
    if (base == 0 || symbol >= base) throw std::invalid_argument("MessageRegister: bad push");
    uint64_t carry = symbol;
    for (auto& limb : limbs_) {
        uint64_t t = uint64_t(limb) * base + carry;
        limb = uint32_t(t & 0xFFFFFFFFu);
        carry = t >> 32;
    }
    if (carry) limbs_.push_back(uint32_t(carry));
    nominal_bits_ += std::log2(double(base));
}

uint32_t MessageRegister::pop(uint32_t base) {
    if (base == 0) throw std::invalid_argument("MessageRegister: bad pop");
    uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        uint64_t cur = (rem << 32) | limbs_[i];
        limbs_[i] = uint32_t(cur / base);
        rem = cur % base;
    }
    trim();
    nominal_bits_ -= std::log2(double(base));
    return uint32_t(rem);
}

void MessageRegister::ensure_bits(std::size_t bits, SharedRandomness& rng) {
    while (bit_length() < bits) {
        // value = value * 2^32 + fresh, counted as padding rather than as
        // nominal message content.
        limbs_.insert(limbs_.begin(), uint32_t(rng.next_u64()));
        trim();
        padded_bits_ += 32;
    }
}

std::size_t MessageRegister::bit_length() const {
    if (limbs_.empty()) return 0;
    uint32_t top = limbs_.back();
    std::size_t bits = 0;
    while (top) {
        ++bits;
        top >>= 1;
    }
    return bits + 32 * (limbs_.size() - 1);
}

std::vector<uint8_t> MessageRegister::serialize() const {
    std::vector<uint8_t> bytes;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        bytes.push_back(uint8_t(limbs_[i] >> 24));
        bytes.push_back(uint8_t(limbs_[i] >> 16));
        bytes.push_back(uint8_t(limbs_[i] >> 8));
        bytes.push_back(uint8_t(limbs_[i]));
    }
    std::size_t skip = 0;
    while (skip < bytes.size() && bytes[skip] == 0) ++skip;
    std::size_t count = bytes.size() - skip;
    std::vector<uint8_t> out;
    out.reserve(4 + count);
    out.push_back(uint8_t(count >> 24));
    out.push_back(uint8_t(count >> 16));
    out.push_back(uint8_t(count >> 8));
    out.push_back(uint8_t(count));
    out.insert(out.end(), bytes.begin() + long(skip), bytes.end());
    return out;
}

MessageRegister MessageRegister::deserialize(const std::vector<uint8_t>& bytes,
                                             std::size_t* offset) {
    std::size_t pos = offset ? *offset : 0;
    if (pos + 4 > bytes.size()) throw std::runtime_error("decode error: truncated register");
    std::size_t count = (std::size_t(bytes[pos]) << 24) | (std::size_t(bytes[pos + 1]) << 16) |
                        (std::size_t(bytes[pos + 2]) << 8) | std::size_t(bytes[pos + 3]);
    pos += 4;
    if (pos + count > bytes.size()) throw std::runtime_error("decode error: truncated register");
    MessageRegister out;
    out.limbs_.assign((count + 3) / 4, 0);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t bit_index = (count - 1 - i) * 8;
        out.limbs_[bit_index / 32] |= uint32_t(bytes[pos + i]) << (bit_index % 32);
    }
    out.trim();
    pos += count;
    if (offset) *offset = pos;
    return out;
}

RationalWindow::RationalWindow(double kappa_, uint32_t a_, uint32_t b_)
    : kappa(kappa_), a(a_), b(b_) {
    if (a == 0 || b == 0 || a > b) throw std::invalid_argument("RationalWindow: need 1 <= a <= b");
    if (kappa < 0.0 || kappa > 1.0 - double(a) / double(b) + 1e-12) {
        throw std::invalid_argument("RationalWindow: kappa outside [0, 1 - a/b]");
    }
}

namespace {

// round half toward +infinity
inline double round_half_up(double x) { return std::floor(x + 0.5); }

}  // namespace

BbqEncodeResult bbq_encode(MessageRegister& msg, const RationalWindow& win, double dither) {
    if (dither < -0.5 || dither >= 0.5) throw std::invalid_argument("bbq_encode: dither range");
    BbqEncodeResult out;
    out.index = msg.pop(win.a);
    double ratio = double(win.b) / double(win.a);
    double kappa_i = double(out.index) + win.kappa;
    double n = round_half_up(ratio * kappa_i + dither);
    if (n < 0.0 || n >= double(win.b)) {
        throw std::logic_error("bbq_encode: quantized digit escaped [0, b-1]");
    }
    out.n = uint32_t(n);
    double y_i = (n - dither + 0.5) / ratio;
    out.y = y_i - double(out.index);
    msg.push(win.b, out.n);
    out.net_bits = std::log2(double(win.b)) - std::log2(double(win.a));
    return out;
}

BbqDecodeResult bbq_decode(MessageRegister& msg, uint32_t a, uint32_t b, double dither) {
    if (a == 0 || b == 0 || a > b) throw std::invalid_argument("bbq_decode: need 1 <= a <= b");
    BbqDecodeResult out;
    out.n = msg.pop(b);
    double ratio = double(b) / double(a);
    double y_i = (double(out.n) - dither + 0.5) / ratio;
    // Y_I = I + (kappa + t) with kappa + t in (0, 1], so I = ceil(Y_I) - 1
    // recovers the replica index including the right-endpoint case.
    double idx = std::ceil(y_i) - 1.0;
    if (idx < 0.0 || idx >= double(a)) {
        throw std::runtime_error("index recovery failure");
    }
    out.index = uint32_t(idx);
    out.y = y_i - idx;
    msg.push(a, out.index);
    return out;
}

namespace {

// Exact test a/b >= w for a double w in (0, 1].
bool fraction_at_least(uint64_t a, uint64_t b, double w) {
    int e;
    double m = std::frexp(w, &e);                         // w = m * 2^e
    uint64_t mi = uint64_t(std::ldexp(m, 53));            // w = mi * 2^(e-53)
    int shift = 53 - e;
    if (shift >= 120) return true;  // a/b >= 2^-32 dwarfs such w
    unsigned __int128 lhs = static_cast<unsigned __int128>(a) << shift;
    unsigned __int128 rhs = static_cast<unsigned __int128>(mi) * b;
    return lhs >= rhs;
}

}  // namespace

Rational rationalize_width_above(double w, uint32_t max_denominator) {
    if (!(w > 0.0) || w > 1.0 || max_denominator == 0) {
        throw std::invalid_argument("rationalize_width_above: w in (0, 1]");
    }
    if (w == 1.0) return {1, 1};
    // Stern-Brocot walk; when the mediant denominator exceeds the cap,
    // the upper endpoint is the tightest fraction >= w with denominator
    // within the cap (anything between the endpoints needs a larger one).
    uint64_t lo_a = 0, lo_b = 1;
    uint64_t hi_a = 1, hi_b = 1;
    while (lo_b + hi_b <= max_denominator) {
        uint64_t m_a = lo_a + hi_a;
        uint64_t m_b = lo_b + hi_b;
        if (fraction_at_least(m_a, m_b, w)) {
            hi_a = m_a;
            hi_b = m_b;
        } else {
            lo_a = m_a;
            lo_b = m_b;
        }
    }
    return {uint32_t(hi_a), uint32_t(hi_b)};
}

}  // namespace agrs
