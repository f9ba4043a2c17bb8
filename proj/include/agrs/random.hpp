#ifndef AGRS_RANDOM_HPP
#define AGRS_RANDOM_HPP

#include <cstdint>

namespace agrs {

// Shared source of randomness for encoder/decoder pairs. SplitMix64:
// a counter-based 64-bit generator (Steele/Lea/Flood mixing constants).
// Both sides construct it from the same seed and consume variates in the
// same order, so the decoder can replay the encoder's stream exactly.
//
// Substream derivation is part of the protocol contract:
//   substream_seed(master, i) = mix(master + (i + 1) * 0x9E3779B97F4A7C15)
// where mix is the SplitMix64 finalizer below.
class SharedRandomness {
  public:
    explicit SharedRandomness(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform on (0, 1), never exactly 0 or 1 (53-bit grid, half-offset).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Dither on (-0.5, 0.5).
    double dither() { return uniform() - 0.5; }

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static uint64_t substream_seed(uint64_t master, uint64_t index) {
        return mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
    }

    static SharedRandomness substream(uint64_t master, uint64_t index) {
        return SharedRandomness(substream_seed(master, index));
    }

  private:
    uint64_t state_;
};

}  // namespace agrs

#endif
