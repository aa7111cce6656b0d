#pragma once

#include <cmath>
#include <cstdint>

namespace rmpa {

// Self-contained per-frame random stream: a splitmix64 generator seeded by
// hashing (master_seed, frame_index), with Box-Muller Gaussians on top.
// Frame results are therefore independent of worker scheduling.
class FrameRng {
public:
    FrameRng(uint64_t master_seed, uint64_t frame_index) {
        state_ = mix(mix(master_seed) ^ mix(frame_index + 0x9E3779B97F4A7C15ull));
    }

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    uint8_t next_bit() {
        if (bit_count_ == 0) {
            bit_word_ = next_u64();
            bit_count_ = 64;
        }
        uint8_t b = bit_word_ & 1;
        bit_word_ >>= 1;
        --bit_count_;
        return b;
    }

    // Uniform in (0, 1]; never returns zero so logarithms are safe.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    uint64_t state_ = 0;
    uint64_t bit_word_ = 0;
    int bit_count_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rmpa
