#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace rmpa {

// In-place fast Hadamard transform: v <- W with W(k) = sum_z (-1)^<k,z> v(z).
// m' * 2^m' additions; length must be a power of two.  Integer inputs are
// accumulated exactly (the width grows by one bit per stage).
template <typename T>
void fht_inplace(std::span<T> v) {
    const size_t n = v.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fht length must be a power of two");
    for (size_t len = 1; len < n; len <<= 1) {
        for (size_t i = 0; i < n; i += 2 * len) {
            for (size_t j = i; j < i + len; ++j) {
                T a = v[j];
                T b = v[j + len];
                v[j] = a + b;
                v[j + len] = a - b;
            }
        }
    }
}

template <typename T>
std::vector<T> fht(std::span<const T> v) {
    std::vector<T> out(v.begin(), v.end());
    fht_inplace(std::span<T>(out));
    return out;
}

// Winning transform index and sign of a first-order ML decision.  Ties go to
// the smallest index and then to the non-complemented codeword, so the
// all-zero input decodes to the all-zero codeword.
struct FodDecision {
    uint32_t best_index = 0;
    bool complemented = false;
    double metric = 0.0;
};

template <typename T>
FodDecision fod_pick(std::span<const T> w) {
    using std::abs;
    FodDecision d;
    T best = abs(w[0]);
    uint32_t best_k = 0;
    for (uint32_t k = 1; k < w.size(); ++k) {
        T mag = abs(w[k]);
        if (mag > best) {
            best = mag;
            best_k = k;
        }
    }
    d.best_index = best_k;
    d.complemented = w[best_k] < T(0);
    d.metric = static_cast<double>(best);
    return d;
}

// Decoded codeword of RM(m',1): bit at z is <k*, z> xor complemented.
struct FhtResult {
    std::vector<uint8_t> codeword;
    uint32_t best_index = 0;
    bool complemented = false;
    double metric = 0.0;
};

inline void fod_expand_bits(uint32_t best_index, bool complemented, std::span<uint8_t> bits) {
    for (size_t z = 0; z < bits.size(); ++z)
        bits[z] = static_cast<uint8_t>(__builtin_parity(best_index & static_cast<uint32_t>(z)) ^
                                       static_cast<int>(complemented));
}

// ML decoding of a first-order RM code from LLRs (positive LLR = bit 0 more
// likely): maximize |W(k)| over the transform of the LLR vector.
template <typename T>
FhtResult first_order_decode(std::span<const T> llr) {
    std::vector<T> w(llr.begin(), llr.end());
    fht_inplace(std::span<T>(w));
    FodDecision d = fod_pick(std::span<const T>(w));
    FhtResult res;
    res.best_index = d.best_index;
    res.complemented = d.complemented;
    res.metric = d.metric;
    res.codeword.resize(llr.size());
    fod_expand_bits(d.best_index, d.complemented, res.codeword);
    return res;
}

}  // namespace rmpa
