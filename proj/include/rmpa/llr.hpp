#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rmpa/fixed_point.hpp"

namespace rmpa {

enum class LlrMode { real, fixed };

// Length-2^m LLR vector, either real-valued or in scaled-integer fixed-point
// form with an explicit fractional scale.  Positive means bit 0 more likely.
struct LlrVector {
    LlrMode mode = LlrMode::real;
    int frac_bits = 0;
    std::vector<double> real;
    std::vector<int64_t> raw;

    size_t size() const { return mode == LlrMode::real ? real.size() : raw.size(); }

    static LlrVector from_real(std::vector<double> v) {
        LlrVector out;
        out.mode = LlrMode::real;
        out.real = std::move(v);
        return out;
    }

    static LlrVector from_raw(std::vector<int64_t> v, int frac_bits) {
        LlrVector out;
        out.mode = LlrMode::fixed;
        out.frac_bits = frac_bits;
        out.raw = std::move(v);
        return out;
    }

    // Hard decision with positive <-> bit 0 and zeros decoding to bit 0.
    std::vector<uint8_t> hard_decision() const {
        std::vector<uint8_t> bits(size());
        if (mode == LlrMode::real) {
            for (size_t i = 0; i < real.size(); ++i) bits[i] = real[i] < 0 ? 1 : 0;
        } else {
            for (size_t i = 0; i < raw.size(); ++i) bits[i] = raw[i] < 0 ? 1 : 0;
        }
        return bits;
    }
};

inline LlrVector quantize_llrs(std::span<const double> v, const QFormat& q) {
    std::vector<int64_t> raw(v.size());
    for (size_t i = 0; i < v.size(); ++i) raw[i] = quantize(v[i], q);
    return LlrVector::from_raw(std::move(raw), q.frac_bits);
}

}  // namespace rmpa
