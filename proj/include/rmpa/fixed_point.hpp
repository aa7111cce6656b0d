#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace rmpa {

// Q(i:f) fixed-point format with the sign bit counted inside the integer
// part.  Values are stored as raw integers scaled by 2^f, so Q(3:2) is a
// 5-bit format with raw range [-16, 15] and LLR range [-4.00, +3.75].
struct QFormat {
    int int_bits = 3;
    int frac_bits = 2;

    int total() const { return int_bits + frac_bits; }
    int64_t raw_min() const { return -(int64_t{1} << (total() - 1)); }
    int64_t raw_max() const { return (int64_t{1} << (total() - 1)) - 1; }
    double lsb() const { return std::ldexp(1.0, -frac_bits); }
    double to_real(int64_t raw) const { return std::ldexp(static_cast<double>(raw), -frac_bits); }

    bool operator==(const QFormat&) const = default;
};

// Round half away from zero to the nearest multiple of 2^-f, then saturate
// to the representable raw range.
inline int64_t quantize(double x, const QFormat& q) {
    double scaled = std::ldexp(x, q.frac_bits);
    double rounded = scaled < 0 ? -std::floor(-scaled + 0.5) : std::floor(scaled + 0.5);
    if (rounded <= static_cast<double>(q.raw_min())) return q.raw_min();
    if (rounded >= static_cast<double>(q.raw_max())) return q.raw_max();
    return static_cast<int64_t>(rounded);
}

// a + b clamped to [-bound, bound].  Commutative and monotone but not
// associative; reductions must fix their order.
inline int64_t sat_add(int64_t a, int64_t b, int64_t bound) {
    if (bound <= 0) throw std::domain_error("saturation bound must be positive");
    int64_t s = a + b;
    if (s > bound) return bound;
    if (s < -bound) return -bound;
    return s;
}

// Exact sum of one cycle-group of adder-tree inputs: in hardware the tree is
// q.total + ceil(log2 p) bits wide and never saturates internally.
inline int64_t adder_tree_sum(std::span<const int64_t> inputs) {
    int64_t s = 0;
    for (int64_t v : inputs) s += v;
    return s;
}

// Pairwise balanced-tree reduction where every two-input adder saturates to
// [-bound, bound].  Used by the all-saturating adder-tree variant; inputs
// are padded with zeros up to a power of two.
int64_t saturating_tree_sum(std::span<const int64_t> inputs, int64_t bound);

// Divider tree: per level, pairwise (a + b) with one guard bit followed by
// an arithmetic right shift (floor).  |inputs| must equal 2^levels.
int64_t divider_tree_average(std::span<const int64_t> inputs, int levels);

}  // namespace rmpa
