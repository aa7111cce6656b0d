#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmpa/fht.hpp"
#include "rmpa/gf2.hpp"
#include "rmpa/llr.hpp"

namespace rmpa {

// Shared decoder configuration.  n_max = 0 selects the default ceil(m/2)
// outer iterations; setting `quant` switches the whole pipeline to
// fixed-point arithmetic on raw integers.
struct DecoderConfig {
    int m = 6;
    int r = 3;
    int n_max = 0;
    std::optional<QFormat> quant;

    // CPA fixed-point adder policies.
    int cpa_pus = 7;
    bool cpa_tree_saturating = false;        // saturating adder tree instead of full precision
    bool cpa_accumulator_saturating = true;  // saturating accumulator instead of full precision
    // Iteration handoff: arithmetic right shift normalizing the accumulator
    // full scale down to the Q-format range before the clamp (keeps the
    // magnitude grading); turning it off clamps the raw sum directly.
    bool cpa_handoff_shift = true;

    // IUPA second-order combine in fixed mode: exact sums everywhere or the
    // hardware adder-tree / divider-tree split.  `automatic` picks exact sums
    // for ideal schedules and the hardware split for ILP schedules.
    enum class Combine { automatic, full_precision, hardware };
    Combine iupa_combine = Combine::automatic;

    int effective_n_max() const { return n_max > 0 ? n_max : (m + 1) / 2; }
    bool fixed() const { return quant.has_value(); }
};

struct DecodeResult {
    std::vector<uint8_t> codeword;
    int iterations = 0;
    uint64_t fod_calls = 0;
};

class Decoder {
public:
    virtual ~Decoder() = default;
    virtual DecodeResult decode(const LlrVector& llr) const = 0;
    virtual uint64_t fod_calls_per_iteration() const = 0;
    virtual std::string name() const = 0;
};

// ---------------------------------------------------------------------------
// Projection / aggregation operations on LLR vectors (Reed-Muller
// projection-aggregation building blocks).

// Min-sum projection onto the cosets of a one-dimensional subspace:
// magnitude = min of the two member magnitudes, sign = product of signs,
// ordered by coset index.
LlrVector minsum_project_1d(const LlrVector& llr, const CosetTable& table);

// Pre-aggregation: L_agg(z) = (1 - 2 c[coset(z)]) * L(z ^ shift), the
// per-projection term of the aggregation average.  The sign flip is a
// conditional negation (two's complement in hardware).
LlrVector pre_aggregate(const LlrVector& llr, const std::vector<uint8_t>& decoded,
                        const CosetTable& table, uint32_t shift);

// Coordinate-wise mean of `count` inputs, the missing inputs being all-zero
// dummies.  Real mode divides exactly; fixed mode uses the divider tree over
// the next power of two, matching the shift-register hardware.
LlrVector aggregate_average(const std::vector<LlrVector>& vectors, int count);

// ---------------------------------------------------------------------------
// Fast kernels shared by the IPA / IUPA / CPA decoders.

namespace kernels {

// Branchless conditional negation (flip is 0 or 1); sign flips follow
// unpredictable data, so this avoids mispredicted branches in the hot loops.
inline double cond_negate(double v, uint32_t flip) {
    return std::bit_cast<double>(std::bit_cast<uint64_t>(v) ^ (static_cast<uint64_t>(flip) << 63));
}
inline int64_t cond_negate(int64_t v, uint32_t flip) {
    int64_t mask = -static_cast<int64_t>(flip);
    return (v ^ mask) + static_cast<int64_t>(flip);
}

// Precomputed coset structure for every one-dimensional subspace {0, i} of
// F2^m.  pair(i) holds the two members of each coset (representative first);
// coset_index(i) maps a coordinate to its coset index.
struct OneDimTables {
    int m = 0;
    int n = 0;
    std::vector<uint16_t> pairs;
    std::vector<uint16_t> cidx;

    const uint16_t* pair(int i) const { return pairs.data() + static_cast<size_t>(i - 1) * n; }
    const uint16_t* coset_index(int i) const { return cidx.data() + static_cast<size_t>(i - 1) * n; }

    static OneDimTables build(int m);
};

template <typename T>
inline T minsum_combine(T a, T b) {
    T ma = a < T(0) ? T(-a) : a;
    T mb = b < T(0) ? T(-b) : b;
    T mag = ma < mb ? ma : mb;
    return ((a < T(0)) != (b < T(0))) ? T(-mag) : mag;
}

template <typename T>
inline void minsum_pairs(const uint16_t* pair, int half, const T* in, T* out) {
    for (int k = 0; k < half; ++k) out[k] = minsum_combine(in[pair[2 * k]], in[pair[2 * k + 1]]);
}

template <typename T>
inline void pre_aggregate_1d(const T* in, int n, uint32_t shift, const uint16_t* cidx,
                             const uint8_t* bits, T* out) {
    for (int z = 0; z < n; ++z) {
        T v = in[z ^ shift];
        out[z] = bits[cidx[z]] ? T(-v) : v;
    }
}

// Fused second-order column step: min-sum projection onto {0, j}, FHT
// decode, and pre-aggregation, written per coset pair so the decoded bit of
// coset k is parity(k* & k) ^ complemented directly.  `absv`/`sgn` cache the
// magnitudes and sign bits of `l2`.  Accumulates into `out` or overwrites
// it, and returns the projected-vector length (one FOD call).
template <typename T, bool kAccumulate>
inline void sweep_column(const uint16_t* pair, int quarter, const T* l2, const T* absv,
                         const uint8_t* sgn, T* w, T* out) {
    for (int k = 0; k < quarter; ++k) {
        uint16_t a = pair[2 * k];
        uint16_t b = pair[2 * k + 1];
        T ma = absv[a];
        T mb = absv[b];
        T mag = ma < mb ? ma : mb;
        w[k] = cond_negate(mag, static_cast<uint32_t>(sgn[a] ^ sgn[b]));
    }
    fht_inplace(std::span<T>(w, static_cast<size_t>(quarter)));
    FodDecision d = fod_pick(std::span<const T>(w, static_cast<size_t>(quarter)));
    const uint32_t best = d.best_index;
    const uint32_t comp = d.complemented ? 1u : 0u;
    for (int k = 0; k < quarter; ++k) {
        uint16_t a = pair[2 * k];
        uint16_t b = pair[2 * k + 1];
        const uint32_t flip = static_cast<uint32_t>(__builtin_parity(best & static_cast<uint32_t>(k))) ^ comp;
        T va = l2[a];
        T vb = l2[b];
        if constexpr (kAccumulate) {
            out[a] += cond_negate(vb, flip);
            out[b] += cond_negate(va, flip);
        } else {
            out[a] = cond_negate(vb, flip);
            out[b] = cond_negate(va, flip);
        }
    }
}

template <typename T>
inline void load_abs_sign(const T* v, int n, T* absv, uint8_t* sgn) {
    for (int z = 0; z < n; ++z) {
        T x = v[z];
        sgn[z] = x < T(0);
        absv[z] = x < T(0) ? T(-x) : x;
    }
}

}  // namespace kernels

// ---------------------------------------------------------------------------
// Baseline iterative projection-aggregation decoder for RM(m, r), r in {2,3}.
// Third-order decoding runs one full single-pass second-order sweep per
// top-level projection (no internal iterations).
class IpaDecoder : public Decoder {
public:
    explicit IpaDecoder(const DecoderConfig& cfg);

    DecodeResult decode(const LlrVector& llr) const override;
    uint64_t fod_calls_per_iteration() const override;
    std::string name() const override { return "ipa"; }

    const DecoderConfig& config() const { return cfg_; }

private:
    DecoderConfig cfg_;
    kernels::OneDimTables top_;
    kernels::OneDimTables second_;

    template <typename T>
    DecodeResult decode_impl(std::span<const T> in) const;
};

inline DecodeResult ipa_decode(const LlrVector& llr, const DecoderConfig& cfg) {
    return IpaDecoder(cfg).decode(llr);
}

}  // namespace rmpa
