#pragma once

#include "rmpa/pa_core.hpp"

namespace rmpa {

// First/second minimum statistics of one coset: smallest and second-smallest
// magnitude, the coordinate attaining the smallest, and the product of the
// member signs.  Magnitudes are raw units in fixed mode (exact in a double).
struct CosetMinStats {
    double fmin = 0.0;
    double smin = 0.0;
    uint32_t argmin = 0;
    bool sign_negative = false;
};

// Exact first/second minima of absolute values per coset; ties resolved
// toward the smaller coordinate index.  Coset size must be at least 2.
std::vector<CosetMinStats> coset_min_stats(const LlrVector& llr, const CosetTable& table);

// Collapsed min-sum projection: one value per coset, sign * fmin.
LlrVector cpa_project(const std::vector<CosetMinStats>& stats, LlrMode mode = LlrMode::real,
                      int frac_bits = 0);

// Leave-one-out pre-aggregation: the contribution at z is the min-sum of its
// coset excluding z, conditionally negated by the decoded coset bit.
LlrVector cpa_pre_aggregate(const LlrVector& llr, const std::vector<CosetMinStats>& stats,
                            const std::vector<uint8_t>& decoded, const CosetTable& table);

// Collapsed projection-aggregation decoder: projects directly onto all
// (r-1)-dimensional subspaces, decodes each first-order result, and
// accumulates the leave-one-out contributions.
class CpaDecoder : public Decoder {
public:
    explicit CpaDecoder(const DecoderConfig& cfg);

    DecodeResult decode(const LlrVector& llr) const override;
    uint64_t fod_calls_per_iteration() const override { return num_projections_; }
    std::string name() const override { return "cpa"; }

    uint64_t num_projections() const { return num_projections_; }
    const DecoderConfig& config() const { return cfg_; }

private:
    DecoderConfig cfg_;
    uint64_t num_projections_ = 0;
    int coset_size_ = 0;
    int num_cosets_ = 0;
    // Flattened per-subspace coset membership, in lexicographic canonical
    // basis order (fixed accumulation order for fixed-point runs).
    std::vector<uint16_t> members_;

    template <typename T>
    DecodeResult decode_impl(std::span<const T> in) const;
};

inline DecodeResult cpa_decode(const LlrVector& llr, const DecoderConfig& cfg) {
    return CpaDecoder(cfg).decode(llr);
}

}  // namespace rmpa
