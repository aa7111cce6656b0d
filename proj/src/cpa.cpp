#include "rmpa/cpa.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace rmpa {

namespace {

template <typename T>
struct MinStats {
    T fmin, smin;
    uint16_t argmin;
    uint8_t signbit;
};

template <typename T>
inline void scan_coset(const uint16_t* mem, int csize, const T* llr, MinStats<T>& s) {
    T f = std::numeric_limits<T>::max(), g = std::numeric_limits<T>::max();
    uint16_t arg = mem[0];
    uint8_t sb = 0;
    for (int j = 0; j < csize; ++j) {
        uint16_t z = mem[j];
        T v = llr[z];
        sb ^= static_cast<uint8_t>(v < T(0));
        T mag = v < T(0) ? T(-v) : v;
        if (mag < f) {
            g = f;
            f = mag;
            arg = z;
        } else if (mag < g) {
            g = mag;
        }
    }
    s.fmin = f;
    s.smin = g;
    s.argmin = arg;
    s.signbit = sb;
}

int ceil_log2(int p) {
    int l = 0;
    while ((1 << l) < p) ++l;
    return l;
}

}  // namespace

std::vector<CosetMinStats> coset_min_stats(const LlrVector& llr, const CosetTable& table) {
    if (table.coset_size() < 2) throw std::domain_error("coset size must be at least 2");
    if (llr.size() != table.coset_of.size()) throw std::invalid_argument("LLR length mismatch");

    std::vector<CosetMinStats> out(table.num_cosets());
    for (int k = 0; k < table.num_cosets(); ++k) {
        const auto& mem = table.members[k];
        CosetMinStats s;
        double f = std::numeric_limits<double>::infinity();
        double g = std::numeric_limits<double>::infinity();
        bool sb = false;
        uint32_t arg = mem[0];
        for (uint32_t z : mem) {
            double v = llr.mode == LlrMode::real ? llr.real[z] : static_cast<double>(llr.raw[z]);
            sb ^= (v < 0);
            double mag = std::abs(v);
            if (mag < f) {
                g = f;
                f = mag;
                arg = z;
            } else if (mag < g) {
                g = mag;
            }
        }
        s.fmin = f;
        s.smin = g;
        s.argmin = arg;
        s.sign_negative = sb;
        out[k] = s;
    }
    return out;
}

LlrVector cpa_project(const std::vector<CosetMinStats>& stats, LlrMode mode, int frac_bits) {
    LlrVector out;
    out.mode = mode;
    out.frac_bits = frac_bits;
    if (mode == LlrMode::real) {
        out.real.resize(stats.size());
        for (size_t k = 0; k < stats.size(); ++k)
            out.real[k] = stats[k].sign_negative ? -stats[k].fmin : stats[k].fmin;
    } else {
        out.raw.resize(stats.size());
        for (size_t k = 0; k < stats.size(); ++k) {
            auto mag = static_cast<int64_t>(stats[k].fmin);
            out.raw[k] = stats[k].sign_negative ? -mag : mag;
        }
    }
    return out;
}

LlrVector cpa_pre_aggregate(const LlrVector& llr, const std::vector<CosetMinStats>& stats,
                            const std::vector<uint8_t>& decoded, const CosetTable& table) {
    if (llr.size() != table.coset_of.size()) throw std::invalid_argument("LLR length mismatch");
    if (decoded.size() != stats.size() || stats.size() != static_cast<size_t>(table.num_cosets()))
        throw std::invalid_argument("stats/decoded length mismatch");

    LlrVector out;
    out.mode = llr.mode;
    out.frac_bits = llr.frac_bits;
    const size_t n = llr.size();
    auto value_at = [&](size_t z) {
        return llr.mode == LlrMode::real ? llr.real[z] : static_cast<double>(llr.raw[z]);
    };
    std::vector<double> vals(n);
    for (int k = 0; k < table.num_cosets(); ++k) {
        const auto& s = stats[k];
        for (uint32_t z : table.members[k]) {
            double mag = (z == s.argmin) ? s.smin : s.fmin;
            bool neg = s.sign_negative ^ (value_at(z) < 0) ^ (decoded[k] != 0);
            vals[z] = neg ? -mag : mag;
        }
    }
    if (llr.mode == LlrMode::real) {
        out.real = std::move(vals);
    } else {
        out.raw.resize(n);
        for (size_t z = 0; z < n; ++z) out.raw[z] = static_cast<int64_t>(vals[z]);
    }
    return out;
}

CpaDecoder::CpaDecoder(const DecoderConfig& cfg) : cfg_(cfg) {
    if (cfg.r < 2) throw std::domain_error("CPA needs r >= 2");
    if (cfg.m <= cfg.r) throw std::domain_error("need m > r");
    if (cfg.m > kMaxDimension) throw std::domain_error("m out of range");
    if (cfg.cpa_pus < 1) throw std::domain_error("need at least one processing unit");

    const int n = 1 << cfg.m;
    const int d = cfg.r - 1;
    coset_size_ = 1 << d;
    num_cosets_ = n >> d;

    auto subs = enumerate_subspaces(cfg.m, d);
    num_projections_ = subs.size();
    if (num_projections_ != two_binomial(cfg.m, d))
        throw std::logic_error("subspace enumeration count mismatch");

    members_.resize(num_projections_ * static_cast<size_t>(n));
    for (size_t s = 0; s < subs.size(); ++s) {
        CosetTable t = coset_table(subs[s]);
        uint16_t* mem = members_.data() + s * n;
        for (int k = 0; k < num_cosets_; ++k)
            for (int j = 0; j < coset_size_; ++j) mem[k * coset_size_ + j] = static_cast<uint16_t>(t.members[k][j]);
    }
}

DecodeResult CpaDecoder::decode(const LlrVector& llr) const {
    if (llr.size() != (size_t{1} << cfg_.m)) throw std::invalid_argument("LLR length != 2^m");
    if (cfg_.fixed() != (llr.mode == LlrMode::fixed))
        throw std::invalid_argument("LLR mode does not match decoder quantization");
    if (llr.mode == LlrMode::real) return decode_impl<double>(llr.real);
    return decode_impl<int64_t>(llr.raw);
}

template <typename T>
DecodeResult CpaDecoder::decode_impl(std::span<const T> in) const {
    constexpr bool fixed = std::is_same_v<T, int64_t>;
    const int n = 1 << cfg_.m;
    const int n_max = cfg_.effective_n_max();
    const int p = cfg_.cpa_pus;

    // Fixed-point bounds: the adder tree output feeds an accumulator that
    // saturates at +-2^(q-1+ceil(log2 p)) raw units; the iteration handoff
    // brings the accumulator back to +-2^(q-1).
    int64_t handoff_bound = 0, acc_bound = 0, tree_bound = 0;
    int handoff_shift = 0;
    if constexpr (fixed) {
        const QFormat q = *cfg_.quant;
        handoff_bound = int64_t{1} << (q.total() - 1);
        acc_bound = int64_t{1} << (q.total() - 1 + ceil_log2(p));
        tree_bound = q.raw_max();
        if (cfg_.cpa_handoff_shift)
            handoff_shift = cfg_.cpa_accumulator_saturating
                                ? ceil_log2(p)
                                : ceil_log2(static_cast<int>(num_projections_));
    }

    std::vector<T> cur(in.begin(), in.end());
    std::vector<T> next(n);
    std::vector<MinStats<T>> stats(num_cosets_);
    std::vector<T> proj(num_cosets_);
    std::vector<uint8_t> bits(num_cosets_);
    std::vector<T> contrib(n);
    std::vector<double> acc_real;
    std::vector<int64_t> acc_fixed;
    std::vector<int64_t> batch;     // p contribution vectors, coordinate-major later
    std::vector<int64_t> batch_col; // per-coordinate tree input
    if constexpr (fixed) {
        acc_fixed.assign(n, 0);
        batch.assign(static_cast<size_t>(p) * n, 0);
        batch_col.assign(p, 0);
    } else {
        acc_real.assign(n, 0.0);
    }

    DecodeResult res;

    for (int it = 1; it <= n_max; ++it) {
        if constexpr (fixed) {
            std::fill(acc_fixed.begin(), acc_fixed.end(), int64_t{0});
        } else {
            std::fill(acc_real.begin(), acc_real.end(), 0.0);
        }
        int batch_fill = 0;

        auto flush_batch = [&](int count) {
            // One adder-tree cycle: reduce `count` contribution vectors
            // (padded with zeros) and push the result into the accumulator.
            for (int z = 0; z < n; ++z) {
                for (int b = 0; b < count; ++b) batch_col[b] = batch[static_cast<size_t>(b) * n + z];
                for (int b = count; b < p; ++b) batch_col[b] = 0;
                int64_t t = cfg_.cpa_tree_saturating ? saturating_tree_sum(batch_col, tree_bound)
                                                     : adder_tree_sum(batch_col);
                if (cfg_.cpa_accumulator_saturating)
                    acc_fixed[z] = sat_add(acc_fixed[z], t, acc_bound);
                else
                    acc_fixed[z] += t;
            }
        };

        for (size_t s = 0; s < num_projections_; ++s) {
            const uint16_t* mem = members_.data() + s * n;
            for (int k = 0; k < num_cosets_; ++k)
                scan_coset(mem + k * coset_size_, coset_size_, cur.data(), stats[k]);
            for (int k = 0; k < num_cosets_; ++k)
                proj[k] = stats[k].signbit ? T(-stats[k].fmin) : stats[k].fmin;

            std::span<T> w(proj.data(), num_cosets_);
            fht_inplace(w);
            FodDecision d = fod_pick(std::span<const T>(w));
            ++res.fod_calls;
            fod_expand_bits(d.best_index, d.complemented, bits);

            T* out = contrib.data();
            if constexpr (fixed) out = batch.data() + static_cast<size_t>(batch_fill) * n;
            for (int k = 0; k < num_cosets_; ++k) {
                const MinStats<T>& st = stats[k];
                const uint8_t flip = bits[k];
                for (int j = 0; j < coset_size_; ++j) {
                    uint16_t z = mem[k * coset_size_ + j];
                    T mag = (z == st.argmin) ? st.smin : st.fmin;
                    bool neg = (st.signbit ^ static_cast<uint8_t>(cur[z] < T(0)) ^ flip) != 0;
                    out[z] = neg ? T(-mag) : mag;
                }
            }

            if constexpr (fixed) {
                if (++batch_fill == p) {
                    flush_batch(p);
                    batch_fill = 0;
                }
            } else {
                for (int z = 0; z < n; ++z) acc_real[z] += out[z];
            }
        }

        if constexpr (fixed) {
            if (batch_fill > 0) flush_batch(batch_fill);
            for (int z = 0; z < n; ++z) {
                int64_t v = acc_fixed[z];
                next[z] = v > handoff_bound ? handoff_bound : (v < -handoff_bound ? -handoff_bound : v);
            }
        } else {
            for (int z = 0; z < n; ++z) next[z] = acc_real[z] / static_cast<double>(num_projections_);
        }

        res.iterations = it;
        bool converged;
        if constexpr (fixed) {
            converged = std::equal(next.begin(), next.end(), cur.begin());
        } else {
            converged = true;
            for (int z = 0; z < n; ++z)
                if ((next[z] < 0) != (cur[z] < 0)) {
                    converged = false;
                    break;
                }
        }
        cur.swap(next);
        if (converged) break;
    }

    res.codeword.resize(n);
    for (int z = 0; z < n; ++z) res.codeword[z] = cur[z] < T(0) ? 1 : 0;
    return res;
}

template DecodeResult CpaDecoder::decode_impl<double>(std::span<const double>) const;
template DecodeResult CpaDecoder::decode_impl<int64_t>(std::span<const int64_t>) const;

}  // namespace rmpa
