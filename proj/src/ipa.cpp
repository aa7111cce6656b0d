#include <algorithm>
#include <stdexcept>

#include "rmpa/pa_core.hpp"

namespace rmpa {

IpaDecoder::IpaDecoder(const DecoderConfig& cfg) : cfg_(cfg) {
    if (cfg.r != 2 && cfg.r != 3) throw std::domain_error("IPA decoder supports r in {2, 3}");
    if (cfg.m <= cfg.r) throw std::domain_error("need m > r");
    if (cfg.m > kMaxDimension) throw std::domain_error("m out of range");
    top_ = kernels::OneDimTables::build(cfg.m);
    if (cfg.r == 3) second_ = kernels::OneDimTables::build(cfg.m - 1);
}

uint64_t IpaDecoder::fod_calls_per_iteration() const {
    const uint64_t n = uint64_t{1} << cfg_.m;
    if (cfg_.r == 2) return n - 1;
    return (n - 1) * (n / 2 - 1);
}

DecodeResult IpaDecoder::decode(const LlrVector& llr) const {
    if (llr.size() != (size_t{1} << cfg_.m)) throw std::invalid_argument("LLR length != 2^m");
    if (cfg_.fixed() != (llr.mode == LlrMode::fixed))
        throw std::invalid_argument("LLR mode does not match decoder quantization");
    if (llr.mode == LlrMode::real) return decode_impl<double>(llr.real);
    return decode_impl<int64_t>(llr.raw);
}

template <typename T>
DecodeResult IpaDecoder::decode_impl(std::span<const T> in) const {
    constexpr bool fixed = std::is_same_v<T, int64_t>;
    const int n = 1 << cfg_.m;
    const int half = n / 2;
    const int quarter = n / 4;
    const int n_max = cfg_.effective_n_max();

    std::vector<T> cur(in.begin(), in.end());
    std::vector<T> next(n);
    std::vector<T> l2(half), acc2(half), absv(half);
    std::vector<T> fodbuf(std::max(half, quarter));
    std::vector<uint8_t> bits(half), sgn(half);
    std::vector<T> temp(n);
    std::vector<T> sum(n);
    // Fixed mode keeps every pre-aggregated vector for the divider tree.
    std::vector<T> rows;
    if (fixed) rows.assign(static_cast<size_t>(n - 1) * n, T(0));

    DecodeResult res;

    for (int it = 1; it <= n_max; ++it) {
        std::fill(sum.begin(), sum.end(), T(0));

        for (int i = 1; i < n; ++i) {
            if (cfg_.r == 2) {
                // Project straight to a first-order code and decode it.
                std::span<T> w(fodbuf.data(), half);
                kernels::minsum_pairs(top_.pair(i), half, cur.data(), w.data());
                fht_inplace(w);
                FodDecision d = fod_pick(std::span<const T>(w));
                ++res.fod_calls;
                fod_expand_bits(d.best_index, d.complemented, std::span<uint8_t>(bits.data(), half));
            } else {
                // One single-pass second-order sweep per top-level projection.
                kernels::minsum_pairs(top_.pair(i), half, cur.data(), l2.data());
                std::fill(acc2.begin(), acc2.end(), T(0));
                kernels::load_abs_sign(l2.data(), half, absv.data(), sgn.data());
                for (int j = 1; j < half; ++j) {
                    kernels::sweep_column<T, true>(second_.pair(j), quarter, l2.data(), absv.data(),
                                                   sgn.data(), fodbuf.data(), acc2.data());
                    ++res.fod_calls;
                }
                for (int z = 0; z < half; ++z) bits[z] = acc2[z] < T(0) ? 1 : 0;
            }

            const uint16_t* cidx = top_.coset_index(i);
            if (fixed) {
                kernels::pre_aggregate_1d(cur.data(), n, static_cast<uint32_t>(i), cidx, bits.data(),
                                          rows.data() + static_cast<size_t>(i - 1) * n);
            } else {
                kernels::pre_aggregate_1d(cur.data(), n, static_cast<uint32_t>(i), cidx, bits.data(),
                                          temp.data());
                for (int z = 0; z < n; ++z) sum[z] += temp[z];
            }
        }

        if constexpr (fixed) {
            // Divider tree over 2^m inputs: the 2^m - 1 pre-aggregated
            // vectors padded with one all-zero dummy.
            std::vector<int64_t> column(n, 0);
            for (int z = 0; z < n; ++z) {
                for (int i = 0; i < n - 1; ++i) column[i] = rows[static_cast<size_t>(i) * n + z];
                column[n - 1] = 0;
                next[z] = divider_tree_average(column, cfg_.m);
            }
        } else {
            for (int z = 0; z < n; ++z) next[z] = sum[z] / (n - 1);
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

template DecodeResult IpaDecoder::decode_impl<double>(std::span<const double>) const;
template DecodeResult IpaDecoder::decode_impl<int64_t>(std::span<const int64_t>) const;

}  // namespace rmpa
