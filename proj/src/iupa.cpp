#include "rmpa/iupa.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmpa {

IupaDecoder::IupaDecoder(const DecoderConfig& cfg, IupaSchedule schedule)
    : cfg_(cfg), sched_(std::move(schedule)) {
    if (cfg.r != 3) throw std::domain_error("IUPA decoder is defined for r = 3");
    if (cfg.m != sched_.m) throw std::invalid_argument("schedule does not match the code");
    if (cfg.m <= 3 || cfg.m > kMaxDimension) throw std::domain_error("m out of range");

    const int half = 1 << (cfg.m - 1);
    const int quarter = half / 2;
    if (static_cast<int>(sched_.rows.size()) != half - 1)
        throw std::invalid_argument("schedule must cover every top-level projection");
    std::vector<uint8_t> seen(half, 0);
    for (const auto& rp : sched_.rows) {
        if (rp.row < 1 || rp.row >= half || seen[rp.row])
            throw std::invalid_argument("schedule rows must be a permutation of 1..2^{m-1}-1");
        seen[rp.row] = 1;
    }

    switch (cfg.iupa_combine) {
        case DecoderConfig::Combine::full_precision: hw_combine_ = false; break;
        case DecoderConfig::Combine::hardware: hw_combine_ = true; break;
        case DecoderConfig::Combine::automatic: hw_combine_ = !sched_.ideal; break;
    }
    if (hw_combine_ && sched_.lambda < 1)
        throw std::invalid_argument("hardware combine needs a latency-structured schedule");

    top_ = kernels::OneDimTables::build(cfg.m);
    second_ = kernels::OneDimTables::build(cfg.m - 1);

    plan_.reserve(sched_.rows.size());
    for (const auto& rp : sched_.rows) {
        RowExec re;
        re.row = rp.row;
        for (int c : rp.cols) {
            if (c < 1 || c >= half) throw std::invalid_argument("schedule column out of range");
            (c < quarter ? re.left : re.right).push_back(c);
        }
        std::sort(re.left.begin(), re.left.end());
        std::sort(re.right.begin(), re.right.end());
        if (hw_combine_ && static_cast<int>(re.right.size()) != quarter)
            throw std::invalid_argument("hardware combine expects the full right half per row");
        plan_.push_back(std::move(re));
    }
    std::sort(plan_.begin(), plan_.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
}

DecodeResult IupaDecoder::decode(const LlrVector& llr) const {
    if (llr.size() != (size_t{1} << cfg_.m)) throw std::invalid_argument("LLR length != 2^m");
    if (cfg_.fixed() != (llr.mode == LlrMode::fixed))
        throw std::invalid_argument("LLR mode does not match decoder quantization");
    if (llr.mode == LlrMode::real) return decode_impl<double>(llr.real);
    return decode_impl<int64_t>(llr.raw);
}

// Combine the per-column pre-aggregated vectors of one second-order decode
// and hard-decide.  Real mode and full-precision fixed mode sum exactly; the
// hardware split sums the selected ILP columns in a full-precision adder
// tree and routes the dedicated right-half columns through per-cycle divider
// trees rescaled by appending m-2-l zero bits.
template <typename T>
void IupaDecoder::second_order_bits(std::span<const T> l2, const RowExec& re, bool hw, Sweep<T>& ws,
                                    uint64_t& fod_calls, std::vector<uint8_t>& out_bits) const {
    const int half = 1 << (cfg_.m - 1);
    const int quarter = half / 2;
    std::fill(ws.acc2.begin(), ws.acc2.end(), T(0));
    kernels::load_abs_sign(l2.data(), half, ws.absv.data(), ws.sgn.data());

    for (int j : re.left) {
        kernels::sweep_column<T, true>(second_.pair(j), quarter, l2.data(), ws.absv.data(),
                                       ws.sgn.data(), ws.w.data(), ws.acc2.data());
        ++fod_calls;
    }
    if (!hw || !std::is_same_v<T, int64_t>) {
        // Real-mode equivalent of the hardware split is the plain sum.
        for (int j : re.right) {
            kernels::sweep_column<T, true>(second_.pair(j), quarter, l2.data(), ws.absv.data(),
                                           ws.sgn.data(), ws.w.data(), ws.acc2.data());
            ++fod_calls;
        }
    } else if constexpr (std::is_same_v<T, int64_t>) {
        // Right half: 2^{m-2}/lambda PUs emit one column each per cycle; the
        // divider tree averages them and the result is scaled back.
        const int lambda = sched_.lambda;
        const int pus = quarter / lambda;
        int levels = 0;
        while ((1 << levels) < pus) ++levels;
        std::vector<int64_t> column(pus);
        for (int cyc = 0; cyc < lambda; ++cyc) {
            for (int j = 0; j < pus; ++j) {
                int col = re.right[static_cast<size_t>(j) * lambda + cyc];
                int64_t* row = ws.treebuf.data() + static_cast<size_t>(j) * half;
                kernels::sweep_column<int64_t, false>(second_.pair(col), quarter, l2.data(),
                                                      ws.absv.data(), ws.sgn.data(), ws.w.data(),
                                                      row);
                ++fod_calls;
            }
            for (int z = 0; z < half; ++z) {
                for (int j = 0; j < pus; ++j) column[j] = ws.treebuf[static_cast<size_t>(j) * half + z];
                ws.acc2[z] += divider_tree_average(column, levels) << levels;
            }
        }
    }

    for (int z = 0; z < half; ++z) out_bits[z] = ws.acc2[z] < T(0) ? 1 : 0;
}

std::vector<uint8_t> IupaDecoder::second_order_group_decode(const LlrVector& l2,
                                                            const std::vector<int>& cols) const {
    const int half = 1 << (cfg_.m - 1);
    const int quarter = half / 2;
    if (static_cast<int>(l2.size()) != half) throw std::invalid_argument("second-order length != 2^{m-1}");

    RowExec re;
    for (int c : cols) {
        if (c < 1 || c >= half) throw std::invalid_argument("column out of range");
        (c < quarter ? re.left : re.right).push_back(c);
    }

    bool hw = hw_combine_ && static_cast<int>(re.right.size()) == quarter;
    std::vector<uint8_t> out(half);
    uint64_t calls = 0;
    if (l2.mode == LlrMode::real) {
        Sweep<double> ws;
        ws.acc2.resize(half);
        ws.w.resize(quarter);
        ws.absv.resize(half);
        ws.sgn.resize(half);
        second_order_bits<double>(l2.real, re, hw, ws, calls, out);
    } else {
        Sweep<int64_t> ws;
        ws.acc2.resize(half);
        ws.w.resize(quarter);
        ws.absv.resize(half);
        ws.sgn.resize(half);
        if (hw) ws.treebuf.assign(static_cast<size_t>(quarter / std::max(sched_.lambda, 1)) * half, 0);
        second_order_bits<int64_t>(l2.raw, re, hw, ws, calls, out);
    }
    return out;
}

template <typename T>
DecodeResult IupaDecoder::decode_impl(std::span<const T> in) const {
    constexpr bool fixed = std::is_same_v<T, int64_t>;
    const int n = 1 << cfg_.m;
    const int half = n / 2;
    const int quarter = n / 4;
    const int n_max = cfg_.effective_n_max();

    std::vector<T> cur(in.begin(), in.end());
    std::vector<T> next(n);
    std::vector<T> l2(half);
    std::vector<uint8_t> cbits(half);
    std::vector<T> temp(n), sum(n);
    Sweep<T> ws;
    ws.acc2.resize(half);
    ws.w.resize(quarter);
    ws.absv.resize(half);
    ws.sgn.resize(half);
    if (hw_combine_ && fixed)
        ws.treebuf.assign(static_cast<size_t>(quarter / std::max(sched_.lambda, 1)) * half, 0);
    std::vector<T> rows;
    if (fixed) rows.assign(static_cast<size_t>(half - 1) * n, T(0));

    DecodeResult res;

    for (int it = 1; it <= n_max; ++it) {
        std::fill(sum.begin(), sum.end(), T(0));

        int row_at = 0;
        for (const auto& re : plan_) {
            const int i = re.row;
            kernels::minsum_pairs(top_.pair(i), half, cur.data(), l2.data());
            second_order_bits<T>(l2, re, hw_combine_, ws, res.fod_calls, cbits);

            const uint16_t* cidx = top_.coset_index(i);
            if constexpr (fixed) {
                kernels::pre_aggregate_1d(cur.data(), n, static_cast<uint32_t>(i), cidx, cbits.data(),
                                          rows.data() + static_cast<size_t>(row_at) * n);
            } else {
                kernels::pre_aggregate_1d(cur.data(), n, static_cast<uint32_t>(i), cidx, cbits.data(),
                                          temp.data());
                for (int z = 0; z < n; ++z) sum[z] += temp[z];
            }
            ++row_at;
        }

        if constexpr (fixed) {
            // Divider tree over 2^{m-1} inputs: all contributions plus the
            // all-zero dummy row.
            std::vector<int64_t> column(half, 0);
            for (int z = 0; z < n; ++z) {
                for (int i = 0; i < half - 1; ++i) column[i] = rows[static_cast<size_t>(i) * n + z];
                column[half - 1] = 0;
                next[z] = divider_tree_average(column, cfg_.m - 1);
            }
        } else {
            for (int z = 0; z < n; ++z) next[z] = sum[z] / half;
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

template DecodeResult IupaDecoder::decode_impl<double>(std::span<const double>) const;
template DecodeResult IupaDecoder::decode_impl<int64_t>(std::span<const int64_t>) const;

}  // namespace rmpa
