#pragma once

#include "rmpa/allocation.hpp"
#include "rmpa/pa_core.hpp"

namespace rmpa {

// Schedule-driven iterative unique projection-aggregation decoder for
// RM(m, 3).  Each top-level 1-D projection is decoded by the second-order
// decoder of its group, which processes the group's full column set; the
// aggregation averages all 2^{m-1}-1 pre-aggregated vectors plus one
// all-zero dummy through the divider tree.
class IupaDecoder : public Decoder {
public:
    IupaDecoder(const DecoderConfig& cfg, IupaSchedule schedule);

    DecodeResult decode(const LlrVector& llr) const override;
    uint64_t fod_calls_per_iteration() const override { return sched_.fod_per_iteration(); }
    std::string name() const override { return "iupa"; }

    const IupaSchedule& schedule() const { return sched_; }

    // Second-order decoder of one group: min-sum project / first-order
    // decode / pre-aggregate every selected column, combine, hard-decide.
    std::vector<uint8_t> second_order_group_decode(const LlrVector& l2,
                                                   const std::vector<int>& cols) const;

private:
    DecoderConfig cfg_;
    IupaSchedule sched_;
    kernels::OneDimTables top_;
    kernels::OneDimTables second_;
    bool hw_combine_ = false;

    struct RowExec {
        int row = 0;
        std::vector<int> left;   // ILP columns (duplicate-bearing block)
        std::vector<int> right;  // dedicated right-half columns
    };
    std::vector<RowExec> plan_;

    template <typename T>
    DecodeResult decode_impl(std::span<const T> in) const;

    // Scratch shared across the second-order sweeps of one decode call.
    template <typename T>
    struct Sweep {
        std::vector<T> acc2, w, absv;
        std::vector<uint8_t> sgn;
        std::vector<int64_t> treebuf;
    };

    template <typename T>
    void second_order_bits(std::span<const T> l2, const RowExec& re, bool hw, Sweep<T>& ws,
                           uint64_t& fod_calls, std::vector<uint8_t>& out_bits) const;
};

}  // namespace rmpa
