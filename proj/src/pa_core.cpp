#include "rmpa/pa_core.hpp"

#include <stdexcept>

namespace rmpa {

namespace kernels {

OneDimTables OneDimTables::build(int m) {
    OneDimTables t;
    t.m = m;
    t.n = 1 << m;
    t.pairs.assign(static_cast<size_t>(t.n - 1) * t.n, 0);
    t.cidx.assign(static_cast<size_t>(t.n - 1) * t.n, 0);
    for (int i = 1; i < t.n; ++i) {
        uint16_t* pair = t.pairs.data() + static_cast<size_t>(i - 1) * t.n;
        uint16_t* cidx = t.cidx.data() + static_cast<size_t>(i - 1) * t.n;
        int k = 0;
        for (int z = 0; z < t.n; ++z) {
            if (z < (z ^ i)) {
                pair[2 * k] = static_cast<uint16_t>(z);
                pair[2 * k + 1] = static_cast<uint16_t>(z ^ i);
                cidx[z] = cidx[z ^ i] = static_cast<uint16_t>(k);
                ++k;
            }
        }
    }
    return t;
}

}  // namespace kernels

namespace {

void require_same_mode(const LlrVector& v, size_t n) {
    if (v.size() != n) throw std::invalid_argument("LLR vector length mismatch");
}

}  // namespace

LlrVector minsum_project_1d(const LlrVector& llr, const CosetTable& table) {
    if (table.subspace.dim() != 1) throw std::invalid_argument("min-sum projection needs a 1-D subspace");
    require_same_mode(llr, table.coset_of.size());

    const int half = table.num_cosets();
    LlrVector out;
    out.mode = llr.mode;
    out.frac_bits = llr.frac_bits;
    if (llr.mode == LlrMode::real) {
        out.real.resize(half);
        for (int k = 0; k < half; ++k)
            out.real[k] = kernels::minsum_combine(llr.real[table.members[k][0]], llr.real[table.members[k][1]]);
    } else {
        out.raw.resize(half);
        for (int k = 0; k < half; ++k)
            out.raw[k] = kernels::minsum_combine(llr.raw[table.members[k][0]], llr.raw[table.members[k][1]]);
    }
    return out;
}

LlrVector pre_aggregate(const LlrVector& llr, const std::vector<uint8_t>& decoded,
                        const CosetTable& table, uint32_t shift) {
    const size_t n = table.coset_of.size();
    require_same_mode(llr, n);
    if (decoded.size() != static_cast<size_t>(table.num_cosets()))
        throw std::invalid_argument("decoded vector length != number of cosets");
    if (shift == 0 || shift >= n || !table.subspace.contains(shift))
        throw std::invalid_argument("shift must be a nonzero subspace element");

    LlrVector out;
    out.mode = llr.mode;
    out.frac_bits = llr.frac_bits;
    if (llr.mode == LlrMode::real) {
        out.real.resize(n);
        for (size_t z = 0; z < n; ++z) {
            double v = llr.real[z ^ shift];
            out.real[z] = decoded[table.coset_of[z]] ? -v : v;
        }
    } else {
        out.raw.resize(n);
        for (size_t z = 0; z < n; ++z) {
            int64_t v = llr.raw[z ^ shift];
            out.raw[z] = decoded[table.coset_of[z]] ? -v : v;
        }
    }
    return out;
}

LlrVector aggregate_average(const std::vector<LlrVector>& vectors, int count) {
    if (vectors.empty()) throw std::invalid_argument("aggregate_average needs at least one input");
    if (count < static_cast<int>(vectors.size())) throw std::invalid_argument("count < number of inputs");
    const size_t n = vectors.front().size();
    const LlrMode mode = vectors.front().mode;
    for (const auto& v : vectors) {
        if (v.size() != n || v.mode != mode) throw std::invalid_argument("inconsistent aggregate inputs");
    }

    LlrVector out;
    out.mode = mode;
    out.frac_bits = vectors.front().frac_bits;
    if (mode == LlrMode::real) {
        out.real.assign(n, 0.0);
        for (const auto& v : vectors)
            for (size_t z = 0; z < n; ++z) out.real[z] += v.real[z];
        for (size_t z = 0; z < n; ++z) out.real[z] /= count;
    } else {
        int levels = 0;
        while ((1 << levels) < count) ++levels;
        std::vector<int64_t> column(size_t{1} << levels, 0);
        out.raw.assign(n, 0);
        for (size_t z = 0; z < n; ++z) {
            std::fill(column.begin(), column.end(), 0);
            for (size_t i = 0; i < vectors.size(); ++i) column[i] = vectors[i].raw[z];
            out.raw[z] = divider_tree_average(column, levels);
        }
    }
    return out;
}

}  // namespace rmpa
