#include <doctest.h>

#include <stdexcept>

#include "rmpa/fht.hpp"
#include "rmpa/iupa.hpp"
#include "rmpa/rm_code.hpp"
#include "rmpa/rng.hpp"

using namespace rmpa;

namespace {

LlrVector noiseless_llrs(const std::vector<uint8_t>& cw, double mag = 8.0) {
    std::vector<double> llr(cw.size());
    for (size_t z = 0; z < cw.size(); ++z) llr[z] = cw[z] ? -mag : mag;
    return LlrVector::from_real(std::move(llr));
}

std::vector<uint8_t> random_codeword(const RmCode& code, FrameRng& rng) {
    std::vector<uint8_t> u(code.k());
    for (auto& b : u) b = rng.next_bit();
    return code.encode(u);
}

CosetTable table_1d(int m, uint32_t i) {
    Gf2Subspace b;
    b.m = m;
    b.basis = {i};
    return coset_table(b);
}

// Second-order sweep over an explicit column list built from the public
// per-operation pieces, as an oracle for the packed implementation.
std::vector<uint8_t> sweep_oracle(const LlrVector& l2, int m1, const std::vector<int>& cols) {
    std::vector<double> acc(l2.size(), 0.0);
    for (int j : cols) {
        auto t = table_1d(m1, static_cast<uint32_t>(j));
        auto proj = minsum_project_1d(l2, t);
        auto fod = first_order_decode(std::span<const double>(proj.real));
        auto contrib = pre_aggregate(l2, fod.codeword, t, static_cast<uint32_t>(j));
        for (size_t z = 0; z < acc.size(); ++z) acc[z] += contrib.real[z];
    }
    std::vector<uint8_t> bits(acc.size());
    for (size_t z = 0; z < acc.size(); ++z) bits[z] = acc[z] < 0 ? 1 : 0;
    return bits;
}

}  // namespace

TEST_CASE("noiseless IUPA decoding is exact with the ideal schedule") {
    FrameRng rng(97, 0);
    for (int m = 5; m <= 6; ++m) {
        DecoderConfig cfg;
        cfg.m = m;
        cfg.r = 3;
        IupaDecoder dec(cfg, ideal_schedule(m));
        RmCode code(m, 3);
        for (int trial = 0; trial < 10; ++trial) {
            auto cw = random_codeword(code, rng);
            auto res = dec.decode(noiseless_llrs(cw));
            CHECK(res.codeword == cw);
            CHECK(res.iterations == 1);
        }
    }
}

TEST_CASE("ideal-schedule projection count equals the collapsed count") {
    DecoderConfig cfg;
    cfg.m = 6;
    cfg.r = 3;
    cfg.n_max = 1;
    IupaDecoder dec(cfg, ideal_schedule(6));
    CHECK(dec.fod_calls_per_iteration() == 651);

    RmCode code(6, 3);
    FrameRng rng(101, 0);
    auto cw = random_codeword(code, rng);
    std::vector<double> llr(64);
    for (int z = 0; z < 64; ++z) llr[z] = (cw[z] ? -1.0 : 1.0) + 0.6 * rng.next_gaussian();
    auto res = dec.decode(LlrVector::from_real(std::move(llr)));
    CHECK(res.fod_calls == 651);
}

TEST_CASE("second_order_group_decode matches the per-operation oracle") {
    DecoderConfig cfg;
    cfg.m = 5;
    cfg.r = 3;
    IupaDecoder dec(cfg, ideal_schedule(5));
    FrameRng rng(103, 0);

    std::vector<int> all_cols;
    for (int j = 1; j <= 15; ++j) all_cols.push_back(j);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> l2(16);
        for (auto& x : l2) x = rng.next_gaussian();
        LlrVector v = LlrVector::from_real(std::vector<double>(l2));
        CHECK(dec.second_order_group_decode(v, all_cols) == sweep_oracle(v, 4, all_cols));

        // A strict subset of columns as an ILP group would use.
        std::vector<int> some{2, 3, 8, 9, 10, 11, 12, 13, 14, 15};
        CHECK(dec.second_order_group_decode(v, some) == sweep_oracle(v, 4, some));
    }
}

TEST_CASE("noiseless second-order group decode recovers the projected codeword") {
    RmCode second(4, 2);
    DecoderConfig cfg;
    cfg.m = 5;
    cfg.r = 3;
    IupaDecoder dec(cfg, ideal_schedule(5));
    FrameRng rng(107, 0);
    std::vector<int> all_cols;
    for (int j = 1; j <= 15; ++j) all_cols.push_back(j);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> u(second.k());
        for (auto& b : u) b = rng.next_bit();
        auto cw = second.encode(u);
        CHECK(dec.second_order_group_decode(noiseless_llrs(cw), all_cols) == cw);
    }
}

TEST_CASE("a duplicated column does not change a clear decision") {
    DecoderConfig cfg;
    cfg.m = 5;
    cfg.r = 3;
    IupaDecoder dec(cfg, ideal_schedule(5));
    RmCode second(4, 2);
    FrameRng rng(109, 0);
    std::vector<int> cols;
    for (int j = 1; j <= 15; ++j) cols.push_back(j);
    auto dup_cols = cols;
    dup_cols.push_back(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> u(second.k());
        for (auto& b : u) b = rng.next_bit();
        auto cw = second.encode(u);
        auto v = noiseless_llrs(cw);
        CHECK(dec.second_order_group_decode(v, cols) == dec.second_order_group_decode(v, dup_cols));
    }
}

TEST_CASE("ILP-backed schedule decodes noiselessly") {
    auto dm = build_redundancy_matrix(5);
    auto model = build_ilp(dm, 2, 2);
    SolveOptions opt;
    opt.time_limit_s = 5;
    auto assign = solve_ilp(model, opt);
    REQUIRE(verify_assignment(model, assign).empty());
    auto sched = derive_schedule(assign, dm);

    DecoderConfig cfg;
    cfg.m = 5;
    cfg.r = 3;
    IupaDecoder dec(cfg, sched);
    RmCode code(5, 3);
    FrameRng rng(113, 0);
    for (int trial = 0; trial < 10; ++trial) {
        auto cw = random_codeword(code, rng);
        auto res = dec.decode(noiseless_llrs(cw));
        CHECK(res.codeword == cw);
    }
    CHECK(dec.fod_calls_per_iteration() >= two_binomial(5, 2));
}

TEST_CASE("schedule validation") {
    DecoderConfig cfg;
    cfg.m = 6;
    cfg.r = 3;
    CHECK_THROWS_AS(IupaDecoder(cfg, ideal_schedule(5)), std::invalid_argument);

    auto sched = ideal_schedule(6);
    sched.rows.pop_back();
    CHECK_THROWS_AS(IupaDecoder(cfg, sched), std::invalid_argument);

    DecoderConfig bad = cfg;
    bad.r = 2;
    CHECK_THROWS_AS(IupaDecoder(bad, ideal_schedule(6)), std::domain_error);
}

TEST_CASE("fixed-point IUPA decodes strong noiseless inputs") {
    DecoderConfig cfg;
    cfg.m = 6;
    cfg.r = 3;
    cfg.quant = QFormat{3, 2};
    IupaDecoder dec(cfg, ideal_schedule(6));
    RmCode code(6, 3);
    FrameRng rng(127, 0);
    for (int trial = 0; trial < 5; ++trial) {
        auto cw = random_codeword(code, rng);
        std::vector<int64_t> raw(64);
        for (int z = 0; z < 64; ++z) raw[z] = cw[z] ? -14 : 14;
        auto res = dec.decode(LlrVector::from_raw(std::move(raw), 2));
        CHECK(res.codeword == cw);
    }
}
