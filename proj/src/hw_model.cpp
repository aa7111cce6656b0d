#include "rmpa/hw_model.hpp"

#include <stdexcept>

#include <json.hpp>

#include "rmpa/gf2.hpp"

namespace rmpa {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

constexpr int kProj = 1;    // projection unit latency
constexpr int kPreAgg = 1;  // pre-aggregation unit latency

}  // namespace

int default_t_fod(int first_order_length) { return first_order_length <= 16 ? 3 : 4; }

HwEstimate iupa_model(int m, int G, int lambda, double f_mhz, int t_fod, int n_iters) {
    if (!is_pow2(G) || !is_pow2(lambda)) throw std::domain_error("G and lambda must be powers of two");
    if (m < 4 || m > kMaxDimension) throw std::domain_error("m out of range");
    if (n_iters < 1 || f_mhz <= 0.0) throw std::domain_error("invalid iteration count or frequency");
    if (t_fod <= 0) t_fod = default_t_fod(1 << (m - 2));

    HwEstimate est;
    est.decoder = "iupa";
    est.m = m;
    est.r = 3;
    est.G = G;
    est.lambda = lambda;
    est.f_mhz = f_mhz;
    est.t_fod = t_fod;
    est.n_iters = n_iters;

    est.throughput_mbps = 2.0 * G * f_mhz / lambda;

    const int rows = (1 << (m - 1)) - 1;
    const int t_group = (kProj + t_fod + kPreAgg) + lambda + 1;
    const int sweep = (rows * lambda + G - 1) / G;
    est.latency_cc_per_iter = kProj + t_group + kPreAgg + sweep + m;
    est.latency_cc_total = n_iters * est.latency_cc_per_iter;
    est.latency_us = est.latency_cc_total / f_mhz;

    // Register arrays: pipeline stages until the pre-aggregation unit,
    // amortized over lambda (second order) and over one full group sweep
    // (third order).
    const int l_agg2 = kProj + t_fod + kPreAgg;
    const int l_agg3 = kProj + t_group;
    est.ra2nd_depth = (l_agg2 + lambda - 1) / lambda + 1;
    const long denom = static_cast<long>(lambda) * (1 << (m - 1)) * G;
    est.ra3rd_depth = static_cast<int>((l_agg3 + denom - 1) / denom) + 1;
    return est;
}

HwEstimate cpa_model(int m, int r, int p, double f_mhz, int t_fod, int t_add, int n_iters) {
    if (m < 4 || m > kMaxDimension || r < 2 || r >= m) throw std::domain_error("invalid (m, r)");
    if (n_iters < 1 || f_mhz <= 0.0) throw std::domain_error("invalid iteration count or frequency");
    const auto n_p = static_cast<long>(two_binomial(m, r - 1));
    if (p < 1 || n_p % p != 0) throw std::domain_error("p must divide the projection count");
    if (t_fod <= 0) t_fod = default_t_fod(1 << (m - r + 1));

    HwEstimate est;
    est.decoder = "cpa";
    est.m = m;
    est.r = r;
    est.p = p;
    est.f_mhz = f_mhz;
    est.t_fod = t_fod;
    est.t_add = t_add;
    est.n_iters = n_iters;

    const int n = 1 << m;
    est.throughput_mbps = static_cast<double>(p) * f_mhz * n / static_cast<double>(n_p);
    est.latency_cc_per_iter = 1 + kProj + t_fod + kPreAgg + t_add + static_cast<int>(n_p / p);
    est.latency_cc_total = n_iters * est.latency_cc_per_iter;
    est.latency_us = est.latency_cc_total / f_mhz;
    return est;
}

std::string hw_estimate_to_json(const HwEstimate& est) {
    nlohmann::json j;
    j["decoder"] = est.decoder;
    j["m"] = est.m;
    j["r"] = est.r;
    if (est.decoder == "iupa") {
        j["G"] = est.G;
        j["lambda"] = est.lambda;
        j["ra2nd_depth"] = est.ra2nd_depth;
        j["ra3rd_depth"] = est.ra3rd_depth;
    } else {
        j["p"] = est.p;
        j["t_add"] = est.t_add;
    }
    j["f_mhz"] = est.f_mhz;
    j["t_fod"] = est.t_fod;
    j["n_iters"] = est.n_iters;
    j["throughput_mbps"] = est.throughput_mbps;
    j["latency_cc_per_iter"] = est.latency_cc_per_iter;
    j["latency_cc_total"] = est.latency_cc_total;
    j["latency_us"] = est.latency_us;
    return j.dump(2) + "\n";
}

}  // namespace rmpa
