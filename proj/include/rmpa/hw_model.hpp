#pragma once

#include <string>

namespace rmpa {

// Closed-form throughput / latency / register-depth estimates for the IUPA
// and CPA architectures.  Projection and pre-aggregation stages take one
// cycle each; the first-order decoder takes t_fod cycles (3 for block
// lengths up to 16, else 4).
struct HwEstimate {
    std::string decoder;
    int m = 0, r = 3;
    int G = 0, lambda = 0, p = 0;
    double f_mhz = 0.0;
    int t_fod = 0, t_add = 0;
    int n_iters = 0;

    double throughput_mbps = 0.0;
    int latency_cc_per_iter = 0;
    int latency_cc_total = 0;
    double latency_us = 0.0;

    // IUPA register arrays (second- and third-order level).
    int ra2nd_depth = 0;
    int ra3rd_depth = 0;
};

int default_t_fod(int first_order_length);

// IUPA third-order model: throughput 2 G f / lambda; per-iteration latency
// t_proj + t_group + t_preAgg + ceil((2^{m-1}-1) lambda / G) + m with
// t_group = (t_proj + t_fod + t_preAgg) + lambda + 1.
HwEstimate iupa_model(int m, int G, int lambda, double f_mhz, int t_fod, int n_iters);

// CPA model: throughput p f n / [m r-1]_2; per-iteration latency
// 1 + t_proj + t_fod + t_preAgg + t_add + [m r-1]_2 / p, where p must divide
// the projection count.
HwEstimate cpa_model(int m, int r, int p, double f_mhz, int t_fod, int t_add, int n_iters);

std::string hw_estimate_to_json(const HwEstimate& est);

}  // namespace rmpa
