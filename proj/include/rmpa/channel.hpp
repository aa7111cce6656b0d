#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmpa/allocation.hpp"
#include "rmpa/pa_core.hpp"
#include "rmpa/rm_code.hpp"
#include "rmpa/rng.hpp"

namespace rmpa {

// BPSK over AWGN: bit 0 -> +1, bit 1 -> -1, noise variance
// sigma^2 = 1 / (2 * rate * 10^(EbN0/10)), channel LLR = 2 y / sigma^2,
// quantized afterwards when a Q-format is given.
LlrVector modulate_and_llr(std::span<const uint8_t> codeword, double eb_n0_db, double rate,
                           FrameRng& rng, const std::optional<QFormat>& quant);

struct FerRecord {
    int m = 0, r = 0;
    std::string decoder;
    std::string schedule;
    std::string quant;
    int n_max = 0;
    double eb_n0_db = 0.0;
    uint64_t frames = 0;
    uint64_t frame_errors = 0;
    double fer = 0.0;
    double wall_time_s = 0.0;
    uint64_t master_seed = 0;
};

struct ExperimentConfig {
    int m = 6, r = 3;
    std::string decoder = "iupa";        // ipa | iupa | cpa
    std::string schedule_id = "ideal";   // ideal | ilp_gG_lL | -
    std::optional<GroupAssignment> assignment;  // iupa with an ILP schedule
    DecoderConfig dcfg;

    std::vector<double> eb_n0_db;
    uint64_t min_frames = 100000;
    uint64_t min_errors = 100;
    uint64_t early_stop_errors = 1000;
    uint64_t max_frames = 100000000;
    uint64_t master_seed = 1;
    int workers = 0;  // 0 = all hardware threads
};

// Monte Carlo FER sweep.  Frames carry random messages; a frame error is any
// decoded/transmitted codeword mismatch.  Per Eb/N0 point the simulation
// runs until both the frame and the error floor are met, stopping early at
// `early_stop_errors`.  Records are bit-identical for a fixed seed
// regardless of the worker count.
std::vector<FerRecord> run_fer(const ExperimentConfig& cfg);

// Decoder factory shared by the harness and the CLI.
std::unique_ptr<Decoder> make_decoder(const ExperimentConfig& cfg);

// Inclusive start:stop:step sweep in dB.
std::vector<double> snr_sweep(double start, double stop, double step);

extern const char* const kCsvHeader;  // m,r,decoder,schedule,quant,nmax,ebn0_db,frames,errors,fer,seed
void write_csv(std::ostream& os, std::span<const FerRecord> records);
void write_jsonl(std::ostream& os, std::span<const FerRecord> records);

}  // namespace rmpa
