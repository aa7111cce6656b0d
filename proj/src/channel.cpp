#include "rmpa/channel.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rmpa/cpa.hpp"
#include "rmpa/iupa.hpp"

namespace rmpa {

LlrVector modulate_and_llr(std::span<const uint8_t> codeword, double eb_n0_db, double rate,
                           FrameRng& rng, const std::optional<QFormat>& quant) {
    const double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, eb_n0_db / 10.0));
    const double sigma = std::sqrt(sigma2);
    const double scale = 2.0 / sigma2;

    std::vector<double> llr(codeword.size());
    for (size_t i = 0; i < codeword.size(); ++i) {
        double x = codeword[i] ? -1.0 : 1.0;
        double y = x + sigma * rng.next_gaussian();
        llr[i] = scale * y;
    }
    if (quant) return quantize_llrs(llr, *quant);
    return LlrVector::from_real(std::move(llr));
}

std::unique_ptr<Decoder> make_decoder(const ExperimentConfig& cfg) {
    DecoderConfig dcfg = cfg.dcfg;
    dcfg.m = cfg.m;
    dcfg.r = cfg.r;
    if (cfg.decoder == "ipa") return std::make_unique<IpaDecoder>(dcfg);
    if (cfg.decoder == "cpa") return std::make_unique<CpaDecoder>(dcfg);
    if (cfg.decoder == "iupa") {
        if (cfg.assignment) {
            auto dm = build_redundancy_matrix(cfg.m);
            return std::make_unique<IupaDecoder>(dcfg, derive_schedule(*cfg.assignment, dm));
        }
        if (cfg.schedule_id == "ideal") return std::make_unique<IupaDecoder>(dcfg, ideal_schedule(cfg.m));
        throw std::invalid_argument("iupa requires a schedule file or the ideal schedule");
    }
    throw std::invalid_argument("unknown decoder '" + cfg.decoder + "'");
}

std::vector<double> snr_sweep(double start, double stop, double step) {
    if (step <= 0.0) {
        if (stop != start) throw std::invalid_argument("SNR sweep needs a positive step");
        return {start};
    }
    if (stop < start) throw std::invalid_argument("SNR sweep has stop < start");
    std::vector<double> points;
    for (int i = 0;; ++i) {
        double v = start + i * step;
        if (v > stop + 1e-9) break;
        points.push_back(v);
    }
    return points;
}

namespace {

std::string quant_name(const std::optional<QFormat>& q) {
    if (!q) return "float";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "Q(%d:%d)", q->int_bits, q->frac_bits);
    return buf;
}

}  // namespace

std::vector<FerRecord> run_fer(const ExperimentConfig& cfg) {
    const RmCode code(cfg.m, cfg.r);
    const auto decoder = make_decoder(cfg);
    const double rate = code.rate();

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    // Fixed block size, independent of the worker count: results are scanned
    // in frame order, so the stopping frame is the same for any scheduling.
    constexpr uint64_t kBlock = 1024;

    std::vector<FerRecord> records;
    for (double snr : cfg.eb_n0_db) {
        auto t0 = std::chrono::steady_clock::now();
        uint64_t frames = 0, errors = 0;
        bool done = false;

        auto stop_now = [&]() {
            if (cfg.early_stop_errors > 0 && errors >= cfg.early_stop_errors) return true;
            if (frames >= cfg.max_frames) return true;
            return frames >= cfg.min_frames && errors >= cfg.min_errors;
        };

        for (uint64_t base = 0; !done; base += kBlock) {
            uint64_t count = std::min<uint64_t>(kBlock, cfg.max_frames - base);
            if (count == 0) break;
            std::vector<uint8_t> errs(count, 0);

            auto task = [&](int w) {
                for (uint64_t idx = w; idx < count; idx += workers) {
                    const uint64_t frame = base + idx;
                    FrameRng rng(cfg.master_seed, frame);
                    std::vector<uint8_t> msg(code.k());
                    for (auto& b : msg) b = rng.next_bit();
                    auto cw = code.encode(msg);
                    LlrVector llr = modulate_and_llr(cw, snr, rate, rng, cfg.dcfg.quant);
                    DecodeResult dr = decoder->decode(llr);
                    errs[idx] = dr.codeword != cw ? 1 : 0;
                }
            };
            if (workers == 1) {
                task(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(workers - 1);
                for (int w = 1; w < workers; ++w) pool.emplace_back(task, w);
                task(0);
                for (auto& t : pool) t.join();
            }

            for (uint64_t idx = 0; idx < count; ++idx) {
                ++frames;
                errors += errs[idx];
                if (stop_now()) {
                    done = true;
                    break;
                }
            }
        }

        FerRecord rec;
        rec.m = cfg.m;
        rec.r = cfg.r;
        rec.decoder = cfg.decoder;
        rec.schedule = cfg.decoder == "iupa" ? cfg.schedule_id : "-";
        rec.quant = quant_name(cfg.dcfg.quant);
        rec.n_max = cfg.dcfg.effective_n_max();
        rec.eb_n0_db = snr;
        rec.frames = frames;
        rec.frame_errors = errors;
        rec.fer = frames ? static_cast<double>(errors) / static_cast<double>(frames) : 0.0;
        rec.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.master_seed = cfg.master_seed;
        records.push_back(std::move(rec));
    }
    return records;
}

const char* const kCsvHeader = "m,r,decoder,schedule,quant,nmax,ebn0_db,frames,errors,fer,seed";

void write_csv(std::ostream& os, std::span<const FerRecord> records) {
    os << kCsvHeader << "\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%s,%s,%s,%d,%.2f,%llu,%llu,%.6e,%llu", r.m, r.r,
                      r.decoder.c_str(), r.schedule.c_str(), r.quant.c_str(), r.n_max, r.eb_n0_db,
                      static_cast<unsigned long long>(r.frames),
                      static_cast<unsigned long long>(r.frame_errors), r.fer,
                      static_cast<unsigned long long>(r.master_seed));
        os << buf << "\n";
    }
}

void write_jsonl(std::ostream& os, std::span<const FerRecord> records) {
    for (const auto& r : records) {
        nlohmann::json j;
        j["m"] = r.m;
        j["r"] = r.r;
        j["decoder"] = r.decoder;
        j["schedule"] = r.schedule;
        j["quant"] = r.quant;
        j["nmax"] = r.n_max;
        j["ebn0_db"] = r.eb_n0_db;
        j["frames"] = r.frames;
        j["errors"] = r.frame_errors;
        j["fer"] = r.fer;
        j["wall_time_s"] = r.wall_time_s;
        j["seed"] = r.master_seed;
        os << j.dump() << "\n";
    }
}

}  // namespace rmpa
