#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rmpa/channel.hpp"
#include "rmpa/cpa.hpp"
#include "rmpa/hw_model.hpp"
#include "rmpa/iupa.hpp"

namespace {

using namespace rmpa;

std::pair<int, int> parse_code(const std::string& s) {
    int m = 0, r = 0;
    char comma = 0;
    std::istringstream is(s);
    if (!(is >> m >> comma >> r) || comma != ',' || !is.eof())
        throw std::invalid_argument("bad --code, expected m,r like 6,3");
    return {m, r};
}

std::optional<QFormat> parse_quant(const std::string& s) {
    if (s.empty() || s == "float") return std::nullopt;
    // Accept q3.2, Q3.2, q3:2.
    if (s.size() >= 4 && (s[0] == 'q' || s[0] == 'Q')) {
        int i = 0, f = 0;
        char sep = 0;
        std::istringstream is(s.substr(1));
        if ((is >> i >> sep >> f) && (sep == '.' || sep == ':') && is.eof() && i >= 2 && f >= 0)
            return QFormat{i, f};
    }
    throw std::invalid_argument("bad --quant, expected float or q<int>.<frac> like q3.2");
}

std::vector<double> parse_snr(const std::string& s) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if ((is >> a >> c1 >> b >> c2 >> step) && c1 == ':' && c2 == ':' && is.eof())
        return snr_sweep(a, b, step);
    std::istringstream single(s);
    if ((single >> a) && single.eof()) return {a};
    throw std::invalid_argument("bad --snr, expected start:stop:step or one value");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f.good()) throw std::runtime_error("write failure on " + path);
}

int run(int argc, char** argv) {
    CLI::App app{"Projection-aggregation decoders for Reed-Muller codes: Monte Carlo FER "
                 "simulation, projection allocation, and hardware models"};
    app.require_subcommand(1);

    // ---- sim ----
    auto* sim = app.add_subcommand("sim", "Monte Carlo frame error rate sweep");
    std::string sim_code = "6,3", sim_decoder, sim_quant = "float", sim_snr;
    std::string sim_schedule, sim_out, sim_jsonl, sim_at = "fp", sim_acc = "sat", sim_combine = "auto";
    bool sim_ideal = false;
    uint64_t sim_frames = 100000, sim_errors = 100, sim_early = 1000, sim_maxframes = 100000000;
    uint64_t sim_seed = 1;
    int sim_nmax = 0, sim_workers = 0, sim_pus = 7;
    sim->add_option("--code", sim_code, "Code parameters m,r")->capture_default_str();
    sim->add_option("--decoder", sim_decoder, "ipa | iupa | cpa")->required();
    sim->add_flag("--ideal", sim_ideal, "Use the duplicate-free reference schedule (iupa)");
    sim->add_option("--schedule", sim_schedule, "Schedule JSON produced by allocate (iupa)");
    sim->add_option("--nmax", sim_nmax, "Outer iterations (0 = ceil(m/2))");
    sim->add_option("--quant", sim_quant, "float or q<i>.<f> fixed point")->capture_default_str();
    sim->add_option("--snr", sim_snr, "Eb/N0 sweep start:stop:step in dB")->required();
    sim->add_option("--frames", sim_frames, "Minimum frames per point")->capture_default_str();
    sim->add_option("--errors", sim_errors, "Minimum frame errors per point")->capture_default_str();
    sim->add_option("--early-stop", sim_early, "Stop a point at this many errors (0 = off)")
        ->capture_default_str();
    sim->add_option("--max-frames", sim_maxframes, "Hard frame cap per point")->capture_default_str();
    sim->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
    sim->add_option("--workers", sim_workers, "Worker threads (0 = all cores)");
    sim->add_option("--pus", sim_pus, "CPA processing units (fixed-point batch width)")
        ->capture_default_str();
    sim->add_option("--at", sim_at, "CPA adder tree: fp | sat")->capture_default_str();
    sim->add_option("--acc", sim_acc, "CPA accumulator: fp | sat")->capture_default_str();
    sim->add_option("--combine", sim_combine, "IUPA second-order combine: auto | fp | hw")
        ->capture_default_str();
    sim->add_option("--out", sim_out, "CSV output path (default stdout)");
    sim->add_option("--jsonl", sim_jsonl, "Also write JSON lines to this path");

    // ---- allocate ----
    auto* alloc = app.add_subcommand("allocate", "Solve the projection-allocation ILP");
    std::string al_code = "6,3", al_out;
    int al_g = 2, al_l = 2, al_stop = -1;
    double al_time = 120.0;
    uint64_t al_seed = 1;
    alloc->add_option("--code", al_code, "Code parameters m,3")->capture_default_str();
    alloc->add_option("-G,--groups", al_g, "Number of second-order decoders")->capture_default_str();
    alloc->add_option("-L,--lambda", al_l, "Latency budget per group")->capture_default_str();
    alloc->add_option("--time-limit", al_time, "Search budget in seconds")->capture_default_str();
    alloc->add_option("--seed", al_seed, "Search seed")->capture_default_str();
    alloc->add_option("--stop-objective", al_stop, "Stop early at this objective (-1 = off)");
    alloc->add_option("--out", al_out, "Schedule JSON path (default stdout)");

    // ---- export-lp ----
    auto* explp = app.add_subcommand("export-lp", "Write the allocation ILP in LP format");
    std::string lp_code = "6,3", lp_out;
    int lp_g = 2, lp_l = 2;
    explp->add_option("--code", lp_code, "Code parameters m,3")->capture_default_str();
    explp->add_option("-G,--groups", lp_g, "Number of second-order decoders")->capture_default_str();
    explp->add_option("-L,--lambda", lp_l, "Latency budget per group")->capture_default_str();
    explp->add_option("--out", lp_out, "LP file path")->required();

    // ---- hwmodel ----
    auto* hw = app.add_subcommand("hwmodel", "Throughput / latency calculators");
    hw->require_subcommand(1);
    auto* hwi = hw->add_subcommand("iupa", "IUPA architecture model");
    std::string hwi_code = "6,3";
    int hwi_g = 2, hwi_l = 2, hwi_tfod = 0, hwi_iters = 2;
    double hwi_f = 714.0;
    hwi->add_option("--code", hwi_code, "Code parameters m,3")->capture_default_str();
    hwi->add_option("-G,--groups", hwi_g, "Groups")->capture_default_str();
    hwi->add_option("-L,--lambda", hwi_l, "Latency budget")->capture_default_str();
    hwi->add_option("-f,--f-mhz", hwi_f, "Clock in MHz")->capture_default_str();
    hwi->add_option("--t-fod", hwi_tfod, "First-order decoder latency (0 = by block length)");
    hwi->add_option("--iters", hwi_iters, "Decoding iterations")->capture_default_str();
    auto* hwc = hw->add_subcommand("cpa", "CPA architecture model");
    std::string hwc_code = "6,3";
    int hwc_p = 21, hwc_tfod = 0, hwc_tadd = 2, hwc_iters = 2;
    double hwc_f = 500.0;
    hwc->add_option("--code", hwc_code, "Code parameters m,r")->capture_default_str();
    hwc->add_option("-p,--pus", hwc_p, "Processing units")->capture_default_str();
    hwc->add_option("-f,--f-mhz", hwc_f, "Clock in MHz")->capture_default_str();
    hwc->add_option("--t-fod", hwc_tfod, "First-order decoder latency (0 = by block length)");
    hwc->add_option("--t-add", hwc_tadd, "Adder tree latency")->capture_default_str();
    hwc->add_option("--iters", hwc_iters, "Decoding iterations")->capture_default_str();

    // ---- codec ----
    auto* codec = app.add_subcommand("codec", "Encode or decode single vectors");
    std::string cd_code = "6,3", cd_encode, cd_decode, cd_decoder = "cpa", cd_quant = "float";
    std::string cd_schedule;
    bool cd_ideal = false;
    int cd_nmax = 0;
    codec->add_option("--code", cd_code, "Code parameters m,r")->capture_default_str();
    codec->add_option("--encode", cd_encode, "Message bits, e.g. 10110...");
    codec->add_option("--decode", cd_decode, "Comma-separated channel LLRs");
    codec->add_option("--decoder", cd_decoder, "ipa | iupa | cpa")->capture_default_str();
    codec->add_flag("--ideal", cd_ideal, "Reference schedule (iupa)");
    codec->add_option("--schedule", cd_schedule, "Schedule JSON (iupa)");
    codec->add_option("--quant", cd_quant, "float or q<i>.<f>")->capture_default_str();
    codec->add_option("--nmax", cd_nmax, "Outer iterations (0 = ceil(m/2))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim->parsed()) {
        ExperimentConfig cfg;
        std::tie(cfg.m, cfg.r) = parse_code(sim_code);
        cfg.decoder = sim_decoder;
        cfg.dcfg.n_max = sim_nmax;
        cfg.dcfg.quant = parse_quant(sim_quant);
        cfg.dcfg.cpa_pus = sim_pus;
        if (sim_at != "fp" && sim_at != "sat") throw std::invalid_argument("--at must be fp or sat");
        if (sim_acc != "fp" && sim_acc != "sat") throw std::invalid_argument("--acc must be fp or sat");
        cfg.dcfg.cpa_tree_saturating = sim_at == "sat";
        cfg.dcfg.cpa_accumulator_saturating = sim_acc == "sat";
        if (sim_combine == "auto")
            cfg.dcfg.iupa_combine = DecoderConfig::Combine::automatic;
        else if (sim_combine == "fp")
            cfg.dcfg.iupa_combine = DecoderConfig::Combine::full_precision;
        else if (sim_combine == "hw")
            cfg.dcfg.iupa_combine = DecoderConfig::Combine::hardware;
        else
            throw std::invalid_argument("--combine must be auto, fp, or hw");
        if (sim_ideal && !sim_schedule.empty())
            throw std::invalid_argument("--ideal and --schedule are mutually exclusive");
        if (!sim_schedule.empty()) {
            cfg.assignment = load_assignment(sim_schedule);
            if (cfg.assignment->m != cfg.m)
                throw std::invalid_argument("schedule file is for a different code");
            std::ostringstream id;
            id << "ilp_g" << cfg.assignment->G << "_l" << cfg.assignment->lambda;
            cfg.schedule_id = id.str();
        } else {
            cfg.schedule_id = "ideal";
        }
        if (cfg.decoder == "iupa" && !sim_ideal && sim_schedule.empty())
            throw std::invalid_argument("iupa needs --ideal or --schedule");
        cfg.eb_n0_db = parse_snr(sim_snr);
        cfg.min_frames = sim_frames;
        cfg.min_errors = sim_errors;
        cfg.early_stop_errors = sim_early;
        cfg.max_frames = sim_maxframes;
        cfg.master_seed = sim_seed;
        cfg.workers = sim_workers;

        auto records = run_fer(cfg);
        std::ostringstream csv;
        write_csv(csv, records);
        if (sim_out.empty())
            std::cout << csv.str();
        else
            write_text_file(sim_out, csv.str());
        if (!sim_jsonl.empty()) {
            std::ostringstream jl;
            write_jsonl(jl, records);
            write_text_file(sim_jsonl, jl.str());
        }
        return 0;
    }

    if (alloc->parsed()) {
        auto [m, r] = parse_code(al_code);
        if (r != 3) throw std::invalid_argument("allocation is defined for r = 3");
        auto dm = build_redundancy_matrix(m);
        auto model = build_ilp(dm, al_g, al_l);
        SolveOptions opt;
        opt.time_limit_s = al_time;
        opt.seed = al_seed;
        opt.stop_objective = al_stop;
        auto assign = solve_ilp(model, opt);
        auto diag = verify_assignment(model, assign);
        if (!diag.empty()) throw std::runtime_error("solver returned an invalid assignment: " + diag);
        auto text = assignment_to_json(assign);
        if (al_out.empty())
            std::cout << text;
        else
            write_text_file(al_out, text);
        std::cerr << "objective " << assign.objective << ", total PUs " << assign.total_pus()
                  << ", duplicates " << assign.duplicate_count
                  << (assign.proven_optimal ? " (proven optimal)" : " (incumbent)") << "\n";
        return 0;
    }

    if (explp->parsed()) {
        auto [m, r] = parse_code(lp_code);
        if (r != 3) throw std::invalid_argument("allocation is defined for r = 3");
        auto dm = build_redundancy_matrix(m);
        auto model = build_ilp(dm, lp_g, lp_l);
        export_lp_file(model, lp_out);
        return 0;
    }

    if (hwi->parsed()) {
        auto [m, r] = parse_code(hwi_code);
        if (r != 3) throw std::invalid_argument("the IUPA model is defined for r = 3");
        std::cout << hw_estimate_to_json(iupa_model(m, hwi_g, hwi_l, hwi_f, hwi_tfod, hwi_iters));
        return 0;
    }
    if (hwc->parsed()) {
        auto [m, r] = parse_code(hwc_code);
        std::cout << hw_estimate_to_json(cpa_model(m, r, hwc_p, hwc_f, hwc_tfod, hwc_tadd, hwc_iters));
        return 0;
    }

    if (codec->parsed()) {
        auto [m, r] = parse_code(cd_code);
        if (cd_encode.empty() == cd_decode.empty())
            throw std::invalid_argument("codec needs exactly one of --encode or --decode");
        RmCode code(m, r);
        if (!cd_encode.empty()) {
            std::vector<uint8_t> u;
            for (char c : cd_encode) {
                if (c != '0' && c != '1') throw std::invalid_argument("--encode expects a bit string");
                u.push_back(c - '0');
            }
            auto cw = code.encode(u);
            for (uint8_t b : cw) std::cout << int(b);
            std::cout << "\n";
            return 0;
        }
        ExperimentConfig cfg;
        cfg.m = m;
        cfg.r = r;
        cfg.decoder = cd_decoder;
        cfg.dcfg.n_max = cd_nmax;
        cfg.dcfg.quant = parse_quant(cd_quant);
        if (!cd_schedule.empty()) cfg.assignment = load_assignment(cd_schedule);
        if (cfg.decoder == "iupa" && !cd_ideal && cd_schedule.empty())
            throw std::invalid_argument("iupa needs --ideal or --schedule");
        auto decoder = make_decoder(cfg);

        std::vector<double> llr;
        std::istringstream is(cd_decode);
        std::string tok;
        while (std::getline(is, tok, ',')) llr.push_back(std::stod(tok));
        LlrVector v = cfg.dcfg.quant ? quantize_llrs(llr, *cfg.dcfg.quant)
                                     : LlrVector::from_real(std::move(llr));
        auto res = decoder->decode(v);
        for (uint8_t b : res.codeword) std::cout << int(b);
        std::cout << "\n";
        std::cerr << "iterations " << res.iterations << ", in-code "
                  << (code.is_codeword(res.codeword) ? "yes" : "no") << "\n";
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
