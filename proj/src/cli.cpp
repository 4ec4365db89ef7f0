#include "stsd/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stsd/conformance.hpp"

namespace stsd {

namespace {

double parse_clip_value(const std::string& tok) {
    if (tok == "inf") return kInf;
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size() || v < 0 || std::isnan(v))
        throw UsageError("bad clip value: " + tok);
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, sep)) parts.push_back(tok);
    return parts;
}

}  // namespace

std::vector<double> parse_snr_grid(const std::string& text) {
    try {
        const auto parts = split(text, ':');
        if (parts.size() == 1) {
            size_t pos = 0;
            const double v = std::stod(parts[0], &pos);
            if (pos != parts[0].size()) throw UsageError("bad SNR: " + text);
            return {v};
        }
        if (parts.size() != 3) throw UsageError("SNR grid must be start:step:stop, got " + text);
        const double start = std::stod(parts[0]);
        const double step = std::stod(parts[1]);
        const double stop = std::stod(parts[2]);
        if (!(step > 0) || stop < start) throw UsageError("bad SNR grid: " + text);
        std::vector<double> grid;
        for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
        return grid;
    } catch (const std::invalid_argument&) {
        throw UsageError("bad SNR grid: " + text);
    }
}

std::vector<double> parse_clip_list(const std::string& text) {
    std::vector<double> out;
    try {
        for (const std::string& tok : split(text, ',')) out.push_back(parse_clip_value(tok));
    } catch (const std::invalid_argument&) {
        throw UsageError("bad clip list: " + text);
    }
    if (out.empty()) throw UsageError("empty clip list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    try {
        for (const std::string& tok : split(text, ',')) {
            size_t pos = 0;
            const int v = std::stoi(tok, &pos);
            if (pos != tok.size() || v < 1) throw UsageError("bad list entry: " + tok);
            out.push_back(v);
        }
    } catch (const std::invalid_argument&) {
        throw UsageError("bad integer list: " + text);
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

RunSpec parse_args(const std::vector<std::string>& argv) {
    CLI::App app{"soft-input soft-output tree-search MIMO detection simulator", "stsd"};
    app.require_subcommand(1);

    RunSpec spec;
    std::string mod_name = "qam16", snr_text = "10", clip_text = "inf", iter_text = "1";

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", spec.seed, "master seed (required)")->required();
    };

    auto add_sim_flags = [&](CLI::App* cmd) {
        cmd->add_option("--mt", spec.mt, "transmit antennas");
        cmd->add_option("--mr", spec.mr, "receive antennas");
        cmd->add_option("--mod", mod_name, "constellation: qpsk|qam16|qam64");
        cmd->add_option("--tones", spec.tones, "independent channels per frame");
        cmd->add_option("--iters", iter_text, "detector/decoder iteration counts, comma list");
        cmd->add_option("--clip", clip_text, "normalized clip levels L_max*N_o, comma list, inf ok");
        cmd->add_option("--snr", snr_text, "SNR grid in dB: start:step:stop or single value");
        cmd->add_option("--detector", spec.detector, "sts | lsd");
        cmd->add_option("--list-size", spec.list_size, "candidate list size (lsd)");
        cmd->add_option("--frames", spec.frames, "minimum frames per point");
        cmd->add_option("--errors", spec.errors, "frame errors before stopping");
        cmd->add_option("--max-frames", spec.max_frames, "frame cap per point");
        cmd->add_option("--threads", spec.threads, "worker threads");
        cmd->add_option("--out", spec.out_path, "CSV output path (default stdout)");
        add_seed(cmd);
    };

    CLI::App* check = app.add_subcommand("check", "detector-vs-oracle conformance batteries");
    check->add_option("--instances", spec.instances, "instances per system combination");
    add_seed(check);

    CLI::App* simulate = app.add_subcommand("simulate", "single operating point");
    add_sim_flags(simulate);

    CLI::App* sweep = app.add_subcommand("sweep", "clip x iteration x SNR trade-off grid");
    add_sim_flags(sweep);

    std::vector<std::string> args(argv.rbegin(), argv.rend());  // CLI11 wants reversed
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        spec.subcommand = "help";
        return spec;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    spec.subcommand = app.get_subcommands().front()->get_name();
    if (spec.subcommand != "check") {
        spec.mod = constellation_kind_from_name(mod_name);
        spec.snrs = parse_snr_grid(snr_text);
        spec.clips = parse_clip_list(clip_text);
        spec.iters = parse_int_list(iter_text);
        if (spec.detector != "sts" && spec.detector != "lsd")
            throw UsageError("unknown detector: " + spec.detector);
        if (spec.subcommand == "simulate" &&
            (spec.snrs.size() != 1 || spec.clips.size() != 1 || spec.iters.size() != 1))
            throw UsageError("simulate takes single --snr/--clip/--iters values");
    }
    return spec;
}

namespace {

int run_simulation(const RunSpec& spec) {
    std::vector<FrameConfig> grid;
    for (double snr : spec.snrs)
        for (double clip : spec.clips)
            for (int iters : spec.iters) {
                FrameConfig cfg;
                cfg.mt = spec.mt;
                cfg.mr = spec.mr;
                cfg.mod = spec.mod;
                cfg.tones = spec.tones;
                cfg.iterations = iters;
                cfg.clip_norm = clip;
                cfg.snr_db = snr;
                cfg.detector = spec.detector == "lsd" ? DetectorKind::lsd : DetectorKind::sts;
                cfg.lsd_list_size = spec.list_size;
                cfg.validate();
                grid.push_back(cfg);
            }

    SweepOptions opt;
    opt.min_frames = spec.frames;
    opt.min_errors = spec.errors;
    opt.frame_cap = spec.max_frames;
    opt.threads = spec.threads;

    std::vector<TradeoffPoint> points;
    points.reserve(grid.size());
    for (const FrameConfig& cfg : grid) {
        points.push_back(run_point(cfg, spec.seed, opt));
        const TradeoffPoint& p = points.back();
        std::cerr << "point snr=" << p.snr_db << " clip=" << p.clip_norm
                  << " iters=" << p.iterations << " fer=" << p.fer
                  << " nodes=" << p.mean_cumulative_nodes << " (" << p.frames << " frames)\n";
    }

    if (spec.out_path.empty()) {
        write_csv(std::cout, points);
    } else {
        std::ofstream f(spec.out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open output file: " << spec.out_path << "\n";
            return 2;
        }
        write_csv(f, points);
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    RunSpec spec;
    try {
        spec = parse_args(args);
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (spec.subcommand == "help") return 0;
        if (spec.subcommand == "check") {
            CheckOptions opt;
            opt.seed = spec.seed;
            opt.instances = spec.instances;
            return run_check(opt, std::cout);
        }
        return run_simulation(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace stsd
