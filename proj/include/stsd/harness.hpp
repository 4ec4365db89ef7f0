#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "stsd/channel.hpp"
#include "stsd/modem.hpp"

namespace stsd {

// Iterative detection/decoding link simulator: one spatial multiplexing
// frame spans `tones` independent narrowband channels, all coded bits of a
// frame share one convolutional codeword and one random interleaver.

enum class DetectorKind { sts, lsd };

struct FrameConfig {
    int mt = 4;
    int mr = 4;
    ConstellationKind mod = ConstellationKind::qam16;
    int tones = 64;
    int iterations = 1;
    double clip_norm = kInf;  // L_max * N_o; detector gets clip_norm / N_o
    double snr_db = 10.0;
    DetectorKind detector = DetectorKind::sts;
    int lsd_list_size = 16;

    int q_bits() const;
    int frame_bits() const { return tones * mt * q_bits(); }
    int info_bits() const { return frame_bits() / 2 - 6; }
    void validate() const;
};

struct FrameResult {
    bool frame_error = false;
    uint64_t cumulative_nodes = 0;  // detector nodes over all tones and iterations
};

/// Simulate one frame end to end. All randomness comes from `frame_seed`,
/// so a (config, seed) pair fully determines the result.
FrameResult run_frame(const FrameConfig& cfg, uint64_t frame_seed);

/// Uniform random permutation of {0..n-1} (Fisher-Yates).
std::vector<int> random_interleaver(int n, Rng& rng);

struct SweepOptions {
    long min_frames = 1000;
    long min_errors = 50;
    long frame_cap = 100000;
    int threads = 1;
};

struct TradeoffPoint {
    double snr_db = 0.0;
    double clip_norm = kInf;
    int iterations = 1;
    long frames = 0;
    long frame_errors = 0;
    double fer = 0.0;
    double mean_cumulative_nodes = 0.0;
};

/// Monte Carlo one grid point: frame i uses seed master_seed ^ i, results
/// are merged in frame order, and the stopping rule (min_frames reached and
/// either min_errors errors seen or the cap hit) is evaluated at fixed
/// batch boundaries, so the outcome does not depend on scheduling.
TradeoffPoint run_point(const FrameConfig& cfg, uint64_t master_seed, const SweepOptions& opt);

std::vector<TradeoffPoint> run_sweep(const std::vector<FrameConfig>& grid, uint64_t master_seed,
                                     const SweepOptions& opt);

/// CSV, one row per point:
/// snr_db,clip_norm,iterations,frames,frame_errors,fer,mean_cumulative_nodes
void write_csv(std::ostream& os, const std::vector<TradeoffPoint>& points);

/// Smallest SNR reaching FER <= 1% on a (snr, fer) curve sorted by SNR.
/// The curve is first made non-increasing (adjacent pooling), then the
/// crossing is interpolated linearly in (dB, log10 FER). Returns nullopt
/// when no point reaches 1%.
std::optional<double> operating_point(std::vector<std::pair<double, double>> curve);

}  // namespace stsd
