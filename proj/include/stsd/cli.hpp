#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stsd/harness.hpp"

namespace stsd {

/// Parsed command line. `subcommand` is one of check / simulate / sweep.
struct RunSpec {
    std::string subcommand;

    // simulate / sweep
    int mt = 4;
    int mr = 4;
    ConstellationKind mod = ConstellationKind::qam16;
    int tones = 64;
    std::vector<int> iters = {1};
    std::vector<double> clips = {kInf};    // normalized (L_max * N_o); inf allowed
    std::vector<double> snrs = {10.0};     // dB grid
    std::string detector = "sts";          // sts | lsd
    int list_size = 16;
    long frames = 1000;
    long errors = 50;
    long max_frames = 100000;
    int threads = 1;
    std::string out_path;                  // empty: CSV to stdout

    // check
    int instances = 300;

    uint64_t seed = 0;
};

/// Parse argv into a RunSpec. Throws UsageError (what() carries the
/// message) on unknown flags, malformed grids, or a missing --seed.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunSpec parse_args(const std::vector<std::string>& argv);

/// Grid helpers, exposed for tests: "10:1:20" or a single number for SNR,
/// comma lists with "inf" allowed for clips.
std::vector<double> parse_snr_grid(const std::string& text);
std::vector<double> parse_clip_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Entry point behind main(). Exit codes: 0 success, 1 conformance
/// failure, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace stsd
