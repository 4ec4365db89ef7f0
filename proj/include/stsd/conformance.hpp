#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "stsd/detector.hpp"
#include "stsd/oracle.hpp"

namespace stsd {

/// One preprocessed detection problem: triangularized channel, matched
/// filter output, per-bit priors and noise level.
struct Instance {
    ComplexVector ytilde;
    ComplexMatrix r;
    LlrMatrix priors;
    double n_o = 1.0;
    ConstellationKind mod = ConstellationKind::qpsk;
    uint64_t seed = 0;
};

/// Seeded random instance: square i.i.d. Rayleigh channel, random transmit
/// vector, SNR uniform in [0, 20] dB, Gaussian priors with the given
/// standard deviation. Priors are zero when prior_std == 0.
Instance random_instance(uint64_t seed, int mt, ConstellationKind kind, double prior_std = 2.0);

/// Tolerance used by all equivalence batteries:
/// |a-b| <= max(abs_tol, rel_tol * max(|a|, |b|)).
bool llr_close(double a, double b, double rel_tol = 1e-9, double abs_tol = 1e-12);

struct CheckOptions {
    uint64_t seed = 1;
    int instances = 300;  // per (M_T, constellation) combination
};

using DetectFn = std::function<DetectionResult(const Instance&, double clip_level)>;

/// Run the detector-vs-oracle batteries (max-log, clipped grid, metric-form
/// invariance, zero-prior reduction) over the default small-system grid.
/// Prints one line per battery plus a summary and returns 0 when every
/// battery passes, 1 otherwise. `fn` exists so tests can inject faults; the
/// default runs the tree-search detector.
int run_check(const CheckOptions& opt, std::ostream& out, DetectFn fn = {});

}  // namespace stsd
