#pragma once

#include <cstdint>
#include <vector>

#include "stsd/detector.hpp"
#include "stsd/modem.hpp"
#include "stsd/numerics.hpp"

namespace stsd {

// Brute-force references for the tree-search detector, plus a list sphere
// decoder baseline. Everything here enumerates leaves outright; the guard
// refuses search spaces beyond 2^20 leaves.

enum class MetricForm { exact, modified };

struct OracleResult {
    BitMatrix map_label;
    double map_metric = kInf;
    LlrMatrix intrinsic_llrs;   // L^D
    LlrMatrix extrinsic_llrs;   // L^E = L^D - L^A
    LlrMatrix counter_metrics;  // per-bit best metric on the side opposite the MAP bit
};

/// Enumerate every symbol vector and take per-bit minima. `form` picks the
/// prior term: `exact` uses the negative log point probabilities, `modified`
/// the offset form used inside the tree search; LLR outputs agree between
/// the two because the difference is constant per layer.
OracleResult exhaustive_llrs(const ComplexVector& ytilde, const ComplexMatrix& r,
                             const LlrMatrix& priors, double n_o, MetricForm form,
                             const Constellation& c);

/// Elementwise clamp of the oracle extrinsic LLRs to [-clip, clip].
LlrMatrix clipped_reference(const OracleResult& oracle, double clip_level);

/// Candidate list of the best `list_size` leaves by channel-only metric,
/// found by a depth-first search without prior terms.
struct LsdList {
    std::vector<std::vector<int>> entries;  // point index per layer
    std::vector<double> channel_metric;     // (1/N_o) ||ytilde - R s||^2
    uint64_t nodes_visited = 0;
};

LsdList build_lsd_list(const ComplexVector& ytilde, const ComplexMatrix& r, double n_o,
                       int list_size, const Constellation& c);

/// Extrinsic LLRs over a fixed candidate list with full (channel + prior)
/// metrics. Bits whose counter-hypothesis is missing from the list come out
/// at +-clip_level; everything is clamped to [-clip_level, clip_level].
LlrMatrix lsd_llrs(const LsdList& list, const Constellation& c, const LlrMatrix& priors,
                   double clip_level);

struct LsdResult {
    LlrMatrix extrinsic_llrs;
    uint64_t nodes_visited = 0;
};

/// Build the list and evaluate it once. Node count covers list building
/// only; re-evaluating the list under new priors is free.
LsdResult lsd_baseline(const ComplexVector& ytilde, const ComplexMatrix& r,
                       const LlrMatrix& priors, double n_o, int list_size, double clip_level,
                       const Constellation& c);

}  // namespace stsd
