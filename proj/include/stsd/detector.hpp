#pragma once

#include <cstdint>
#include <vector>

#include "stsd/modem.hpp"
#include "stsd/numerics.hpp"
#include "stsd/types.hpp"

namespace stsd {

// Soft-input soft-output single tree search sphere decoder.
//
// One depth-first pass over the symbol-vector tree tracks the best (MAP)
// hypothesis together with one extrinsic metric per bit, so every node is
// visited at most once. Branch metrics carry the prior contribution in the
// offset form that keeps them non-negative, clipping of the extrinsic
// metrics is applied inside the search, and the per-node pruning test asks
// whether the subtree could still improve the MAP hypothesis or any
// extrinsic metric.
//
// Level convention: level j in [0, M_T) matches row j of the upper
// triangular R; the search descends from level M_T - 1 to the leaves at
// level 0.

/// Intrinsic -> extrinsic metric map: subtracts the prior share of the
/// given bit. Infinity passes through.
inline double gamma_ie(double lambda, double prior, int bit) {
    return bit == +1 ? lambda - prior : lambda + prior;
}

/// Extrinsic -> intrinsic metric map; exact inverse of gamma_ie.
inline double gamma_ei(double capital_lambda, double prior, int bit) {
    return bit == +1 ? capital_lambda + prior : capital_lambda - prior;
}

/// Running list of the single tree search: current MAP label and metric plus
/// the per-bit extrinsic metrics.
struct SearchState {
    SearchState(int layers, int q_bits, double clip)
        : map_label(layers, q_bits, +1),
          map_metric(kInf),
          extrinsic_metrics(layers, q_bits, kInf),
          clip_level(clip) {}

    BitMatrix map_label;
    double map_metric;
    LlrMatrix extrinsic_metrics;
    double clip_level;
};

/// One branch out of a node: candidate point and its distance increment.
struct Child {
    int point;
    double increment;
};

/// Branch metric for one candidate symbol: squared residual over N_o plus
/// the (offset-form) prior entry. `carry` is ytilde_j minus the interference
/// of the already-fixed levels above, so the residual is carry - r_jj * point.
inline double distance_increment(cplx carry, cplx r_jj, cplx point, double n_o,
                                 double prior_entry) {
    return std::norm(carry - r_jj * point) / n_o + prior_entry;
}

/// All candidate children of a node, sorted by ascending distance increment
/// (ties broken by point index).
std::vector<Child> enumerate_children(const Constellation& c, cplx carry, cplx r_jj, double n_o,
                                      const std::vector<double>& prior_modified);

/// Leaf bookkeeping. A leaf beating the MAP metric replaces the MAP
/// hypothesis: for every bit that flips, the former MAP metric becomes the
/// extrinsic metric of the new counter-hypothesis, and afterwards all
/// extrinsic metrics are clipped to map_metric + clip_level. A leaf that
/// does not beat the MAP metric can only lower extrinsic metrics of bits
/// where it disagrees with the MAP label.
void leaf_update(SearchState& state, const BitMatrix& leaf_label, double leaf_distance,
                 const LlrMatrix& priors);

/// Highest partial distance at which the subtree of a node on `level` could
/// still cause an update. `partial_label` rows >= level must hold the node's
/// bits; rows below are ignored. The MAP metric itself participates in the
/// max so that a clipped extrinsic metric can never cut off the true MAP
/// candidate.
double pruning_threshold(const SearchState& state, const BitMatrix& partial_label, int level,
                         const LlrMatrix& priors);

struct DetectionResult {
    LlrMatrix extrinsic_llrs;
    BitMatrix map_label;
    uint64_t nodes_visited = 0;
};

/// Run the full search. `r` must be upper triangular with positive real
/// diagonal, `clip_level` in [0, inf]. Output extrinsic LLRs are clamped to
/// [-clip_level, clip_level]; nodes_visited counts every node the search
/// enters, leaves included, root excluded.
DetectionResult detect(const ComplexVector& ytilde, const ComplexMatrix& r,
                       const LlrMatrix& priors, double n_o, double clip_level,
                       const Constellation& c);

/// L^D = L^E + L^A, elementwise.
LlrMatrix intrinsic_from_extrinsic(const LlrMatrix& extrinsic, const LlrMatrix& priors);

}  // namespace stsd
