#pragma once

#include <string>
#include <vector>

#include "stsd/types.hpp"

namespace stsd {

enum class ConstellationKind { qpsk, qam16, qam64 };

ConstellationKind constellation_kind_from_name(const std::string& name);
std::string constellation_kind_name(ConstellationKind kind);

/// Gray-labeled square constellation with unit average energy.
///
/// Labels take values in {+1,-1}; binary 0 maps to +1. The first Q/2 label
/// bits pick the in-phase axis level, the rest the quadrature level, and
/// within each axis group the first bit is the most significant. Per-axis
/// Gray tables (16-QAM): 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, scaled to
/// unit mean symbol energy.
class Constellation {
public:
    explicit Constellation(ConstellationKind kind);

    ConstellationKind kind() const { return kind_; }
    int bits_per_symbol() const { return q_; }
    int size() const { return static_cast<int>(points_.size()); }

    cplx point(int idx) const { return points_[idx]; }
    const std::vector<cplx>& points() const { return points_; }

    /// Label bit b of point idx, in {+1,-1}.
    int8_t label_bit(int idx, int b) const { return labels_[static_cast<size_t>(idx) * q_ + b]; }

    /// Point whose label equals x (length-Q vector over {+1,-1}).
    cplx map_bits(const std::vector<int8_t>& x) const;
    int point_index_of_label(const std::vector<int8_t>& x) const;

private:
    ConstellationKind kind_;
    int q_ = 0;
    std::vector<cplx> points_;
    std::vector<int8_t> labels_;       // size() * q_, row per point
    std::vector<int> label_to_point_;  // indexed by packed label bits
};

/// Per-point additive prior terms for one spatial layer.
///
/// modified[p] = sum_b( |L_b| - x_b L_b ) / 2         (offset K, min is 0)
/// exact[p]    = modified[p] + sum_b log(1 + exp(-|L_b|))
///
/// The exact entries are the negative log point probabilities induced by the
/// per-bit prior LLRs; the modified entries drop the transcendental constant
/// while staying non-negative, so tree pruning on partial sums stays valid.
struct PriorTableRow {
    std::vector<double> modified;
    std::vector<double> exact;
};

/// Shared immutable instance per kind.
const Constellation& constellation_for(ConstellationKind kind);

/// Build the prior row for one layer from its per-bit prior LLRs
/// (prior_llrs must hold Q finite values).
PriorTableRow prior_table(const Constellation& c, const std::vector<double>& prior_llrs);

/// One row per layer of `priors`.
std::vector<PriorTableRow> build_prior_tables(const Constellation& c, const LlrMatrix& priors);

}  // namespace stsd
