#include "stsd/modem.hpp"

#include <cmath>
#include <numeric>

namespace stsd {

ConstellationKind constellation_kind_from_name(const std::string& name) {
    if (name == "qpsk") return ConstellationKind::qpsk;
    if (name == "qam16") return ConstellationKind::qam16;
    if (name == "qam64") return ConstellationKind::qam64;
    throw std::invalid_argument("unknown constellation: " + name);
}

std::string constellation_kind_name(ConstellationKind kind) {
    switch (kind) {
        case ConstellationKind::qpsk: return "qpsk";
        case ConstellationKind::qam16: return "qam16";
        case ConstellationKind::qam64: return "qam64";
    }
    return "?";
}

namespace {

// Per-axis amplitude for a reflected-Gray axis code of `bits` bits.
// Binary value g (MSB first) indexes the Gray sequence 00->-3, 01->-1,
// 11->+1, 10->+3 and its 1-bit/3-bit analogues.
double axis_level(unsigned bin, int bits) {
    // convert binary (MSB first) to the rank along the axis
    unsigned gray = bin;
    unsigned rank = 0;
    for (int i = bits - 1; i >= 0; --i) {
        unsigned g = (gray >> i) & 1u;
        rank = (rank << 1) | (g ^ (rank & 1u));
    }
    const int levels = 1 << bits;
    return static_cast<double>(2 * static_cast<int>(rank) - (levels - 1));
}

}  // namespace

Constellation::Constellation(ConstellationKind kind) : kind_(kind) {
    switch (kind) {
        case ConstellationKind::qpsk: q_ = 2; break;
        case ConstellationKind::qam16: q_ = 4; break;
        case ConstellationKind::qam64: q_ = 6; break;
    }
    const int n = 1 << q_;
    const int axis_bits = q_ / 2;
    const int axis_levels = 1 << axis_bits;

    // unit mean energy: E = 2 * mean(level^2) over one axis
    double e_axis = 0.0;
    for (int v = 0; v < axis_levels; ++v) {
        double a = 2.0 * v - (axis_levels - 1);
        e_axis += a * a;
    }
    const double scale = 1.0 / std::sqrt(2.0 * e_axis / axis_levels);

    points_.resize(n);
    labels_.assign(static_cast<size_t>(n) * q_, 0);
    label_to_point_.assign(n, -1);

    for (int p = 0; p < n; ++p) {
        // binary label of point p: bit b is (p >> (q-1-b)) & 1, so bit 0 is
        // the most significant of the in-phase group
        unsigned in_bin = 0, qu_bin = 0;
        for (int b = 0; b < axis_bits; ++b) in_bin = (in_bin << 1) | ((p >> (q_ - 1 - b)) & 1);
        for (int b = axis_bits; b < q_; ++b) qu_bin = (qu_bin << 1) | ((p >> (q_ - 1 - b)) & 1);

        points_[p] = cplx(axis_level(in_bin, axis_bits), axis_level(qu_bin, axis_bits)) * scale;

        unsigned packed = 0;
        for (int b = 0; b < q_; ++b) {
            const int bin = (p >> (q_ - 1 - b)) & 1;
            labels_[static_cast<size_t>(p) * q_ + b] = bin ? -1 : +1;  // binary 0 <-> +1
            packed |= static_cast<unsigned>(bin) << b;
        }
        label_to_point_[packed] = p;
    }
}

int Constellation::point_index_of_label(const std::vector<int8_t>& x) const {
    if (static_cast<int>(x.size()) != q_)
        throw std::invalid_argument("map_bits: label length must equal Q");
    unsigned packed = 0;
    for (int b = 0; b < q_; ++b) {
        if (x[b] != 1 && x[b] != -1)
            throw std::invalid_argument("map_bits: label entries must be +1 or -1");
        packed |= static_cast<unsigned>(x[b] == -1) << b;
    }
    return label_to_point_[packed];
}

cplx Constellation::map_bits(const std::vector<int8_t>& x) const {
    return points_[point_index_of_label(x)];
}

const Constellation& constellation_for(ConstellationKind kind) {
    static const Constellation qpsk(ConstellationKind::qpsk);
    static const Constellation qam16(ConstellationKind::qam16);
    static const Constellation qam64(ConstellationKind::qam64);
    switch (kind) {
        case ConstellationKind::qpsk: return qpsk;
        case ConstellationKind::qam16: return qam16;
        case ConstellationKind::qam64: return qam64;
    }
    return qpsk;
}

PriorTableRow prior_table(const Constellation& c, const std::vector<double>& prior_llrs) {
    const int q = c.bits_per_symbol();
    if (static_cast<int>(prior_llrs.size()) != q)
        throw std::invalid_argument("prior_table: need Q prior LLRs");

    double k_mod = 0.0, k_exact = 0.0;
    for (double l : prior_llrs) {
        if (!std::isfinite(l)) throw std::invalid_argument("prior_table: prior LLRs must be finite");
        k_mod += 0.5 * std::abs(l);
        k_exact += 0.5 * std::abs(l) + std::log1p(std::exp(-std::abs(l)));
    }

    PriorTableRow row;
    row.modified.resize(c.size());
    row.exact.resize(c.size());
    for (int p = 0; p < c.size(); ++p) {
        double base = 0.0;
        for (int b = 0; b < q; ++b) base -= 0.5 * c.label_bit(p, b) * prior_llrs[b];
        row.modified[p] = base + k_mod;
        row.exact[p] = base + k_exact;
    }
    return row;
}

std::vector<PriorTableRow> build_prior_tables(const Constellation& c, const LlrMatrix& priors) {
    if (priors.cols() != c.bits_per_symbol())
        throw DimensionError("build_prior_tables: priors must have Q columns");
    std::vector<PriorTableRow> rows;
    rows.reserve(priors.rows());
    std::vector<double> la(priors.cols());
    for (int j = 0; j < priors.rows(); ++j) {
        for (int b = 0; b < priors.cols(); ++b) la[b] = priors(j, b);
        rows.push_back(prior_table(c, la));
    }
    return rows;
}

}  // namespace stsd
