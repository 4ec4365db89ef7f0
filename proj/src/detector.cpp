#include "stsd/detector.hpp"

#include <algorithm>
#include <cmath>

namespace stsd {

std::vector<Child> enumerate_children(const Constellation& c, cplx carry, cplx r_jj, double n_o,
                                      const std::vector<double>& prior_modified) {
    if (static_cast<int>(prior_modified.size()) != c.size())
        throw DimensionError("enumerate_children: prior row size mismatch");
    std::vector<Child> children(c.size());
    for (int p = 0; p < c.size(); ++p)
        children[p] = {p, distance_increment(carry, r_jj, c.point(p), n_o, prior_modified[p])};
    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
        return a.increment != b.increment ? a.increment < b.increment : a.point < b.point;
    });
    return children;
}

void leaf_update(SearchState& state, const BitMatrix& leaf_label, double leaf_distance,
                 const LlrMatrix& priors) {
    const int layers = state.map_label.rows(), q = state.map_label.cols();
    if (leaf_distance < state.map_metric) {
        // new MAP hypothesis: the former MAP metric becomes the extrinsic
        // metric of every bit that flips
        for (int j = 0; j < layers; ++j)
            for (int b = 0; b < q; ++b)
                if (leaf_label(j, b) != state.map_label(j, b))
                    state.extrinsic_metrics(j, b) =
                        gamma_ie(state.map_metric, priors(j, b), leaf_label(j, b));
        state.map_metric = leaf_distance;
        state.map_label = leaf_label;
        const double cap = state.map_metric + state.clip_level;
        for (int j = 0; j < layers; ++j)
            for (int b = 0; b < q; ++b)
                state.extrinsic_metrics(j, b) = std::min(state.extrinsic_metrics(j, b), cap);
    } else {
        for (int j = 0; j < layers; ++j)
            for (int b = 0; b < q; ++b) {
                if (leaf_label(j, b) == state.map_label(j, b)) continue;
                const double v = gamma_ie(leaf_distance, priors(j, b), state.map_label(j, b));
                if (v < state.extrinsic_metrics(j, b)) state.extrinsic_metrics(j, b) = v;
            }
    }
}

double pruning_threshold(const SearchState& state, const BitMatrix& partial_label, int level,
                         const LlrMatrix& priors) {
    const int layers = state.map_label.rows(), q = state.map_label.cols();
    double thr = state.map_metric;
    // fixed levels: only bits disagreeing with the MAP label can be updated
    for (int i = level; i < layers; ++i)
        for (int b = 0; b < q; ++b)
            if (partial_label(i, b) != state.map_label(i, b))
                thr = std::max(thr, gamma_ei(state.extrinsic_metrics(i, b), priors(i, b),
                                             state.map_label(i, b)));
    // unexpanded levels: any bit may end up disagreeing
    for (int i = 0; i < level; ++i)
        for (int b = 0; b < q; ++b)
            thr = std::max(thr, gamma_ei(state.extrinsic_metrics(i, b), priors(i, b),
                                         state.map_label(i, b)));
    return thr;
}

namespace {

struct Search {
    const Constellation& c;
    const ComplexMatrix& r;
    const ComplexVector& yt;
    const LlrMatrix& priors;
    double inv_no;
    int layers, q, npoints;
    std::vector<std::vector<double>> prior_mod;        // per level, per point
    std::vector<std::vector<cplx>> r_point;            // per level: r_jj * point
    SearchState state;
    BitMatrix path_label;                              // bits of the current path
    std::vector<int> path_point;                       // chosen point per level
    uint64_t nodes = 0;
    uint64_t version = 0;                              // bumped on every state change

    // threshold pieces cached per (level, version): max over everything the
    // child's own level does not contribute, and an upper bound over all
    // children (for the sorted early exit)
    struct ThrCache {
        uint64_t version = UINT64_MAX;
        double base = -kInf;
        double bound = -kInf;
    };
    std::vector<ThrCache> thr_cache;

    Search(const Constellation& cc, const ComplexMatrix& rr, const ComplexVector& yy,
           const LlrMatrix& pp, double n_o, double clip)
        : c(cc),
          r(rr),
          yt(yy),
          priors(pp),
          inv_no(1.0 / n_o),
          layers(rr.rows()),
          q(cc.bits_per_symbol()),
          npoints(cc.size()),
          state(rr.rows(), cc.bits_per_symbol(), clip),
          path_label(rr.rows(), cc.bits_per_symbol(), +1),
          path_point(rr.rows(), 0),
          thr_cache(rr.rows()) {
        auto tables = build_prior_tables(c, priors);
        prior_mod.resize(layers);
        r_point.resize(layers);
        for (int j = 0; j < layers; ++j) {
            prior_mod[j] = std::move(tables[j].modified);
            r_point[j].resize(npoints);
            for (int p = 0; p < npoints; ++p) r_point[j][p] = r(j, j) * c.point(p);
        }
    }

    void refresh_cache(int level) {
        ThrCache& tc = thr_cache[level];
        if (tc.version == version) return;
        double base = state.map_metric;
        for (int i = level + 1; i < layers; ++i)
            for (int b = 0; b < q; ++b)
                if (path_label(i, b) != state.map_label(i, b))
                    base = std::max(base, gamma_ei(state.extrinsic_metrics(i, b), priors(i, b),
                                                   state.map_label(i, b)));
        for (int i = 0; i < level; ++i)
            for (int b = 0; b < q; ++b)
                base = std::max(base, gamma_ei(state.extrinsic_metrics(i, b), priors(i, b),
                                               state.map_label(i, b)));
        double bound = base;
        for (int b = 0; b < q; ++b)
            bound = std::max(bound, gamma_ei(state.extrinsic_metrics(level, b), priors(level, b),
                                             state.map_label(level, b)));
        tc.version = version;
        tc.base = base;
        tc.bound = bound;
    }

    void write_level_bits(int level, int point) {
        path_point[level] = point;
        for (int b = 0; b < q; ++b) path_label(level, b) = c.label_bit(point, b);
        ++version;  // cached thresholds depend on the path above a level
    }

    double child_threshold(int level, int point) {
        refresh_cache(level);
        double thr = thr_cache[level].base;
        for (int b = 0; b < q; ++b)
            if (c.label_bit(point, b) != state.map_label(level, b))
                thr = std::max(thr, gamma_ei(state.extrinsic_metrics(level, b), priors(level, b),
                                             state.map_label(level, b)));
        return thr;
    }

    void expand(int level, double parent_distance) {
        cplx carry = yt[level];
        for (int i = level + 1; i < layers; ++i) carry -= r(level, i) * c.point(path_point[i]);

        // children in ascending distance-increment order, point index on ties
        std::vector<Child> children(npoints);
        const std::vector<cplx>& rp = r_point[level];
        const std::vector<double>& pm = prior_mod[level];
        for (int p = 0; p < npoints; ++p)
            children[p] = {p, std::norm(carry - rp[p]) * inv_no + pm[p]};
        std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
            return a.increment != b.increment ? a.increment < b.increment : a.point < b.point;
        });

        for (const Child& ch : children) {
            const double d = parent_distance + ch.increment;
            refresh_cache(level);
            if (d > thr_cache[level].bound) break;  // no later sibling can pass either
            if (d > child_threshold(level, ch.point)) continue;
            ++nodes;
            write_level_bits(level, ch.point);
            if (level == 0) {
                leaf_update(state, path_label, d, priors);
                ++version;
            } else {
                expand(level - 1, d);
            }
        }
    }
};

void validate_detect_inputs(const ComplexVector& ytilde, const ComplexMatrix& r,
                            const LlrMatrix& priors, double n_o, double clip_level,
                            const Constellation& c) {
    const int layers = r.rows();
    if (r.cols() != layers) throw DimensionError("detect: R must be square");
    if (static_cast<int>(ytilde.size()) != layers)
        throw DimensionError("detect: ytilde length must match R");
    if (priors.rows() != layers || priors.cols() != c.bits_per_symbol())
        throw DimensionError("detect: priors must be M_T x Q");
    if (!(n_o > 0)) throw std::invalid_argument("detect: N_o must be positive");
    if (clip_level < 0 || std::isnan(clip_level))
        throw std::invalid_argument("detect: clip level must be >= 0");

    double scale = 0.0;
    for (int i = 0; i < layers; ++i)
        for (int k = 0; k < layers; ++k) scale = std::max(scale, std::abs(r(i, k)));
    for (int i = 0; i < layers; ++i) {
        for (int k = 0; k < i; ++k)
            if (std::abs(r(i, k)) > 1e-9 * scale)
                throw std::invalid_argument("detect: R must be upper triangular");
        if (!(r(i, i).real() > 0) || std::abs(r(i, i).imag()) > 1e-9 * scale)
            throw std::invalid_argument("detect: R diagonal must be real and positive");
    }
}

}  // namespace

DetectionResult detect(const ComplexVector& ytilde, const ComplexMatrix& r,
                       const LlrMatrix& priors, double n_o, double clip_level,
                       const Constellation& c) {
    validate_detect_inputs(ytilde, r, priors, n_o, clip_level, c);

    Search search(c, r, ytilde, priors, n_o, clip_level);
    search.expand(r.rows() - 1, 0.0);

    const int layers = r.rows(), q = c.bits_per_symbol();
    DetectionResult out{LlrMatrix(layers, q), search.state.map_label, search.nodes};
    for (int j = 0; j < layers; ++j)
        for (int b = 0; b < q; ++b) {
            const double lam = search.state.map_metric;
            const double ext = search.state.extrinsic_metrics(j, b);
            double le = out.map_label(j, b) == +1 ? ext - lam : lam - ext;
            le = std::clamp(le, -clip_level, clip_level);
            out.extrinsic_llrs(j, b) = le;
        }
    return out;
}

LlrMatrix intrinsic_from_extrinsic(const LlrMatrix& extrinsic, const LlrMatrix& priors) {
    if (!extrinsic.same_shape(priors))
        throw DimensionError("intrinsic_from_extrinsic: shape mismatch");
    LlrMatrix out = extrinsic;
    for (int j = 0; j < out.rows(); ++j)
        for (int b = 0; b < out.cols(); ++b) out(j, b) += priors(j, b);
    return out;
}

}  // namespace stsd
