#include "stsd/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace stsd {

namespace {

void check_space(int layers, int npoints) {
    const double leaves = std::pow(static_cast<double>(npoints), layers);
    if (leaves > static_cast<double>(1 << 20))
        throw std::invalid_argument("oracle: search space exceeds 2^20 leaves");
}

// Shared leaf enumerator. Mirrors the detector's arithmetic (same carry
// accumulation, same 1/N_o multiply) so identical leaves get identical
// metrics down to the last bit.
struct LeafEnum {
    const Constellation& c;
    const ComplexMatrix& r;
    const ComplexVector& yt;
    double inv_no;
    int layers, npoints;
    std::vector<std::vector<double>> prior;  // per layer, per point; may be empty
    std::vector<std::vector<cplx>> r_point;
    std::vector<int> path;

    LeafEnum(const Constellation& cc, const ComplexMatrix& rr, const ComplexVector& yy,
             double n_o)
        : c(cc),
          r(rr),
          yt(yy),
          inv_no(1.0 / n_o),
          layers(rr.rows()),
          npoints(cc.size()),
          path(rr.rows(), 0) {
        r_point.resize(layers);
        for (int j = 0; j < layers; ++j) {
            r_point[j].resize(npoints);
            for (int p = 0; p < npoints; ++p) r_point[j][p] = r(j, j) * c.point(p);
        }
    }

    template <typename LeafFn>
    void walk(int level, double dist, LeafFn&& on_leaf) {
        cplx carry = yt[level];
        for (int i = level + 1; i < layers; ++i) carry -= r(level, i) * c.point(path[i]);
        for (int p = 0; p < npoints; ++p) {
            double d = dist + std::norm(carry - r_point[level][p]) * inv_no;
            if (!prior.empty()) d += prior[level][p];
            path[level] = p;
            if (level == 0)
                on_leaf(path, d);
            else
                walk(level - 1, d, on_leaf);
        }
    }
};

}  // namespace

OracleResult exhaustive_llrs(const ComplexVector& ytilde, const ComplexMatrix& r,
                             const LlrMatrix& priors, double n_o, MetricForm form,
                             const Constellation& c) {
    const int layers = r.rows(), q = c.bits_per_symbol();
    if (r.cols() != layers || static_cast<int>(ytilde.size()) != layers)
        throw DimensionError("exhaustive_llrs: dimension mismatch");
    if (priors.rows() != layers || priors.cols() != q)
        throw DimensionError("exhaustive_llrs: priors must be M_T x Q");
    if (!(n_o > 0)) throw std::invalid_argument("exhaustive_llrs: N_o must be positive");
    check_space(layers, c.size());

    LeafEnum en(c, r, ytilde, n_o);
    auto tables = build_prior_tables(c, priors);
    en.prior.resize(layers);
    for (int j = 0; j < layers; ++j)
        en.prior[j] =
            form == MetricForm::modified ? std::move(tables[j].modified) : std::move(tables[j].exact);

    LlrMatrix best_plus(layers, q, kInf);   // min metric among leaves with bit +1
    LlrMatrix best_minus(layers, q, kInf);  // min metric among leaves with bit -1
    double best = kInf;
    std::vector<int> best_path(layers, 0);

    en.walk(layers - 1, 0.0, [&](const std::vector<int>& path, double d) {
        for (int j = 0; j < layers; ++j)
            for (int b = 0; b < q; ++b) {
                double& slot = c.label_bit(path[j], b) == +1 ? best_plus(j, b) : best_minus(j, b);
                if (d < slot) slot = d;
            }
        if (d < best) {
            best = d;
            best_path = path;
        }
    });

    OracleResult out;
    out.map_label = BitMatrix(layers, q, +1);
    out.map_metric = best;
    out.intrinsic_llrs = LlrMatrix(layers, q);
    out.extrinsic_llrs = LlrMatrix(layers, q);
    out.counter_metrics = LlrMatrix(layers, q);
    for (int j = 0; j < layers; ++j)
        for (int b = 0; b < q; ++b) {
            const int8_t map_bit = c.label_bit(best_path[j], b);
            out.map_label(j, b) = map_bit;
            out.counter_metrics(j, b) = map_bit == +1 ? best_minus(j, b) : best_plus(j, b);
            out.intrinsic_llrs(j, b) = best_minus(j, b) - best_plus(j, b);
            out.extrinsic_llrs(j, b) = out.intrinsic_llrs(j, b) - priors(j, b);
        }
    return out;
}

LlrMatrix clipped_reference(const OracleResult& oracle, double clip_level) {
    if (clip_level < 0 || std::isnan(clip_level))
        throw std::invalid_argument("clipped_reference: clip level must be >= 0");
    LlrMatrix out = oracle.extrinsic_llrs;
    for (double& v : out.data()) v = std::clamp(v, -clip_level, clip_level);
    return out;
}

LsdList build_lsd_list(const ComplexVector& ytilde, const ComplexMatrix& r, double n_o,
                       int list_size, const Constellation& c) {
    const int layers = r.rows();
    if (r.cols() != layers || static_cast<int>(ytilde.size()) != layers)
        throw DimensionError("build_lsd_list: dimension mismatch");
    if (!(n_o > 0)) throw std::invalid_argument("build_lsd_list: N_o must be positive");
    check_space(layers, c.size());
    const double total = std::pow(static_cast<double>(c.size()), layers);
    if (list_size < 1 || static_cast<double>(list_size) > total)
        throw std::invalid_argument("build_lsd_list: list size out of range");

    LsdList list;
    list.entries.reserve(list_size);
    list.channel_metric.reserve(list_size);
    int worst_idx = -1;
    double worst = kInf;

    LeafEnum en(c, r, ytilde, n_o);  // no prior tables: channel metric only
    const int npoints = c.size();

    auto recompute_worst = [&]() {
        worst_idx = 0;
        worst = list.channel_metric[0];
        for (size_t i = 1; i < list.channel_metric.size(); ++i)
            if (list.channel_metric[i] > worst) {
                worst = list.channel_metric[i];
                worst_idx = static_cast<int>(i);
            }
    };

    // depth-first with ascending-increment children; radius is the worst
    // metric in the list once it is full
    auto go = [&](auto&& self, int level, double dist) -> void {
        cplx carry = en.yt[level];
        for (int i = level + 1; i < layers; ++i) carry -= r(level, i) * c.point(en.path[i]);
        std::vector<Child> children(npoints);  // per level: recursion below must not clobber it
        for (int p = 0; p < npoints; ++p)
            children[p] = {p, std::norm(carry - en.r_point[level][p]) * en.inv_no};
        std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
            return a.increment != b.increment ? a.increment < b.increment : a.point < b.point;
        });
        for (const Child& ch : children) {
            const double d = dist + ch.increment;
            if (static_cast<int>(list.entries.size()) == list_size && d >= worst) break;
            ++list.nodes_visited;
            en.path[level] = ch.point;
            if (level == 0) {
                if (static_cast<int>(list.entries.size()) < list_size) {
                    list.entries.push_back(en.path);
                    list.channel_metric.push_back(d);
                    if (static_cast<int>(list.entries.size()) == list_size) recompute_worst();
                } else {
                    list.entries[worst_idx] = en.path;
                    list.channel_metric[worst_idx] = d;
                    recompute_worst();
                }
            } else {
                self(self, level - 1, d);
            }
        }
    };
    go(go, layers - 1, 0.0);
    return list;
}

LlrMatrix lsd_llrs(const LsdList& list, const Constellation& c, const LlrMatrix& priors,
                   double clip_level) {
    const int layers = priors.rows(), q = priors.cols();
    if (clip_level < 0 || std::isnan(clip_level))
        throw std::invalid_argument("lsd_llrs: clip level must be >= 0");
    if (list.entries.empty()) throw std::invalid_argument("lsd_llrs: empty list");
    if (static_cast<int>(list.entries.front().size()) != layers)
        throw DimensionError("lsd_llrs: list/prior layer mismatch");

    auto tables = build_prior_tables(c, priors);
    LlrMatrix best_plus(layers, q, kInf), best_minus(layers, q, kInf);
    for (size_t e = 0; e < list.entries.size(); ++e) {
        double d = list.channel_metric[e];
        for (int j = 0; j < layers; ++j) d += tables[j].modified[list.entries[e][j]];
        for (int j = 0; j < layers; ++j)
            for (int b = 0; b < q; ++b) {
                double& slot =
                    c.label_bit(list.entries[e][j], b) == +1 ? best_plus(j, b) : best_minus(j, b);
                if (d < slot) slot = d;
            }
    }

    LlrMatrix out(layers, q);
    for (int j = 0; j < layers; ++j)
        for (int b = 0; b < q; ++b) {
            // one side is always populated; a missing counter-hypothesis
            // drives the difference to +-inf and the clamp to +-clip
            const double le = (best_minus(j, b) - best_plus(j, b)) - priors(j, b);
            out(j, b) = std::clamp(le, -clip_level, clip_level);
        }
    return out;
}

LsdResult lsd_baseline(const ComplexVector& ytilde, const ComplexMatrix& r,
                       const LlrMatrix& priors, double n_o, int list_size, double clip_level,
                       const Constellation& c) {
    LsdList list = build_lsd_list(ytilde, r, n_o, list_size, c);
    return {lsd_llrs(list, c, priors, clip_level), list.nodes_visited};
}

}  // namespace stsd
