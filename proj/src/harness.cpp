#include "stsd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "stsd/coding.hpp"
#include "stsd/detector.hpp"
#include "stsd/oracle.hpp"

namespace stsd {

int FrameConfig::q_bits() const {
    switch (mod) {
        case ConstellationKind::qpsk: return 2;
        case ConstellationKind::qam16: return 4;
        case ConstellationKind::qam64: return 6;
    }
    return 0;
}

void FrameConfig::validate() const {
    if (mt < 1 || mr < mt) throw std::invalid_argument("config: need M_R >= M_T >= 1");
    if (tones < 1) throw std::invalid_argument("config: tones must be >= 1");
    if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
    if (clip_norm < 0 || std::isnan(clip_norm))
        throw std::invalid_argument("config: clip level must be >= 0");
    if (frame_bits() != tones * mt * q_bits())
        throw std::invalid_argument("config: frame bit count mismatch");
    if (info_bits() < 1)
        throw std::invalid_argument("config: frame too short for a terminated codeword");
    if (detector == DetectorKind::lsd) {
        if (lsd_list_size < 1) throw std::invalid_argument("config: list size must be >= 1");
        if (!std::isfinite(clip_norm))
            throw std::invalid_argument("config: the list detector needs a finite clip level");
    }
}

std::vector<int> random_interleaver(int n, Rng& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(rng.bounded(static_cast<uint64_t>(i) + 1))]);
    return perm;
}

FrameResult run_frame(const FrameConfig& cfg, uint64_t frame_seed) {
    cfg.validate();
    const Constellation& c = constellation_for(cfg.mod);
    const int q = cfg.q_bits(), mt = cfg.mt, tones = cfg.tones;
    const int nbits = cfg.frame_bits();
    const double n_o = snr_to_noise(cfg.snr_db, mt);
    const double clip = cfg.clip_norm / n_o;

    Rng rng(frame_seed);

    // data, interleaver, channel; fixed draw order so every detector
    // setting sees the same frame
    std::vector<uint8_t> info(cfg.info_bits());
    for (uint8_t& b : info) b = static_cast<uint8_t>(rng.bounded(2));
    const std::vector<uint8_t> coded = conv_encode(info);
    const std::vector<int> perm = random_interleaver(nbits, rng);

    std::vector<uint8_t> tx(nbits);
    for (int i = 0; i < nbits; ++i) tx[i] = coded[perm[i]];

    std::vector<int> sym(tones * mt);
    std::vector<int8_t> label(q);
    for (int m = 0; m < tones * mt; ++m) {
        for (int b = 0; b < q; ++b) label[b] = tx[m * q + b] ? -1 : +1;
        sym[m] = c.point_index_of_label(label);
    }

    struct Tone {
        ComplexMatrix r;
        ComplexVector ytilde;
        std::vector<int> ant;  // detector level -> antenna
        LsdList list;
    };
    std::vector<Tone> prep;
    prep.reserve(tones);
    for (int t = 0; t < tones; ++t) {
        const ComplexMatrix h = draw_channel(rng, cfg.mr, mt);
        ComplexVector s(mt);
        for (int j = 0; j < mt; ++j) s[j] = c.point(sym[t * mt + j]);
        const ComplexVector y = transmit(h, s, n_o, rng);
        SortedQrResult f = sorted_qr(h);
        prep.push_back({std::move(f.r), matched_filter(f.q, y), std::move(f.perm), {}});
    }

    std::vector<double> prior_stream(nbits, 0.0);  // detector-side, transmit order
    std::vector<double> ext_stream(nbits, 0.0);
    LlrMatrix la(mt, q);
    uint64_t nodes = 0;
    BcjrResult dec;

    for (int it = 0; it < cfg.iterations; ++it) {
        for (int t = 0; t < tones; ++t) {
            Tone& tone = prep[t];
            for (int k = 0; k < mt; ++k)
                for (int b = 0; b < q; ++b)
                    la(k, b) = prior_stream[(t * mt + tone.ant[k]) * q + b];

            if (cfg.detector == DetectorKind::sts) {
                DetectionResult res = detect(tone.ytilde, tone.r, la, n_o, clip, c);
                nodes += res.nodes_visited;
                for (int k = 0; k < mt; ++k)
                    for (int b = 0; b < q; ++b)
                        ext_stream[(t * mt + tone.ant[k]) * q + b] = res.extrinsic_llrs(k, b);
            } else {
                if (it == 0) {  // list is built once and reused
                    tone.list = build_lsd_list(tone.ytilde, tone.r, n_o, cfg.lsd_list_size, c);
                    nodes += tone.list.nodes_visited;
                }
                LlrMatrix le = lsd_llrs(tone.list, c, la, clip);
                for (int k = 0; k < mt; ++k)
                    for (int b = 0; b < q; ++b)
                        ext_stream[(t * mt + tone.ant[k]) * q + b] = le(k, b);
            }
        }

        std::vector<double> dec_in(nbits);
        for (int i = 0; i < nbits; ++i) dec_in[perm[i]] = ext_stream[i];
        dec = bcjr_decode(dec_in);
        for (int i = 0; i < nbits; ++i) prior_stream[i] = dec.extrinsic[perm[i]];
    }

    FrameResult out;
    out.cumulative_nodes = nodes;
    out.frame_error = dec.info_hard != info;
    return out;
}

TradeoffPoint run_point(const FrameConfig& cfg, uint64_t master_seed, const SweepOptions& opt) {
    cfg.validate();
    if (opt.min_frames < 1) throw std::invalid_argument("sweep: min_frames must be >= 1");

    TradeoffPoint pt;
    pt.snr_db = cfg.snr_db;
    pt.clip_norm = cfg.clip_norm;
    pt.iterations = cfg.iterations;

    const long batch = 64;
    long frames = 0, errors = 0;
    uint64_t nodes = 0;

    std::vector<FrameResult> results(batch);
    const int threads = std::max(1, opt.threads);

    auto stop = [&]() {
        return frames >= opt.min_frames && (errors >= opt.min_errors || frames >= opt.frame_cap);
    };

    while (!stop()) {
        long count = batch;
        if (frames < opt.min_frames)
            count = std::min(count, opt.min_frames - frames);
        else
            count = std::min(count, opt.frame_cap - frames);
        if (threads == 1) {
            for (long i = 0; i < count; ++i)
                results[i] = run_frame(cfg, master_seed ^ static_cast<uint64_t>(frames + i));
        } else {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (int w = 0; w < threads; ++w)
                pool.emplace_back([&, w]() {
                    for (long i = w; i < count; i += threads)
                        results[i] = run_frame(cfg, master_seed ^ static_cast<uint64_t>(frames + i));
                });
            for (auto& th : pool) th.join();
        }
        for (long i = 0; i < count; ++i) {  // ordered merge
            errors += results[i].frame_error ? 1 : 0;
            nodes += results[i].cumulative_nodes;
        }
        frames += count;
    }

    pt.frames = frames;
    pt.frame_errors = errors;
    pt.fer = static_cast<double>(errors) / static_cast<double>(frames);
    pt.mean_cumulative_nodes = static_cast<double>(nodes) / static_cast<double>(frames);
    return pt;
}

std::vector<TradeoffPoint> run_sweep(const std::vector<FrameConfig>& grid, uint64_t master_seed,
                                     const SweepOptions& opt) {
    std::vector<TradeoffPoint> out;
    out.reserve(grid.size());
    for (const FrameConfig& cfg : grid) out.push_back(run_point(cfg, master_seed, opt));
    return out;
}

void write_csv(std::ostream& os, const std::vector<TradeoffPoint>& points) {
    os << "snr_db,clip_norm,iterations,frames,frame_errors,fer,mean_cumulative_nodes\n";
    char buf[160];
    for (const TradeoffPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%ld,%ld,%.10g,%.10g\n", p.snr_db,
                      p.clip_norm, p.iterations, p.frames, p.frame_errors, p.fer,
                      p.mean_cumulative_nodes);
        os << buf;
    }
}

std::optional<double> operating_point(std::vector<std::pair<double, double>> curve) {
    if (curve.empty()) return std::nullopt;
    for (size_t i = 1; i < curve.size(); ++i)
        if (curve[i].first <= curve[i - 1].first)
            throw std::invalid_argument("operating_point: curve must be sorted by SNR");

    // pool adjacent violators so FER is non-increasing in SNR
    std::vector<std::pair<double, long>> blocks;  // (fer sum, count)
    std::vector<size_t> sizes;
    for (auto& [snr, fer] : curve) {
        (void)snr;
        blocks.push_back({fer, 1});
        while (blocks.size() > 1) {
            auto& prev = blocks[blocks.size() - 2];
            auto& last = blocks.back();
            if (prev.first / prev.second >= last.first / last.second) break;
            prev.first += last.first;
            prev.second += last.second;
            blocks.pop_back();
        }
    }
    std::vector<double> fer_fit;
    for (auto& [sum, count] : blocks)
        for (long i = 0; i < count; ++i) fer_fit.push_back(sum / count);

    const double target = 0.01;
    const double floor = 1e-12;
    for (size_t i = 0; i < curve.size(); ++i) {
        if (fer_fit[i] > target) continue;
        if (i == 0) return curve[0].first;
        const double f_hi = std::max(fer_fit[i - 1], floor);
        const double f_lo = std::max(fer_fit[i], floor);
        const double t = (std::log10(target) - std::log10(f_hi)) /
                         (std::log10(f_lo) - std::log10(f_hi));
        return curve[i - 1].first + t * (curve[i].first - curve[i - 1].first);
    }
    return std::nullopt;
}

}  // namespace stsd
