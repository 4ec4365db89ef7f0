#include "stsd/conformance.hpp"

#include <algorithm>
#include <cmath>

#include "stsd/channel.hpp"

namespace stsd {

Instance random_instance(uint64_t seed, int mt, ConstellationKind kind, double prior_std) {
    const Constellation& c = constellation_for(kind);
    Rng rng(seed);

    Instance inst;
    inst.mod = kind;
    inst.seed = seed;

    const double snr_db = 20.0 * rng.uniform();
    inst.n_o = snr_to_noise(snr_db, mt);

    const ComplexMatrix h = draw_channel(rng, mt, mt);
    ComplexVector s(mt);
    for (int j = 0; j < mt; ++j) s[j] = c.point(static_cast<int>(rng.bounded(c.size())));
    const ComplexVector y = transmit(h, s, inst.n_o, rng);

    QrResult f = qr_decompose(h);
    inst.ytilde = matched_filter(f.q, y);
    inst.r = std::move(f.r);

    inst.priors = LlrMatrix(mt, c.bits_per_symbol());
    if (prior_std > 0)
        for (double& v : inst.priors.data()) v = prior_std * rng.gauss();
    return inst;
}

bool llr_close(double a, double b, double rel_tol, double abs_tol) {
    return std::abs(a - b) <= std::max(abs_tol, rel_tol * std::max(std::abs(a), std::abs(b)));
}

namespace {

struct Battery {
    std::string name;
    bool pass = true;
    double max_dev = 0.0;
    uint64_t counterexample = 0;

    void record(double dev, bool ok, uint64_t seed) {
        max_dev = std::max(max_dev, dev);
        if (!ok && pass) {
            pass = false;
            counterexample = seed;
        }
    }
};

double matrix_dev(const LlrMatrix& a, const LlrMatrix& b) {
    double dev = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i)
        dev = std::max(dev, std::abs(a.data()[i] - b.data()[i]));
    return dev;
}

bool matrix_close(const LlrMatrix& a, const LlrMatrix& b, double rel = 1e-9, double abs = 1e-12) {
    for (size_t i = 0; i < a.data().size(); ++i)
        if (!llr_close(a.data()[i], b.data()[i], rel, abs)) return false;
    return true;
}

}  // namespace

int run_check(const CheckOptions& opt, std::ostream& out, DetectFn fn) {
    if (!fn)
        fn = [](const Instance& inst, double clip) {
            return detect(inst.ytilde, inst.r, inst.priors, inst.n_o, clip,
                          constellation_for(inst.mod));
        };

    const std::vector<std::pair<int, ConstellationKind>> combos = {
        {1, ConstellationKind::qpsk},  {2, ConstellationKind::qpsk},
        {3, ConstellationKind::qpsk},  {1, ConstellationKind::qam16},
        {2, ConstellationKind::qam16}, {3, ConstellationKind::qam16},
    };
    const std::vector<double> clip_norms = {0.0, 0.2, 1.0, 2.0, 4.0};

    std::vector<Battery> batteries;
    double global_dev = 0.0;

    for (const auto& [mt, kind] : combos) {
        const std::string tag =
            " mt=" + std::to_string(mt) + " mod=" + constellation_kind_name(kind);
        Battery maxlog{"max-log " + tag};
        Battery clipped{"clipped " + tag};
        Battery metric_form{"metric-form" + tag};
        Battery zero_prior{"zero-prior " + tag};
        const Constellation& c = constellation_for(kind);

        for (int i = 0; i < opt.instances; ++i) {
            const uint64_t seed = splitmix64(opt.seed ^ (static_cast<uint64_t>(mt) << 32) ^
                                             (static_cast<uint64_t>(static_cast<int>(kind)) << 40) ^
                                             static_cast<uint64_t>(i));
            const Instance inst = random_instance(seed, mt, kind);
            const OracleResult oracle =
                exhaustive_llrs(inst.ytilde, inst.r, inst.priors, inst.n_o, MetricForm::modified, c);

            // unclipped: extrinsic LLRs and MAP label must match the oracle
            {
                const DetectionResult res = fn(inst, kInf);
                const double dev = matrix_dev(res.extrinsic_llrs, oracle.extrinsic_llrs);
                const bool ok = matrix_close(res.extrinsic_llrs, oracle.extrinsic_llrs) &&
                                res.map_label == oracle.map_label;
                maxlog.record(dev, ok, seed);
                global_dev = std::max(global_dev, dev);
            }

            // clipped grid: output equals the clamped oracle, MAP label intact
            for (double cn : clip_norms) {
                const double clip = cn / inst.n_o;
                const DetectionResult res = fn(inst, clip);
                const LlrMatrix ref = clipped_reference(oracle, clip);
                const double dev = matrix_dev(res.extrinsic_llrs, ref);
                const bool ok =
                    matrix_close(res.extrinsic_llrs, ref) && res.map_label == oracle.map_label;
                clipped.record(dev, ok, seed);
                global_dev = std::max(global_dev, dev);
            }

            // exact and modified prior forms must give the same LLRs
            {
                const OracleResult exact =
                    exhaustive_llrs(inst.ytilde, inst.r, inst.priors, inst.n_o, MetricForm::exact, c);
                const double dev = matrix_dev(exact.extrinsic_llrs, oracle.extrinsic_llrs);
                const bool ok = matrix_close(exact.extrinsic_llrs, oracle.extrinsic_llrs, 1e-9, 1e-9) &&
                                exact.map_label == oracle.map_label;
                metric_form.record(dev, ok, seed);
            }

            // no prior information: extrinsic equals intrinsic
            {
                Instance zp = random_instance(seed, mt, kind, 0.0);
                const OracleResult zo =
                    exhaustive_llrs(zp.ytilde, zp.r, zp.priors, zp.n_o, MetricForm::modified, c);
                const DetectionResult res = fn(zp, kInf);
                const double dev = matrix_dev(res.extrinsic_llrs, zo.intrinsic_llrs);
                const bool ok = matrix_close(res.extrinsic_llrs, zo.intrinsic_llrs, 1e-12, 1e-12);
                zero_prior.record(dev, ok, seed);
            }
        }
        batteries.push_back(maxlog);
        batteries.push_back(clipped);
        batteries.push_back(metric_form);
        batteries.push_back(zero_prior);
    }

    bool all_pass = true;
    for (const Battery& b : batteries) {
        out << (b.pass ? "PASS" : "FAIL") << "  " << b.name << "  max deviation " << b.max_dev;
        if (!b.pass) out << "  counterexample seed " << b.counterexample;
        out << "\n";
        all_pass = all_pass && b.pass;
    }
    out << "max |L^E| deviation = " << global_dev << " (tolerance 1e-9 relative, 1e-12 absolute)\n";
    out << (all_pass ? "all batteries passed\n" : "conformance FAILED\n");
    return all_pass ? 0 : 1;
}

}  // namespace stsd
