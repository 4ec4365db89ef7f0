#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stsd/harness.hpp"

using namespace stsd;

namespace {

FrameConfig small_config() {
    FrameConfig cfg;
    cfg.mt = 2;
    cfg.mr = 2;
    cfg.mod = ConstellationKind::qpsk;
    cfg.tones = 16;
    cfg.iterations = 1;
    cfg.clip_norm = kInf;
    cfg.snr_db = 60.0;
    return cfg;
}

}  // namespace

TEST_CASE("interleaver round trip and permutation property") {
    Rng rng(5);
    const int n = 64;
    const std::vector<int> perm = random_interleaver(n, rng);
    std::vector<int> seen(n, 0);
    for (int p : perm) seen.at(p)++;
    for (int s : seen) CHECK(s == 1);

    std::vector<double> data(n);
    for (int i = 0; i < n; ++i) data[i] = i * 0.5;
    std::vector<double> inter(n), back(n);
    for (int i = 0; i < n; ++i) inter[i] = data[perm[i]];
    for (int i = 0; i < n; ++i) back[perm[i]] = inter[i];
    CHECK(back == data);
}

TEST_CASE("noiseless frames decode cleanly") {
    const FrameConfig cfg = small_config();
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const FrameResult res = run_frame(cfg, seed);
        CHECK_FALSE(res.frame_error);
        CHECK(res.cumulative_nodes >= static_cast<uint64_t>(cfg.tones * cfg.mt));
    }
}

TEST_CASE("noiseless frames decode cleanly on the six-bit constellation") {
    FrameConfig cfg;
    cfg.mt = 2;
    cfg.mr = 2;
    cfg.mod = ConstellationKind::qam64;
    cfg.tones = 4;  // 48 coded bits
    cfg.snr_db = 60.0;
    const FrameResult res = run_frame(cfg, 3);
    CHECK_FALSE(res.frame_error);
}

TEST_CASE("frames are deterministic in the seed") {
    FrameConfig cfg = small_config();
    cfg.snr_db = 4.0;
    const FrameResult a = run_frame(cfg, 1234);
    const FrameResult b = run_frame(cfg, 1234);
    CHECK(a.frame_error == b.frame_error);
    CHECK(a.cumulative_nodes == b.cumulative_nodes);
    const FrameResult other = run_frame(cfg, 1235);
    CHECK((other.cumulative_nodes != a.cumulative_nodes || other.frame_error != a.frame_error));
}

TEST_CASE("cumulative node counts add up over iterations") {
    FrameConfig cfg = small_config();
    cfg.snr_db = 5.0;
    for (uint64_t seed = 10; seed < 20; ++seed) {
        FrameConfig one = cfg, two = cfg;
        one.iterations = 1;
        two.iterations = 2;
        const FrameResult r1 = run_frame(one, seed);
        const FrameResult r2 = run_frame(two, seed);
        CHECK(r2.cumulative_nodes > r1.cumulative_nodes);
    }
}

TEST_CASE("config validation rejects inconsistent setups") {
    FrameConfig cfg = small_config();
    cfg.mr = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = small_config();
    cfg.tones = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = small_config();
    cfg.mt = 1;
    cfg.mr = 1;
    cfg.tones = 3;  // 6 coded bits: too short for the tail
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = small_config();
    cfg.detector = DetectorKind::lsd;  // needs a finite clip
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = small_config();
    cfg.clip_norm = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("noiseless point reports zero fer and honors min_frames") {
    const FrameConfig cfg = small_config();
    SweepOptions opt;
    opt.min_frames = 50;
    opt.min_errors = 0;
    const TradeoffPoint pt = run_point(cfg, 77, opt);
    CHECK(pt.frames == 50);
    CHECK(pt.frame_errors == 0);
    CHECK(pt.fer == 0.0);
    CHECK(pt.mean_cumulative_nodes > 0.0);
}

TEST_CASE("sweep output is byte-identical across runs") {
    FrameConfig cfg = small_config();
    cfg.snr_db = 4.0;
    SweepOptions opt;
    opt.min_frames = 40;
    opt.min_errors = 0;

    std::ostringstream a, b;
    write_csv(a, run_sweep({cfg, cfg}, 99, opt));
    write_csv(b, run_sweep({cfg, cfg}, 99, opt));
    const std::string sa = a.str();
    CHECK(sa == b.str());
    CHECK(sa.rfind("snr_db,clip_norm,iterations,frames,frame_errors,fer,"
                   "mean_cumulative_nodes\n", 0) == 0);
    // header plus one row per point
    CHECK(std::count(sa.begin(), sa.end(), '\n') == 3);
}

TEST_CASE("threaded and sequential points agree") {
    FrameConfig cfg = small_config();
    cfg.snr_db = 3.0;
    SweepOptions seq, par;
    seq.min_frames = par.min_frames = 64;
    seq.min_errors = par.min_errors = 0;
    seq.threads = 1;
    par.threads = 3;
    const TradeoffPoint a = run_point(cfg, 5, seq);
    const TradeoffPoint b = run_point(cfg, 5, par);
    CHECK(a.frames == b.frames);
    CHECK(a.frame_errors == b.frame_errors);
    CHECK(a.mean_cumulative_nodes == b.mean_cumulative_nodes);
}

TEST_CASE("mean node counts grow with the clip level") {
    FrameConfig cfg = small_config();
    cfg.snr_db = 6.0;
    SweepOptions opt;
    opt.min_frames = 100;
    opt.min_errors = 0;

    FrameConfig tight = cfg, loose = cfg;
    tight.clip_norm = 0.2;
    loose.clip_norm = kInf;
    const TradeoffPoint a = run_point(tight, 21, opt);
    const TradeoffPoint b = run_point(loose, 21, opt);
    CHECK(a.mean_cumulative_nodes <= b.mean_cumulative_nodes);
}

TEST_CASE("soft output does not lose to hard output") {
    // small-system trend check; the full-size counterpart lives in the
    // acceptance suite. At zero clip the decoder sees silent LLRs, so the
    // hard-output frame error rate is near one by construction.
    SweepOptions opt;
    opt.min_frames = 400;
    opt.min_errors = 0;

    FrameConfig hard = small_config(), soft = small_config();
    hard.snr_db = soft.snr_db = 4.0;
    hard.clip_norm = 0.0;
    soft.clip_norm = kInf;
    const TradeoffPoint hard_pt = run_point(hard, 31, opt);
    const TradeoffPoint soft_pt = run_point(soft, 31, opt);

    const double n = static_cast<double>(opt.min_frames);
    const double margin = 1.645 * std::sqrt((soft_pt.fer * (1 - soft_pt.fer) +
                                             hard_pt.fer * (1 - hard_pt.fer)) / n);
    CHECK(soft_pt.fer <= hard_pt.fer + margin);
    CHECK(soft_pt.fer < hard_pt.fer);  // clearly separated at this SNR
}

TEST_CASE("larger candidate lists close in on the exhaustive detector") {
    SweepOptions opt;
    opt.min_frames = 300;
    opt.min_errors = 0;

    FrameConfig cfg = small_config();
    cfg.snr_db = 3.0;
    cfg.clip_norm = 2.0;
    cfg.detector = DetectorKind::lsd;

    std::vector<double> fers;
    for (int ls : {1, 4, 16}) {
        FrameConfig c = cfg;
        c.lsd_list_size = ls;
        fers.push_back(run_point(c, 47, opt).fer);
    }
    FrameConfig sts = cfg;
    sts.detector = DetectorKind::sts;
    const double fer_sts = run_point(sts, 47, opt).fer;

    const double margin = 1.645 * std::sqrt(2.0 * 0.25 / opt.min_frames);
    CHECK(fers[1] <= fers[0] + margin);
    CHECK(fers[2] <= fers[1] + margin);
    CHECK(fers[2] <= fer_sts + margin);  // the full list matches the tree search
    CHECK(fers[0] > fers[2]);            // a singleton list is clearly worse
}

TEST_CASE("operating point interpolation") {
    auto op = operating_point({{6.0, 0.2}, {8.0, 0.008}});
    REQUIRE(op.has_value());
    CHECK(*op == doctest::Approx(7.8614).epsilon(1e-3));

    CHECK_FALSE(operating_point({{6.0, 0.2}, {8.0, 0.05}}).has_value());

    auto exact = operating_point({{5.0, 0.3}, {7.0, 0.01}, {9.0, 0.001}});
    REQUIRE(exact.has_value());
    CHECK(*exact == doctest::Approx(7.0));

    // non-monotone curves get pooled before the lookup
    auto pooled = operating_point({{4.0, 0.1}, {5.0, 0.2}, {6.0, 0.004}});
    REQUIRE(pooled.has_value());
    CHECK(*pooled > 5.0);
    CHECK(*pooled < 6.0);

    CHECK_THROWS_AS(operating_point({{5.0, 0.1}, {5.0, 0.05}}), std::invalid_argument);
}
