#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stsd/cli.hpp"
#include "stsd/conformance.hpp"

using namespace stsd;

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"stsd"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("sweep flags parse into the expected grid") {
    const RunSpec spec = parse_args({"sweep", "--mt", "4", "--mr", "4", "--mod", "qam16",
                                     "--clip", "0.2,2,inf", "--iters", "1,2", "--snr", "10:1:20",
                                     "--seed", "7", "--out", "t.csv"});
    CHECK(spec.subcommand == "sweep");
    CHECK(spec.mt == 4);
    CHECK(spec.mod == ConstellationKind::qam16);
    REQUIRE(spec.clips.size() == 3);
    CHECK(spec.clips[0] == doctest::Approx(0.2));
    CHECK(spec.clips[1] == doctest::Approx(2.0));
    CHECK(spec.clips[2] == kInf);
    CHECK(spec.iters == std::vector<int>{1, 2});
    CHECK(spec.snrs.size() == 11);
    CHECK(spec.snrs.front() == doctest::Approx(10.0));
    CHECK(spec.snrs.back() == doctest::Approx(20.0));
    CHECK(spec.seed == 7);
    CHECK(spec.out_path == "t.csv");
}

TEST_CASE("check subcommand parses with defaults") {
    const RunSpec spec = parse_args({"check", "--seed", "1"});
    CHECK(spec.subcommand == "check");
    CHECK(spec.seed == 1);
    CHECK(spec.instances == 300);
}

TEST_CASE("missing seed is a usage error") {
    CHECK_THROWS_AS(parse_args({"simulate", "--mt", "2"}), UsageError);
    CHECK(run_cli({"simulate", "--mt", "2"}) == 2);
}

TEST_CASE("unknown flags and malformed grids are usage errors") {
    CHECK(run_cli({"sweep", "--seed", "1", "--bogus", "3"}) == 2);
    CHECK_THROWS_AS(parse_args({"sweep", "--seed", "1", "--snr", "10:0:20"}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--seed", "1", "--snr", "abc"}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--seed", "1", "--clip", "-2"}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--seed", "1", "--iters", "0"}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--seed", "1", "--detector", "zf"}), UsageError);
    CHECK_THROWS_AS(parse_args({}), UsageError);
}

TEST_CASE("grid helpers") {
    CHECK(parse_snr_grid("15") == std::vector<double>{15.0});
    CHECK(parse_snr_grid("1:2:5") == std::vector<double>{1.0, 3.0, 5.0});
    CHECK(parse_clip_list("inf").front() == kInf);
    CHECK(parse_int_list("1,2,4") == std::vector<int>{1, 2, 4});
}

TEST_CASE("simulate writes byte-identical csv for identical seeds") {
    const std::string out_a = "cli_test_a.csv", out_b = "cli_test_b.csv";
    const std::vector<std::string> args = {"simulate", "--mt",     "2",   "--mr",    "2",
                                           "--mod",    "qpsk",     "--tones", "8",
                                           "--iters",  "1",        "--clip",  "2",
                                           "--snr",    "5",        "--frames", "30",
                                           "--errors", "0",        "--seed", "5",
                                           "--out",    out_a};
    CHECK(run_cli(args) == 0);
    auto args_b = args;
    args_b.back() = out_b;
    CHECK(run_cli(args_b) == 0);

    const std::string a = slurp(out_a), b = slurp(out_b);
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.rfind("snr_db,", 0) == 0);
    std::remove(out_a.c_str());
    std::remove(out_b.c_str());
}

TEST_CASE("conformance run passes and reports the deviation line") {
    CheckOptions opt;
    opt.seed = 3;
    opt.instances = 4;  // small smoke run; the acceptance suite does the full one
    std::ostringstream out;
    CHECK(run_check(opt, out) == 0);
    CHECK(out.str().find("max |L^E| deviation") != std::string::npos);
    CHECK(out.str().find("FAIL") == std::string::npos);
}

TEST_CASE("an injected sign fault trips the conformance run") {
    CheckOptions opt;
    opt.seed = 3;
    opt.instances = 2;
    std::ostringstream out;
    DetectFn broken = [](const Instance& inst, double clip) {
        DetectionResult res = detect(inst.ytilde, inst.r, inst.priors, inst.n_o, clip,
                                     constellation_for(inst.mod));
        res.extrinsic_llrs(0, 0) = -res.extrinsic_llrs(0, 0) - 1.0;  // sign fault
        return res;
    };
    CHECK(run_check(opt, out, broken) == 1);
    CHECK(out.str().find("counterexample seed") != std::string::npos);
}
