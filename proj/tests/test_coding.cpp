#include <doctest.h>

#include <cmath>

#include "stsd/channel.hpp"
#include "stsd/coding.hpp"

using namespace stsd;

TEST_CASE("impulse response expands the octal generators") {
    // 133 -> 1011011, 171 -> 1111001
    const std::vector<uint8_t> g0 = {1, 0, 1, 1, 0, 1, 1};
    const std::vector<uint8_t> g1 = {1, 1, 1, 1, 0, 0, 1};
    const auto cw = conv_encode({1});
    REQUIRE(cw.size() == 14);
    for (int t = 0; t < 7; ++t) {
        CHECK(cw[2 * t] == g0[t]);
        CHECK(cw[2 * t + 1] == g1[t]);
    }
}

TEST_CASE("all-zero input encodes to all zeros") {
    const auto cw = conv_encode(std::vector<uint8_t>(20, 0));
    CHECK(cw.size() == 52);
    for (uint8_t b : cw) CHECK(b == 0);
}

TEST_CASE("termination drives the register to zero") {
    Rng rng(12);
    std::vector<uint8_t> info(17);
    for (auto& b : info) b = static_cast<uint8_t>(rng.bounded(2));
    // appending six zero info bits must reproduce the codeword followed by
    // twelve zero coded bits
    std::vector<uint8_t> padded = info;
    padded.insert(padded.end(), 6, 0);
    const auto cw = conv_encode(info);
    const auto cw_padded = conv_encode(padded);
    for (size_t i = 0; i < cw.size(); ++i) CHECK(cw_padded[i] == cw[i]);
    for (size_t i = cw.size(); i < cw_padded.size(); ++i) CHECK(cw_padded[i] == 0);
}

TEST_CASE("the code is linear") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<uint8_t> a(23), b(23);
        for (auto& x : a) x = static_cast<uint8_t>(rng.bounded(2));
        for (auto& x : b) x = static_cast<uint8_t>(rng.bounded(2));
        std::vector<uint8_t> axb(23);
        for (int i = 0; i < 23; ++i) axb[i] = a[i] ^ b[i];
        const auto ca = conv_encode(a), cb = conv_encode(b), cab = conv_encode(axb);
        for (size_t i = 0; i < cab.size(); ++i) CHECK(cab[i] == (ca[i] ^ cb[i]));
    }
}

TEST_CASE("decoding a clean codeword returns the message") {
    Rng rng(14);
    std::vector<uint8_t> info(40);
    for (auto& b : info) b = static_cast<uint8_t>(rng.bounded(2));
    const auto cw = conv_encode(info);
    std::vector<double> llrs(cw.size());
    for (size_t i = 0; i < cw.size(); ++i) llrs[i] = cw[i] ? -50.0 : +50.0;
    const BcjrResult res = bcjr_decode(llrs);
    CHECK(res.info_hard == info);
}

TEST_CASE("zero input llrs decode to zero outputs") {
    const std::vector<double> llrs(2 * (10 + 6), 0.0);
    const BcjrResult res = bcjr_decode(llrs);
    for (double v : res.extrinsic) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("trellis pass equals codeword enumeration") {
    Rng rng(15);
    const int k = 10;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> llrs(2 * (k + 6));
        for (double& v : llrs) v = 3.0 * rng.gauss();
        const BcjrResult res = bcjr_decode(llrs);
        const std::vector<double> oracle = codeword_oracle(llrs, k);
        for (size_t i = 0; i < llrs.size(); ++i) {
            const double posterior = llrs[i] + res.extrinsic[i];
            CHECK(std::abs(posterior - oracle[i]) < 1e-9);
        }
    }
}

TEST_CASE("two-codeword case: llr is the metric difference") {
    const int k = 1;
    std::vector<double> llrs(2 * (k + 6));
    Rng rng(16);
    for (double& v : llrs) v = 2.0 * rng.gauss();

    const auto c0 = conv_encode({0});
    const auto c1 = conv_encode({1});
    double m0 = 0.0, m1 = 0.0;
    for (size_t i = 0; i < llrs.size(); ++i) {
        m0 += 0.5 * (c0[i] ? -1.0 : +1.0) * llrs[i];
        m1 += 0.5 * (c1[i] ? -1.0 : +1.0) * llrs[i];
    }
    const auto oracle = codeword_oracle(llrs, k);
    for (size_t i = 0; i < llrs.size(); ++i) {
        if (c0[i] == c1[i]) continue;  // one-sided positions carry infinite confidence
        const double expect = c1[i] ? m0 - m1 : m1 - m0;
        CHECK(oracle[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(bcjr_decode(std::vector<double>(13, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(bcjr_decode(std::vector<double>(12, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(codeword_oracle(std::vector<double>(2 * 23, 0.0), 17), std::invalid_argument);
    CHECK_THROWS_AS(codeword_oracle(std::vector<double>(10, 0.0), 4), std::invalid_argument);
}
