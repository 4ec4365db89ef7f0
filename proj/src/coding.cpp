#include "stsd/coding.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stsd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline uint8_t parity(unsigned word) { return static_cast<uint8_t>(std::popcount(word) & 1); }

// register word: bit 6 = current input, bits 5..0 = previous inputs
// (newest at bit 5); next state drops the oldest bit
inline unsigned reg_word(unsigned input, unsigned state) { return (input << 6) | state; }
inline unsigned next_state(unsigned word) { return word >> 1; }

}  // namespace

std::vector<uint8_t> conv_encode(const std::vector<uint8_t>& info) {
    std::vector<uint8_t> out;
    out.reserve(2 * (info.size() + ConvCode::memory));
    unsigned state = 0;
    auto step = [&](unsigned u) {
        const unsigned w = reg_word(u & 1u, state);
        out.push_back(parity(w & ConvCode::g0));
        out.push_back(parity(w & ConvCode::g1));
        state = next_state(w);
    };
    for (uint8_t u : info) step(u);
    for (int t = 0; t < ConvCode::memory; ++t) step(0);
    return out;
}

BcjrResult bcjr_decode(const std::vector<double>& coded_llrs) {
    if (coded_llrs.size() % 2 != 0 || coded_llrs.size() < 2 * (ConvCode::memory + 1))
        throw std::invalid_argument("bcjr_decode: length must be 2*(k+6) with k >= 1");
    const int steps = static_cast<int>(coded_llrs.size()) / 2;
    const int k = steps - ConvCode::memory;
    const int ns = ConvCode::states;

    // per-(state, input) outputs as +-1, shared by all steps
    static const auto transitions = [] {
        struct T {
            int next;
            double x0, x1;
        };
        std::vector<std::array<T, 2>> tr(ConvCode::states);
        for (int s = 0; s < ConvCode::states; ++s)
            for (int u = 0; u < 2; ++u) {
                const unsigned w = reg_word(u, s);
                tr[s][u] = {static_cast<int>(next_state(w)),
                            parity(w & ConvCode::g0) ? -1.0 : +1.0,
                            parity(w & ConvCode::g1) ? -1.0 : +1.0};
            }
        return tr;
    }();

    auto gamma = [&](int t, int s, int u) {
        const auto& tr = transitions[s][u];
        return 0.5 * (tr.x0 * coded_llrs[2 * t] + tr.x1 * coded_llrs[2 * t + 1]);
    };

    std::vector<std::vector<double>> alpha(steps + 1, std::vector<double>(ns, kNegInf));
    std::vector<std::vector<double>> beta(steps + 1, std::vector<double>(ns, kNegInf));
    alpha[0][0] = 0.0;
    beta[steps][0] = 0.0;  // terminated

    for (int t = 0; t < steps; ++t) {
        const int umax = t < k ? 2 : 1;  // tail steps force input 0
        for (int s = 0; s < ns; ++s) {
            if (alpha[t][s] == kNegInf) continue;
            for (int u = 0; u < umax; ++u) {
                const double m = alpha[t][s] + gamma(t, s, u);
                double& slot = alpha[t + 1][transitions[s][u].next];
                if (m > slot) slot = m;
            }
        }
    }
    for (int t = steps - 1; t >= 0; --t) {
        const int umax = t < k ? 2 : 1;
        for (int s = 0; s < ns; ++s)
            for (int u = 0; u < umax; ++u) {
                const double nb = beta[t + 1][transitions[s][u].next];
                if (nb == kNegInf) continue;
                const double m = nb + gamma(t, s, u);
                if (m > beta[t][s]) beta[t][s] = m;
            }
    }

    BcjrResult res;
    res.extrinsic.resize(coded_llrs.size());
    res.info_hard.resize(k);
    for (int t = 0; t < steps; ++t) {
        const int umax = t < k ? 2 : 1;
        double best0[2] = {kNegInf, kNegInf};  // coded bit 0 at +1 / -1
        double best1[2] = {kNegInf, kNegInf};
        double bestu[2] = {kNegInf, kNegInf};  // info bit 0 / 1
        for (int s = 0; s < ns; ++s) {
            if (alpha[t][s] == kNegInf) continue;
            for (int u = 0; u < umax; ++u) {
                const auto& tr = transitions[s][u];
                const double b = beta[t + 1][tr.next];
                if (b == kNegInf) continue;
                const double m = alpha[t][s] + gamma(t, s, u) + b;
                if (m > best0[tr.x0 < 0]) best0[tr.x0 < 0] = m;
                if (m > best1[tr.x1 < 0]) best1[tr.x1 < 0] = m;
                if (m > bestu[u]) bestu[u] = m;
            }
        }
        res.extrinsic[2 * t] = (best0[0] - best0[1]) - coded_llrs[2 * t];
        res.extrinsic[2 * t + 1] = (best1[0] - best1[1]) - coded_llrs[2 * t + 1];
        if (t < k) res.info_hard[t] = bestu[0] - bestu[1] >= 0 ? 0 : 1;
    }
    return res;
}

std::vector<double> codeword_oracle(const std::vector<double>& coded_llrs, int k) {
    if (k < 1 || k > 16) throw std::invalid_argument("codeword_oracle: k must be in [1, 16]");
    if (coded_llrs.size() != static_cast<size_t>(2 * (k + ConvCode::memory)))
        throw std::invalid_argument("codeword_oracle: length/k mismatch");

    const size_t n = coded_llrs.size();
    std::vector<double> best_plus(n, kNegInf), best_minus(n, kNegInf);
    std::vector<uint8_t> info(k);
    for (unsigned msg = 0; msg < (1u << k); ++msg) {
        for (int i = 0; i < k; ++i) info[i] = (msg >> i) & 1u;
        const auto cw = conv_encode(info);
        double metric = 0.0;
        for (size_t i = 0; i < n; ++i) metric += 0.5 * (cw[i] ? -1.0 : +1.0) * coded_llrs[i];
        for (size_t i = 0; i < n; ++i) {
            double& slot = cw[i] ? best_minus[i] : best_plus[i];
            if (metric > slot) slot = metric;
        }
    }
    std::vector<double> posterior(n);
    for (size_t i = 0; i < n; ++i) posterior[i] = best_plus[i] - best_minus[i];
    return posterior;
}

}  // namespace stsd
