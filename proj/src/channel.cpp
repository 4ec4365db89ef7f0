#include "stsd/channel.hpp"

#include <cmath>

namespace stsd {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double Rng::gauss() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

uint64_t Rng::bounded(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::bounded: n must be positive");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

ComplexMatrix draw_channel(Rng& rng, int m_r, int m_t) {
    if (m_t < 1 || m_r < m_t)
        throw std::invalid_argument("draw_channel: need M_R >= M_T >= 1");
    ComplexMatrix h(m_r, m_t);
    for (int r = 0; r < m_r; ++r)
        for (int c = 0; c < m_t; ++c) h(r, c) = rng.cgauss(1.0);
    return h;
}

double snr_to_noise(double snr_db, int m_t) {
    if (m_t < 1) throw std::invalid_argument("snr_to_noise: M_T must be >= 1");
    return static_cast<double>(m_t) / std::pow(10.0, snr_db / 10.0);
}

ComplexVector transmit(const ComplexMatrix& h, const ComplexVector& s, double n_o, Rng& rng) {
    if (static_cast<int>(s.size()) != h.cols())
        throw DimensionError("transmit: dimension mismatch");
    if (n_o < 0) throw std::invalid_argument("transmit: N_o must be >= 0");
    ComplexVector y = mat_vec(h, s);
    if (n_o > 0)
        for (cplx& v : y) v += rng.cgauss(n_o);
    return y;
}

}  // namespace stsd
