#pragma once

#include <cstdint>
#include <random>

#include "stsd/numerics.hpp"

namespace stsd {

uint64_t splitmix64(uint64_t x);

/// Deterministic random stream: mt19937_64 core with explicit uniform /
/// Gaussian / bounded-integer mappings so that results do not depend on
/// standard-library distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(splitmix64(seed)) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double gauss();

    /// Uniform integer in [0, n), rejection sampled.
    uint64_t bounded(uint64_t n);

    /// Circularly symmetric complex Gaussian with total variance `var`.
    cplx cgauss(double var) {
        const double s = std::sqrt(var / 2.0);
        return {s * gauss(), s * gauss()};
    }

    uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// M_R x M_T matrix with i.i.d. CN(0,1) entries.
ComplexMatrix draw_channel(Rng& rng, int m_r, int m_t);

/// Per-receive-antenna SNR convention: N_o = M_T * E_s / 10^(snr_db/10)
/// with unit-energy constellations (E_s = 1).
double snr_to_noise(double snr_db, int m_t);

/// y = H s + n with n i.i.d. CN(0, N_o).
ComplexVector transmit(const ComplexMatrix& h, const ComplexVector& s, double n_o, Rng& rng);

}  // namespace stsd
