#include "ofdmim/rng.hpp"

#include <cmath>

namespace ofdmim {

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection of the biased band.
    __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (lo < threshold) {
            m = static_cast<__uint128_t>((*this)()) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::complex<double> RngStream::cnormal(double variance) {
    // Marsaglia polar method: trig-free, one log per complex sample.
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double scale = std::sqrt(-variance * std::log(s) / s);
        return {u * scale, v * scale};
    }
}

} // namespace ofdmim
