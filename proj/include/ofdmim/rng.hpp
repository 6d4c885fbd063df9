#pragma once

#include <complex>
#include <cstdint>

namespace ofdmim {

// Counter-based pseudo-random stream (splitmix64). A (seed, stream_id) pair
// identifies the sequence exactly, so parallel trial batches stay
// reproducible no matter how threads are scheduled.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(mix(mix(seed + 0x9e3779b97f4a7c15ull) + stream_id)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ull; }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform on (0, 1]; safe under log().
    double uniform() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bias-free (Lemire rejection).
    std::uint64_t next_below(std::uint64_t bound);

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> cnormal(double variance);

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

} // namespace ofdmim
