#include "ofdmim/block.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ofdmim {

namespace {

unsigned gray_encode(unsigned v) { return v ^ (v >> 1); }

unsigned gray_decode(unsigned g) {
    unsigned v = 0;
    for (; g; g >>= 1) v ^= g;
    return v;
}

} // namespace

cplx psk_symbol(int m, int order) {
    if (m < 1 || m > order) throw std::invalid_argument("psk_symbol: index out of range");
    if (order == 2) return m == 1 ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
    const double phase = 2.0 * std::numbers::pi * (m - 1) / order;
    return {std::cos(phase), std::sin(phase)};
}

int psk_index_from_bits(unsigned bits_value, int order) {
    const unsigned mask = static_cast<unsigned>(order - 1);
    if (bits_value > mask) throw std::invalid_argument("psk_index_from_bits: value out of range");
    return static_cast<int>(gray_decode(bits_value ^ mask)) + 1;
}

unsigned psk_bits_from_index(int m, int order) {
    if (m < 1 || m > order) throw std::invalid_argument("psk_bits_from_index: index out of range");
    return gray_encode(static_cast<unsigned>(m - 1)) ^ static_cast<unsigned>(order - 1);
}

bool same_payload(const ConcatenatedBlock& a, const ConcatenatedBlock& b) {
    return a.pattern.index_k == b.pattern.index_k && a.symbol_indices == b.symbol_indices;
}

} // namespace ofdmim
