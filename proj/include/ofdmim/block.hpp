#pragma once

#include <complex>
#include <vector>

#include "ofdmim/patterns.hpp"

namespace ofdmim {

using cplx = std::complex<double>;

// M-PSK constellation point, m in [1, order]: chi_m = exp(j 2pi (m-1)/order).
cplx psk_symbol(int m, int order);

// Bit-group <-> constellation index. Gray labeling chosen so that for BPSK
// bit '1' maps to +1 and bit '0' to -1.
int psk_index_from_bits(unsigned bits_value, int order);
unsigned psk_bits_from_index(int m, int order);

// Concatenated transmit/receive block X(k) = <x(k), chi_comp>:
// slots 1..N_S carry the reduced OFDM block, slot N_S+1 the complementary
// subcarrier symbol (nonzero only in complementary mode, k = 1).
struct ConcatenatedBlock {
    std::vector<cplx> slots;          // length N_S + 1
    ActivationPattern pattern;
    std::vector<int> symbol_indices;  // PSK indices, one per active slot (one for k=1)
};

// Payload identity: same activation pattern and same APM symbols.
bool same_payload(const ConcatenatedBlock& a, const ConcatenatedBlock& b);

} // namespace ofdmim
