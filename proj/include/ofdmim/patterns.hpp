#pragma once

#include <cstdint>
#include <vector>

namespace ofdmim {

// Subcarrier activation pattern b_S(k). Bits are read little-endian, so
// k = 1 + value(bits); k=1 is the all-zero stream and k=2^N_S the all-one one.
struct ActivationPattern {
    int index_k = 1;                 // k in [1, 2^n_selected]
    std::vector<std::uint8_t> bits;  // b_S(k,n), n = 1..N_S
    std::vector<int> active_set;     // relative indices (1-based) where bit = 1
    int n_active = 0;                // N_A(k), Hamming weight
};

// Exact binomial coefficient; throws std::overflow_error if it exceeds uint64.
std::uint64_t binomial(int n, int k);

ActivationPattern pattern_from_index(int index_k, int n_selected);

// All 2^n_selected patterns in index order. n_selected limited to 16.
std::vector<ActivationPattern> enumerate_patterns(int n_selected);

// Card(C) = C(n_total, n_selected), the number of mapping schemes.
std::uint64_t codebook_count(int n_total, int n_selected);

// Card(X) = M + (1+M)^N_S - 1, the number of concatenated symbol blocks.
std::uint64_t symbol_space_size(int n_selected, int apm_order);

} // namespace ofdmim
