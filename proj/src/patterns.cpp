#include "ofdmim/patterns.hpp"

#include <stdexcept>

namespace ofdmim {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n-k+i) / i stays integral at every step
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > UINT64_MAX) throw std::overflow_error("binomial: result exceeds uint64");
    }
    return static_cast<std::uint64_t>(r);
}

ActivationPattern pattern_from_index(int index_k, int n_selected) {
    if (n_selected < 1 || n_selected > 16)
        throw std::invalid_argument("pattern_from_index: n_selected must be in [1,16]");
    if (index_k < 1 || index_k > (1 << n_selected))
        throw std::invalid_argument("pattern_from_index: index_k out of range");
    ActivationPattern p;
    p.index_k = index_k;
    p.bits.resize(static_cast<std::size_t>(n_selected));
    const unsigned value = static_cast<unsigned>(index_k - 1);
    for (int n = 0; n < n_selected; ++n) {
        p.bits[static_cast<std::size_t>(n)] = static_cast<std::uint8_t>((value >> n) & 1u);
        if (p.bits[static_cast<std::size_t>(n)]) p.active_set.push_back(n + 1);
    }
    p.n_active = static_cast<int>(p.active_set.size());
    return p;
}

std::vector<ActivationPattern> enumerate_patterns(int n_selected) {
    if (n_selected < 1 || n_selected > 16)
        throw std::invalid_argument("enumerate_patterns: n_selected must be in [1,16]");
    std::vector<ActivationPattern> out;
    out.reserve(1u << n_selected);
    for (int k = 1; k <= (1 << n_selected); ++k) out.push_back(pattern_from_index(k, n_selected));
    return out;
}

std::uint64_t codebook_count(int n_total, int n_selected) {
    if (n_total < 2 || n_selected < 1 || n_selected >= n_total)
        throw std::invalid_argument("codebook_count: requires 1 <= n_selected < n_total");
    return binomial(n_total, n_selected);
}

std::uint64_t symbol_space_size(int n_selected, int apm_order) {
    if (n_selected < 1 || n_selected > 16 || apm_order < 2)
        throw std::invalid_argument("symbol_space_size: parameter out of range");
    std::uint64_t pow = 1;
    const std::uint64_t base = static_cast<std::uint64_t>(apm_order) + 1;
    for (int i = 0; i < n_selected; ++i) {
        if (pow > UINT64_MAX / base) throw std::overflow_error("symbol_space_size: overflow");
        pow *= base;
    }
    return static_cast<std::uint64_t>(apm_order) + pow - 1;
}

} // namespace ofdmim
