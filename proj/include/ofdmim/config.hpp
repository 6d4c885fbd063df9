#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ofdmim {

// Scenario parameters for the two-hop OFDM IM link.
//
// All SNR-like quantities are linear ratios. Noise power is normalized to 1,
// so snr_tx doubles as the transmit power P_t. Channel gains |h_i(n)|^2 are
// exponential with per-hop means mean_gain_hop1/2.
struct SystemConfig {
    int n_total = 4;             // N_T, number of subcarriers (power of two)
    int n_selected = 2;          // N_S, subcarriers forming the mapping scheme
    int apm_order = 2;           // M, PSK order (power of two)
    double mean_gain_hop1 = 1.0; // mu_1
    double mean_gain_hop2 = 1.0; // mu_2
    double snr_tx = 1.0;         // P_t / N_0, linear
    double outage_threshold = 1.0; // s, linear SNR threshold

    int pattern_count() const { return 1 << n_selected; }
    int bits_per_symbol() const;                  // B_M = log2(M)
    void validate() const;                        // throws std::invalid_argument
    SystemConfig with_snr(double snr_linear) const {
        SystemConfig c = *this;
        c.snr_tx = snr_linear;
        return c;
    }
};

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

inline int SystemConfig::bits_per_symbol() const {
    int b = 0;
    while ((1 << (b + 1)) <= apm_order) ++b;
    return b;
}

inline void SystemConfig::validate() const {
    if (n_total < 2 || !is_power_of_two(n_total))
        throw std::invalid_argument("n_total: must be a power of two >= 2");
    if (n_selected < 1 || n_selected >= n_total)
        throw std::invalid_argument("n_selected: requires 1 <= n_selected < n_total");
    if (apm_order < 2 || !is_power_of_two(apm_order))
        throw std::invalid_argument("apm_order: must be a power of two >= 2");
    if (!(mean_gain_hop1 > 0.0))
        throw std::invalid_argument("mean_gain_hop1: must be positive");
    if (!(mean_gain_hop2 > 0.0))
        throw std::invalid_argument("mean_gain_hop2: must be positive");
    if (!(snr_tx > 0.0))
        throw std::invalid_argument("snr_tx: must be positive");
    if (!(outage_threshold > 0.0))
        throw std::invalid_argument("outage_threshold: must be positive");
}

} // namespace ofdmim
