#pragma once

#include <span>
#include <vector>

#include "ofdmim/block.hpp"
#include "ofdmim/channel.hpp"
#include "ofdmim/config.hpp"
#include "ofdmim/mapping.hpp"
#include "ofdmim/rng.hpp"

namespace ofdmim {

// Variable-length source word: N_S index bits select the pattern, then one
// B_M-bit group per active subcarrier (a single group in complementary mode).
struct BitPayload {
    int pattern_k = 1;
    std::vector<int> symbol_indices; // PSK indices m_t, size max{1, N_A(k)}
};

BitPayload random_payload(RngStream& rng, const SystemConfig& config);

// Dual-mode encoder. k > 1: active slots carry PSK symbols in ascending
// relative order, complementary slot silent. k = 1: all selected slots are
// silent and the single symbol rides the complementary slot.
ConcatenatedBlock encode(const BitPayload& payload, const SystemConfig& config);

BitPayload extract_payload(const ConcatenatedBlock& block);

// Received concatenated vector for one hop: N_S selected slots then the
// complementary slot, each with independent CN(0, N_0) noise.
struct HopObservation {
    std::vector<cplx> received; // length N_S + 1
    double noise_var = 1.0;
};

// Precomputed ML search space: every block in X with its power-normalized
// form U = X / sqrt(max{1, N_A(k)}), so received = sqrt(P_t) diag(h) U + w.
class CandidateSet {
public:
    explicit CandidateSet(const SystemConfig& config);

    const std::vector<ConcatenatedBlock>& blocks() const { return blocks_; }
    std::span<const cplx> scaled(int i) const {
        const std::size_t w = static_cast<std::size_t>(width_);
        return {scaled_.data() + static_cast<std::size_t>(i) * w, w};
    }
    int size() const { return static_cast<int>(blocks_.size()); }
    int width() const { return width_; } // N_S + 1

    // Slots where the candidate is nonzero (active slots, or the comp slot).
    std::span<const int> nonzero_slots(int i) const {
        return {nonzero_.data() + offsets_[static_cast<std::size_t>(i)],
                offsets_[static_cast<std::size_t>(i) + 1] - offsets_[static_cast<std::size_t>(i)]};
    }

    int index_of_payload(const BitPayload& payload) const;

    // Candidates are grouped by pattern index; within a group the symbol
    // tuple enumerates in odometer order (last group fastest).
    int first_index_of_pattern(int index_k) const {
        return pattern_first_[static_cast<std::size_t>(index_k - 1)];
    }

private:
    std::vector<ConcatenatedBlock> blocks_;
    std::vector<cplx> scaled_;      // size() * width_ flattened
    std::vector<int> nonzero_;
    std::vector<std::size_t> offsets_;
    std::vector<int> pattern_first_;
    int width_ = 0;
};

// Applies power scaling, the hop's channel and fresh AWGN to a block.
// Active slots get amplitude sqrt(P_t / N_A(k)); the complementary slot,
// when used, gets the full sqrt(P_t).
HopObservation transmit_through_hop(const ConcatenatedBlock& block,
                                    const ChannelRealization& realization,
                                    const MappingScheme& scheme, int hop, RngStream& rng,
                                    const SystemConfig& config);

// Exhaustive ML detection over Card(X) candidates, candidate-dependent
// power scaling included in each hypothesis. Perfect CSI on the given hop.
ConcatenatedBlock ml_detect(const HopObservation& obs, const ChannelRealization& realization,
                            const MappingScheme& scheme, int hop, const SystemConfig& config);

// Fast path used by the trial engines: channel gains already gathered onto
// the N_S+1 scheme slots. Returns the winning candidate index.
int ml_detect_index(std::span<const cplx> received, std::span<const cplx> channel_slots,
                    double transmit_power, const CandidateSet& candidates);

// DF relay step: the decoded payload is re-emitted unchanged; the hop-2
// scheme only affects which physical subcarriers carry it later.
ConcatenatedBlock relay_forward(const ConcatenatedBlock& detected, const MappingScheme& scheme_hop2,
                                const SystemConfig& config);

// Average transmission rate N_S + log2(M)/2^N_S * (1 + 2^{N_S-1} N_S) [bpcu].
double average_rate(const SystemConfig& config);

// Channel coefficients on the scheme's N_S+1 slots, in candidate order.
void gather_channel_slots(const ChannelRealization& realization, const MappingScheme& scheme,
                          int hop, std::span<cplx> out);

} // namespace ofdmim
