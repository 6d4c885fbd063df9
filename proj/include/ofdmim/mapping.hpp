#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ofdmim/channel.hpp"
#include "ofdmim/config.hpp"

namespace ofdmim {

enum class Methodology { decentralized, centralized, none, fpsk };

std::string_view to_string(Methodology m);
Methodology methodology_from_string(std::string_view name);

// A mapping scheme (codebook entry): the N_S selected absolute subcarrier
// indices in ascending order, plus the complementary standby subcarrier.
// Relative index n refers to the n-th smallest selected absolute index.
struct MappingScheme {
    std::vector<int> selected; // ascending, 1-based absolute indices
    int complementary = 0;     // absolute index, never in `selected`

    int absolute_index(int relative) const { return selected[static_cast<std::size_t>(relative - 1)]; }
};

struct SelectionResult {
    MappingScheme hop1;
    MappingScheme hop2;
    Methodology methodology = Methodology::none;
};

// Per-hop selection: the N_S subcarriers with the largest gains (equivalent
// to the argmax-over-codebooks criterion), complementary = best unselected.
// Ties break toward the smaller absolute index.
MappingScheme select_decentralized(std::span<const double> gains, const SystemConfig& config);

// Whole-link selection on min(gains1, gains2), used by both hops.
MappingScheme select_centralized(std::span<const double> gains1, std::span<const double> gains2,
                                 const SystemConfig& config);

// Fixed baseline scheme {1..N_S} with complementary N_S+1, both hops.
SelectionResult default_scheme(const SystemConfig& config);

// Dispatch on methodology; none/fpsk disable adaptation.
SelectionResult select_schemes(const ChannelRealization& realization, Methodology methodology,
                               const SystemConfig& config);

} // namespace ofdmim
