#include "ofdmim/modem.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ofdmim {

BitPayload random_payload(RngStream& rng, const SystemConfig& config) {
    BitPayload p;
    p.pattern_k = 1 + static_cast<int>(rng.next_below(1ull << config.n_selected));
    const int groups = std::max(1, std::popcount(static_cast<unsigned>(p.pattern_k - 1)));
    p.symbol_indices.resize(static_cast<std::size_t>(groups));
    for (int& m : p.symbol_indices)
        m = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(config.apm_order)));
    return p;
}

ConcatenatedBlock encode(const BitPayload& payload, const SystemConfig& config) {
    ConcatenatedBlock b;
    b.pattern = pattern_from_index(payload.pattern_k, config.n_selected);
    const std::size_t expected = static_cast<std::size_t>(std::max(1, b.pattern.n_active));
    if (payload.symbol_indices.size() != expected)
        throw std::invalid_argument("encode: symbol group count does not match pattern");
    for (int m : payload.symbol_indices)
        if (m < 1 || m > config.apm_order)
            throw std::invalid_argument("encode: symbol index out of range");
    b.symbol_indices = payload.symbol_indices;
    b.slots.assign(static_cast<std::size_t>(config.n_selected) + 1, cplx{});
    if (b.pattern.index_k == 1) {
        b.slots.back() = psk_symbol(payload.symbol_indices[0], config.apm_order);
    } else {
        for (std::size_t t = 0; t < b.pattern.active_set.size(); ++t) {
            const int rel = b.pattern.active_set[t];
            b.slots[static_cast<std::size_t>(rel - 1)] =
                psk_symbol(payload.symbol_indices[t], config.apm_order);
        }
    }
    return b;
}

BitPayload extract_payload(const ConcatenatedBlock& block) {
    return BitPayload{block.pattern.index_k, block.symbol_indices};
}

CandidateSet::CandidateSet(const SystemConfig& config) {
    config.validate();
    width_ = config.n_selected + 1;
    const int m_order = config.apm_order;
    offsets_.push_back(0);

    auto push = [&](const BitPayload& payload) {
        ConcatenatedBlock b = encode(payload, config);
        const double scale = 1.0 / std::sqrt(static_cast<double>(std::max(1, b.pattern.n_active)));
        for (int n = 0; n < width_; ++n) {
            const cplx u = b.slots[static_cast<std::size_t>(n)] * scale;
            scaled_.push_back(u);
            if (u != cplx{}) nonzero_.push_back(n);
        }
        offsets_.push_back(nonzero_.size());
        blocks_.push_back(std::move(b));
    };

    for (int k = 1; k <= config.pattern_count(); ++k) {
        pattern_first_.push_back(static_cast<int>(blocks_.size()));
        const int groups = std::max(1, std::popcount(static_cast<unsigned>(k - 1)));
        std::vector<int> ms(static_cast<std::size_t>(groups), 1);
        while (true) {
            push(BitPayload{k, ms});
            int t = groups - 1;
            while (t >= 0 && ms[static_cast<std::size_t>(t)] == m_order) {
                ms[static_cast<std::size_t>(t)] = 1;
                --t;
            }
            if (t < 0) break;
            ++ms[static_cast<std::size_t>(t)];
        }
    }
}

int CandidateSet::index_of_payload(const BitPayload& payload) const {
    for (int i = 0; i < size(); ++i) {
        const auto& b = blocks_[static_cast<std::size_t>(i)];
        if (b.pattern.index_k == payload.pattern_k && b.symbol_indices == payload.symbol_indices)
            return i;
    }
    throw std::invalid_argument("index_of_payload: payload not in candidate set");
}

void gather_channel_slots(const ChannelRealization& realization, const MappingScheme& scheme,
                          int hop, std::span<cplx> out) {
    const auto& h = realization.hop(hop);
    const std::size_t ns = scheme.selected.size();
    for (std::size_t n = 0; n < ns; ++n)
        out[n] = h[static_cast<std::size_t>(scheme.selected[n] - 1)];
    out[ns] = h[static_cast<std::size_t>(scheme.complementary - 1)];
}

HopObservation transmit_through_hop(const ConcatenatedBlock& block,
                                    const ChannelRealization& realization,
                                    const MappingScheme& scheme, int hop, RngStream& rng,
                                    const SystemConfig& config) {
    if (static_cast<int>(scheme.selected.size()) != config.n_selected)
        throw std::invalid_argument("transmit_through_hop: scheme size mismatch");
    const double noise_var = 1.0; // N_0 normalized; snr_tx carries P_t/N_0
    const double amp = std::sqrt(config.snr_tx / std::max(1, block.pattern.n_active));
    HopObservation obs;
    obs.noise_var = noise_var;
    obs.received.resize(block.slots.size());
    std::vector<cplx> h(block.slots.size());
    gather_channel_slots(realization, scheme, hop, h);
    for (std::size_t n = 0; n < block.slots.size(); ++n)
        obs.received[n] = amp * h[n] * block.slots[n] + rng.cnormal(noise_var);
    return obs;
}

int ml_detect_index(std::span<const cplx> received, std::span<const cplx> channel_slots,
                    double transmit_power, const CandidateSet& candidates) {
    const double amp = std::sqrt(transmit_power);
    // metric(c) = sum_n |y_n - amp h_n U_n|^2; the all-|y|^2 part is shared,
    // so only nonzero candidate slots contribute a correction
    double base = 0.0;
    for (const cplx& y : received) base += std::norm(y);
    int best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (int c = 0; c < candidates.size(); ++c) {
        const auto u = candidates.scaled(c);
        double metric = base;
        for (int n : candidates.nonzero_slots(c)) {
            const std::size_t i = static_cast<std::size_t>(n);
            const cplx d = received[i] - amp * channel_slots[i] * u[i];
            metric += std::norm(d) - std::norm(received[i]);
        }
        if (metric < best_metric) {
            best_metric = metric;
            best = c;
        }
    }
    return best;
}

ConcatenatedBlock ml_detect(const HopObservation& obs, const ChannelRealization& realization,
                            const MappingScheme& scheme, int hop, const SystemConfig& config) {
    const CandidateSet candidates(config);
    std::vector<cplx> h(obs.received.size());
    gather_channel_slots(realization, scheme, hop, h);
    const int best = ml_detect_index(obs.received, h, config.snr_tx, candidates);
    return candidates.blocks()[static_cast<std::size_t>(best)];
}

double average_rate(const SystemConfig& config) {
    config.validate();
    const double ns = config.n_selected;
    const double bm = config.bits_per_symbol();
    const double p = std::pow(2.0, ns);
    return ns + bm / p * (1.0 + p / 2.0 * ns);
}

ConcatenatedBlock relay_forward(const ConcatenatedBlock& detected, const MappingScheme& scheme_hop2,
                                const SystemConfig& config) {
    if (static_cast<int>(scheme_hop2.selected.size()) != config.n_selected)
        throw std::invalid_argument("relay_forward: scheme size mismatch");
    // Decode-and-forward: regenerate the same logical payload; the hop-2
    // scheme decides the physical subcarriers at transmit time.
    return encode(extract_payload(detected), config);
}

} // namespace ofdmim
