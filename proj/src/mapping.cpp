#include "ofdmim/mapping.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ofdmim {

std::string_view to_string(Methodology m) {
    switch (m) {
    case Methodology::decentralized: return "decentralized";
    case Methodology::centralized: return "centralized";
    case Methodology::none: return "none";
    case Methodology::fpsk: return "fpsk";
    }
    return "?";
}

Methodology methodology_from_string(std::string_view name) {
    if (name == "decentralized") return Methodology::decentralized;
    if (name == "centralized") return Methodology::centralized;
    if (name == "none") return Methodology::none;
    if (name == "fpsk") return Methodology::fpsk;
    throw std::invalid_argument("methodology: unknown name '" + std::string(name) + "'");
}

namespace {

MappingScheme pick_largest(std::span<const double> gains, int n_selected) {
    const int n_total = static_cast<int>(gains.size());
    std::vector<int> idx(static_cast<std::size_t>(n_total));
    std::iota(idx.begin(), idx.end(), 0);
    // descending gain, ties toward the smaller absolute index
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (gains[static_cast<std::size_t>(a)] != gains[static_cast<std::size_t>(b)])
            return gains[static_cast<std::size_t>(a)] > gains[static_cast<std::size_t>(b)];
        return a < b;
    });
    MappingScheme s;
    s.selected.assign(idx.begin(), idx.begin() + n_selected);
    for (int& v : s.selected) ++v; // 1-based absolute indices
    std::sort(s.selected.begin(), s.selected.end());
    s.complementary = idx[static_cast<std::size_t>(n_selected)] + 1; // best of the rest
    return s;
}

} // namespace

MappingScheme select_decentralized(std::span<const double> gains, const SystemConfig& config) {
    if (static_cast<int>(gains.size()) != config.n_total)
        throw std::invalid_argument("select_decentralized: gains length must equal n_total");
    return pick_largest(gains, config.n_selected);
}

MappingScheme select_centralized(std::span<const double> gains1, std::span<const double> gains2,
                                 const SystemConfig& config) {
    if (static_cast<int>(gains1.size()) != config.n_total ||
        static_cast<int>(gains2.size()) != config.n_total)
        throw std::invalid_argument("select_centralized: gains length must equal n_total");
    std::vector<double> link(gains1.size());
    for (std::size_t i = 0; i < link.size(); ++i) link[i] = std::min(gains1[i], gains2[i]);
    return pick_largest(link, config.n_selected);
}

SelectionResult default_scheme(const SystemConfig& config) {
    SelectionResult r;
    r.methodology = Methodology::none;
    r.hop1.selected.resize(static_cast<std::size_t>(config.n_selected));
    std::iota(r.hop1.selected.begin(), r.hop1.selected.end(), 1);
    r.hop1.complementary = config.n_selected + 1;
    r.hop2 = r.hop1;
    return r;
}

SelectionResult select_schemes(const ChannelRealization& realization, Methodology methodology,
                               const SystemConfig& config) {
    const std::size_t nt = static_cast<std::size_t>(config.n_total);
    std::vector<double> g1(nt), g2(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        g1[i] = std::norm(realization.hop1[i]);
        g2[i] = std::norm(realization.hop2[i]);
    }
    SelectionResult r;
    r.methodology = methodology;
    switch (methodology) {
    case Methodology::decentralized:
        r.hop1 = select_decentralized(g1, config);
        r.hop2 = select_decentralized(g2, config);
        break;
    case Methodology::centralized:
        r.hop1 = select_centralized(g1, g2, config);
        r.hop2 = r.hop1;
        break;
    case Methodology::none:
    case Methodology::fpsk: {
        auto fixed = default_scheme(config);
        r.hop1 = fixed.hop1;
        r.hop2 = fixed.hop2;
        break;
    }
    }
    return r;
}

} // namespace ofdmim
