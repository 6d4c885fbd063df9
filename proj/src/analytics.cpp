#include "ofdmim/analytics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "ofdmim/channel.hpp"
#include "ofdmim/specialfn.hpp"

namespace ofdmim {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

double hop_mean(const SystemConfig& c, int hop) {
    return hop == 1 ? c.mean_gain_hop1 : c.mean_gain_hop2;
}

double two_hop_union(double p1, double p2) { return p1 + p2 - p1 * p2; }

// N_T! / ((xi-1)! (N_T-xi)!) = xi * C(N_T, xi)
double order_coeff(int n_total, int xi) {
    return static_cast<double>(xi) * static_cast<double>(binomial(n_total, xi));
}

} // namespace

// ---- outage ---------------------------------------------------------------

double upsilon(const ActivationPattern& pattern, int xi, const SystemConfig& config) {
    const int nt = config.n_total, ns = config.n_selected, na = pattern.n_active;
    if (na < 1) throw std::invalid_argument("upsilon: pattern must have at least one active subcarrier");
    if (xi < nt - ns + 1 || xi > nt - na + 1)
        throw std::invalid_argument("upsilon: order index out of the admissible range");
    return static_cast<double>(binomial(nt - xi, na - 1)) / static_cast<double>(binomial(ns, na));
}

namespace {

// k = 1: the standby subcarrier is the (N_T-N_S)-th order statistic.
// k > 1: Upsilon-weighted order-statistic CDFs at threshold s N_0 N_A / P_t.
template <class Cdf>
double outage_conditional_generic(const ActivationPattern& pattern, double s,
                                  const SystemConfig& config, Cdf&& order_cdf) {
    const int nt = config.n_total, ns = config.n_selected;
    const double rho = config.snr_tx;
    if (pattern.index_k == 1) return order_cdf(nt - ns, s / rho);
    const int na = pattern.n_active;
    double acc = 0.0;
    for (int xi = nt - ns + 1; xi <= nt - na + 1; ++xi)
        acc += upsilon(pattern, xi, config) * order_cdf(xi, s * na / rho);
    return std::min(acc, 1.0);
}

} // namespace

double outage_conditional_decentralized(const ActivationPattern& pattern, double s, int hop,
                                        const SystemConfig& config) {
    const double mu = hop_mean(config, hop);
    return outage_conditional_generic(pattern, s, config, [&](int xi, double th) {
        return order_stat_cdf(xi, th, config.n_total, mu);
    });
}

double outage_conditional_centralized(const ActivationPattern& pattern, double s,
                                      const SystemConfig& config) {
    return outage_conditional_generic(pattern, s, config, [&](int xi, double th) {
        return link_order_stat_cdf(xi, th, config.n_total, config.mean_gain_hop1,
                                   config.mean_gain_hop2);
    });
}

double outage_average(Methodology methodology, double s, const SystemConfig& config) {
    config.validate();
    if (methodology != Methodology::decentralized && methodology != Methodology::centralized)
        throw std::invalid_argument("outage_average: closed form exists for adaptive methodologies only");
    double acc = 0.0;
    for (const auto& pattern : enumerate_patterns(config.n_selected)) {
        if (methodology == Methodology::decentralized) {
            const double p1 = outage_conditional_decentralized(pattern, s, 1, config);
            const double p2 = outage_conditional_decentralized(pattern, s, 2, config);
            acc += two_hop_union(p1, p2);
        } else {
            acc += outage_conditional_centralized(pattern, s, config);
        }
    }
    return acc / config.pattern_count();
}

double outage_asymptotic(Methodology methodology, double s, const SystemConfig& config) {
    config.validate();
    const int d = config.n_total - config.n_selected;
    double coeff;
    if (methodology == Methodology::decentralized) {
        coeff = std::pow(1.0 / config.mean_gain_hop1, d) + std::pow(1.0 / config.mean_gain_hop2, d);
    } else if (methodology == Methodology::centralized) {
        coeff = std::pow(1.0 / link_mean_gain(config.mean_gain_hop1, config.mean_gain_hop2), d);
    } else {
        throw std::invalid_argument("outage_asymptotic: adaptive methodologies only");
    }
    return static_cast<double>(binomial(config.n_total, d)) / config.pattern_count() * coeff *
           std::pow(s / config.snr_tx, d);
}

// ---- capacity ---------------------------------------------------------------

double lambda_term(int n_total, int xi, double x, double mu) {
    if (xi < 1 || xi > n_total) throw std::invalid_argument("lambda_term: order out of range");
    if (!(x > 0.0) || !(mu > 0.0)) throw std::invalid_argument("lambda_term: x and mu must be positive");
    // Expanding F^{xi-1} binomially and integrating ln(1+s)e^{-as} term by
    // term gives sum_b C(xi-1,b) (-1)^{b+1} exp(a)Ei(-a) / (N_T-xi+1+b)
    // with a = x (N_T-xi+1+b) / mu.
    double acc = 0.0;
    for (int b = 0; b < xi; ++b) {
        const int step = n_total - xi + 1 + b;
        const double e = exp_ei_neg(x * step / mu);
        const double term = static_cast<double>(binomial(xi - 1, b)) * e / step;
        acc += (b % 2 == 0) ? -term : term;
    }
    return order_coeff(n_total, xi) / (2.0 * kLn2) * acc;
}

double nu_term(int n_total, int xi, int eta, double x, double mu_i, double mu_j) {
    if (xi < 1 || xi > n_total || eta < 1 || eta > n_total)
        throw std::invalid_argument("nu_term: order out of range");
    if (!(x > 0.0) || !(mu_i > 0.0) || !(mu_j > 0.0))
        throw std::invalid_argument("nu_term: x and means must be positive");
    double acc = 0.0;
    for (int n = eta; n <= n_total; ++n) {
        for (int d = 0; d <= n; ++d) {
            for (int b = 0; b < xi; ++b) {
                const double kappa = (n_total - xi + 1 + b) / mu_i + (n_total + d - n) / mu_j;
                const double weight = static_cast<double>(binomial(n_total, n)) *
                                      static_cast<double>(binomial(n, d)) *
                                      static_cast<double>(binomial(xi - 1, b));
                const double term = weight * exp_ei_neg(x * kappa) / kappa;
                acc += ((b + d) % 2 == 0) ? -term : term;
            }
        }
    }
    return order_coeff(n_total, xi) / (mu_i * 2.0 * kLn2) * acc;
}

double capacity_special_g(int xi, int eta, double x, const SystemConfig& config) {
    const int nt = config.n_total;
    const double mu1 = config.mean_gain_hop1, mu2 = config.mean_gain_hop2;
    return lambda_term(nt, xi, x, mu1) - nu_term(nt, xi, eta, x, mu1, mu2) +
           lambda_term(nt, eta, x, mu2) - nu_term(nt, eta, xi, x, mu2, mu1);
}

double capacity_special_l(int xi, double x, const SystemConfig& config) {
    return lambda_term(config.n_total, xi, x,
                       link_mean_gain(config.mean_gain_hop1, config.mean_gain_hop2));
}

namespace {

// Every injective assignment of `length` slots to order offsets
// 0..n_orders-1 (offsets into the top-N_S order indices).
void for_each_arrangement(int n_orders, int length, const std::function<void(std::span<const int>)>& fn) {
    std::vector<int> pick(static_cast<std::size_t>(length));
    std::vector<bool> used(static_cast<std::size_t>(n_orders), false);
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == length) {
            fn(pick);
            return;
        }
        for (int v = 0; v < n_orders; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            used[static_cast<std::size_t>(v)] = true;
            pick[static_cast<std::size_t>(depth)] = v;
            self(self, depth + 1);
            used[static_cast<std::size_t>(v)] = false;
        }
    };
    rec(rec, 0);
}

void require_adaptive(Methodology m, const char* what) {
    if (m != Methodology::decentralized && m != Methodology::centralized)
        throw std::invalid_argument(std::string(what) + ": adaptive methodologies only");
}

} // namespace

double capacity_conditional_permutation_sum(const ActivationPattern& pattern,
                                            Methodology methodology, const SystemConfig& config) {
    require_adaptive(methodology, "capacity_conditional_permutation_sum");
    const int nt = config.n_total, ns = config.n_selected, na = pattern.n_active;
    const double rho = config.snr_tx;
    if (pattern.index_k == 1) {
        return methodology == Methodology::decentralized
                   ? capacity_special_g(nt - ns, nt - ns, 1.0 / rho, config)
                   : capacity_special_l(nt - ns, 1.0 / rho, config);
    }
    const double x = static_cast<double>(na) / rho;
    const int lowest = nt - ns + 1;
    // cache Lambda over the N_S x N_S (or N_S) order grid
    std::vector<double> grid;
    if (methodology == Methodology::decentralized) {
        grid.resize(static_cast<std::size_t>(ns) * ns);
        for (int a = 0; a < ns; ++a)
            for (int b = 0; b < ns; ++b)
                grid[static_cast<std::size_t>(a) * ns + b] =
                    capacity_special_g(lowest + a, lowest + b, x, config);
    } else {
        grid.resize(static_cast<std::size_t>(ns));
        for (int a = 0; a < ns; ++a) grid[static_cast<std::size_t>(a)] = capacity_special_l(lowest + a, x, config);
    }

    const double card = std::tgamma(ns + 1.0) / std::tgamma(ns - na + 1.0); // N_S!/(N_S-N_A)!
    double total = 0.0;
    if (methodology == Methodology::decentralized) {
        // double sum over independent order assignments of both hops
        for_each_arrangement(ns, na, [&](std::span<const int> xi1) {
            for_each_arrangement(ns, na, [&](std::span<const int> xi2) {
                double c = 0.0;
                for (int n = 0; n < na; ++n)
                    c += grid[static_cast<std::size_t>(xi1[static_cast<std::size_t>(n)]) * ns +
                              xi2[static_cast<std::size_t>(n)]];
                total += c;
            });
        });
        total /= card * card;
    } else {
        for_each_arrangement(ns, na, [&](std::span<const int> xi) {
            for (int n = 0; n < na; ++n) total += grid[static_cast<std::size_t>(xi[static_cast<std::size_t>(n)])];
        });
        total /= card;
    }
    return total;
}

double capacity_conditional_reduced(const ActivationPattern& pattern, Methodology methodology,
                                    const SystemConfig& config) {
    require_adaptive(methodology, "capacity_conditional_reduced");
    const int nt = config.n_total, ns = config.n_selected, na = pattern.n_active;
    const double rho = config.snr_tx;
    if (pattern.index_k == 1) {
        return methodology == Methodology::decentralized
                   ? capacity_special_g(nt - ns, nt - ns, 1.0 / rho, config)
                   : capacity_special_l(nt - ns, 1.0 / rho, config);
    }
    // Position marginals of the order assignment are uniform, so the
    // permutation average collapses to the grid mean times N_A.
    const double x = static_cast<double>(na) / rho;
    const int lowest = nt - ns + 1;
    double acc = 0.0;
    if (methodology == Methodology::decentralized) {
        for (int a = 0; a < ns; ++a)
            for (int b = 0; b < ns; ++b) acc += capacity_special_g(lowest + a, lowest + b, x, config);
        return na * acc / (static_cast<double>(ns) * ns);
    }
    for (int a = 0; a < ns; ++a) acc += capacity_special_l(lowest + a, x, config);
    return na * acc / ns;
}

double capacity_average(Methodology methodology, const SystemConfig& config) {
    config.validate();
    require_adaptive(methodology, "capacity_average");
    if (config.n_selected > 6)
        throw std::invalid_argument("capacity_average: permutation sums limited to n_selected <= 6");
    const bool literal = config.n_selected <= 4;
    // patterns of equal weight share C(k); weight one representative each
    double acc = 0.0;
    for (int w = 0; w <= config.n_selected; ++w) {
        int k = 1;
        for (int bit = 0; bit < w; ++bit) k += 1 << bit; // lowest-bits representative
        const auto pattern = pattern_from_index(k, config.n_selected);
        const double ck = literal
                              ? capacity_conditional_permutation_sum(pattern, methodology, config)
                              : capacity_conditional_reduced(pattern, methodology, config);
        acc += static_cast<double>(binomial(config.n_selected, w)) * ck;
    }
    return acc / config.pattern_count();
}

// ---- SER ---------------------------------------------------------------------

namespace {

// log of N_T! Gamma(n_t - xi + 1 + z) / ((N_T-xi)! Gamma(N_T + 1 + z)):
// the Laplace transform of the xi-th order statistic at z/mu.
double log_slot_factor(int n_total, int xi, double z) {
    return log_gamma(n_total + 1.0) - log_gamma(n_total - xi + 1.0) +
           log_gamma(n_total - xi + 1.0 + z) - log_gamma(n_total + 1.0 + z);
}

double scaled_delta(const ConcatenatedBlock& a, const ConcatenatedBlock& b, std::size_t n) {
    const double sa = 1.0 / std::sqrt(static_cast<double>(std::max(1, a.pattern.n_active)));
    const double sb = 1.0 / std::sqrt(static_cast<double>(std::max(1, b.pattern.n_active)));
    return std::norm(a.slots[n] * sa - b.slots[n] * sb);
}

} // namespace

double ser_theta(const ConcatenatedBlock& x_true, const ConcatenatedBlock& x_hyp,
                 std::span<const int> orders, double mu, const SystemConfig& config) {
    const int nt = config.n_total, ns = config.n_selected;
    if (static_cast<int>(orders.size()) != ns)
        throw std::invalid_argument("ser_theta: orders must assign all selected slots");
    for (int o : orders)
        if (o < nt - ns + 1 || o > nt) throw std::invalid_argument("ser_theta: order out of range");
    const double rho = config.snr_tx;
    double total = 0.0;
    for (const auto& [weight, c] : {std::pair{1.0 / 12.0, mu * rho / 2.0},
                                    std::pair{1.0 / 4.0, 2.0 * mu * rho / 3.0}}) {
        double lg = 0.0;
        for (int n = 0; n < ns; ++n)
            lg += log_slot_factor(nt, orders[static_cast<std::size_t>(n)],
                                  c * scaled_delta(x_true, x_hyp, static_cast<std::size_t>(n)));
        lg += log_slot_factor(nt, nt - ns, c * scaled_delta(x_true, x_hyp, static_cast<std::size_t>(ns)));
        total += weight * std::exp(lg);
    }
    return total;
}

double block_prior(const ConcatenatedBlock& block, const SystemConfig& config) {
    const int groups = std::max(1, block.pattern.n_active);
    return 1.0 / (static_cast<double>(config.pattern_count()) *
                  std::pow(static_cast<double>(config.apm_order), groups));
}

namespace {

// Omega for one transmitted block: permutation-averaged union bound over all
// wrong hypotheses, under the given gain mean (hop or link).
double omega(const CandidateSet& cands, int true_idx, double mu, const SystemConfig& config) {
    const int nt = config.n_total, ns = config.n_selected;
    const double rho = config.snr_tx;
    const auto& blocks = cands.blocks();
    const auto& t = blocks[static_cast<std::size_t>(true_idx)];

    // per (c-term, delta) caches of slot factors across the N_S orders and
    // the complementary order; delta values repeat heavily across hypotheses
    struct Cached {
        std::array<double, 16> per_order;
        double comp;
    };
    const std::array<std::pair<double, double>, 2> terms{
        std::pair{1.0 / 12.0, mu * rho / 2.0}, std::pair{1.0 / 4.0, 2.0 * mu * rho / 3.0}};
    std::array<std::unordered_map<double, Cached>, 2> cache;

    auto factors_for = [&](int term, double delta) -> const Cached& {
        auto& map = cache[static_cast<std::size_t>(term)];
        auto it = map.find(delta);
        if (it != map.end()) return it->second;
        Cached c{};
        const double z = terms[static_cast<std::size_t>(term)].second * delta;
        for (int a = 0; a < ns; ++a)
            c.per_order[static_cast<std::size_t>(a)] = std::exp(log_slot_factor(nt, nt - ns + 1 + a, z));
        c.comp = std::exp(log_slot_factor(nt, nt - ns, z));
        return map.emplace(delta, c).first->second;
    };

    // permutation list over order offsets 0..N_S-1
    std::vector<int> base(static_cast<std::size_t>(ns));
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> perms;
    do perms.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));

    double acc = 0.0;
    std::vector<const Cached*> slot_cache(static_cast<std::size_t>(ns));
    for (int h = 0; h < cands.size(); ++h) {
        if (h == true_idx) continue;
        const auto& hyp = blocks[static_cast<std::size_t>(h)];
        for (std::size_t term = 0; term < terms.size(); ++term) {
            for (int n = 0; n < ns; ++n)
                slot_cache[static_cast<std::size_t>(n)] =
                    &factors_for(static_cast<int>(term), scaled_delta(t, hyp, static_cast<std::size_t>(n)));
            const double comp =
                factors_for(static_cast<int>(term), scaled_delta(t, hyp, static_cast<std::size_t>(ns))).comp;
            double perm_sum = 0.0;
            for (const auto& p : perms) {
                double prod = 1.0;
                for (int n = 0; n < ns; ++n)
                    prod *= slot_cache[static_cast<std::size_t>(n)]
                                ->per_order[static_cast<std::size_t>(p[static_cast<std::size_t>(n)])];
                perm_sum += prod;
            }
            acc += terms[term].first * comp * perm_sum;
        }
    }
    return acc / std::tgamma(ns + 1.0); // 1/N_S!
}

} // namespace

SerResult ser_average_detail(Methodology methodology, const SystemConfig& config) {
    config.validate();
    require_adaptive(methodology, "ser_average");
    if (config.n_selected > 4 || config.apm_order > 4)
        throw std::invalid_argument("ser_average: guarded to n_selected <= 4 and apm_order <= 4");
    const CandidateSet cands(config);
    const double mu_s = link_mean_gain(config.mean_gain_hop1, config.mean_gain_hop2);

    SerResult r;
    for (int i = 0; i < cands.size(); ++i) {
        const auto& block = cands.blocks()[static_cast<std::size_t>(i)];
        double pe;
        if (methodology == Methodology::decentralized) {
            const double o1 = std::min(omega(cands, i, config.mean_gain_hop1, config), 1.0);
            const double o2 = std::min(omega(cands, i, config.mean_gain_hop2, config), 1.0);
            pe = two_hop_union(o1, o2);
        } else {
            pe = omega(cands, i, mu_s, config);
        }
        r.raw += block_prior(block, config) * pe;
    }
    r.saturated = r.raw > 1.0;
    r.value = std::clamp(r.raw, 0.0, 1.0);
    return r;
}

double ser_average(Methodology methodology, const SystemConfig& config) {
    return ser_average_detail(methodology, config).value;
}

std::vector<AnalyticCurvePoint> analytic_curve(CurveKind kind, Methodology methodology,
                                               const SystemConfig& base,
                                               std::span<const double> snr_db_grid) {
    std::vector<AnalyticCurvePoint> out;
    out.reserve(snr_db_grid.size());
    for (double db : snr_db_grid) {
        const SystemConfig cfg = base.with_snr(db_to_linear(db));
        AnalyticCurvePoint p;
        p.snr_tx = cfg.snr_tx;
        p.kind = kind;
        switch (kind) {
        case CurveKind::outage_exact: p.value = outage_average(methodology, cfg.outage_threshold, cfg); break;
        case CurveKind::outage_asymptotic:
            p.value = outage_asymptotic(methodology, cfg.outage_threshold, cfg);
            break;
        case CurveKind::capacity: p.value = capacity_average(methodology, cfg); break;
        case CurveKind::ser_approx: p.value = ser_average(methodology, cfg); break;
        case CurveKind::rate: p.value = average_rate(cfg); break;
        }
        out.push_back(p);
    }
    return out;
}

// ---- rate benchmarks -----------------------------------------------------------

RateBenchmarks rate_benchmarks(const SystemConfig& config) {
    config.validate();
    if (config.n_total % 2 != 0)
        throw std::invalid_argument("rate_benchmarks: classic scheme needs even n_total");
    RateBenchmarks r;
    const double bm = config.bits_per_symbol();
    const auto floor_log2 = [](std::uint64_t v) { return static_cast<double>(std::bit_width(v) - 1); };
    r.classic_bpcu = config.n_total / 2.0 * bm + floor_log2(binomial(config.n_total, config.n_total / 2));
    r.fpsk_bpcu = bm + floor_log2(static_cast<std::uint64_t>(config.n_total));
    return r;
}

} // namespace ofdmim
