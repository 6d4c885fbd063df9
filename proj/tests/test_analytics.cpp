#include <algorithm>
#include <bit>
#include <random>

#include <stdexcept>

#include <doctest.h>

#include "ofdmim/analytics.hpp"
#include "ofdmim/channel.hpp"
#include "support/quadrature.hpp"
#include "support/testutil.hpp"

using namespace ofdmim;
using testsupport::integrate_to_inf;
using testsupport::oracle_order_cdf;
using testsupport::oracle_order_pdf;
using testsupport::pascal_binomial;

namespace {

SystemConfig make_cfg(int nt, int ns, int m, double snr_db) {
    SystemConfig c;
    c.n_total = nt;
    c.n_selected = ns;
    c.apm_order = m;
    c.snr_tx = db_to_linear(snr_db);
    return c;
}

} // namespace

TEST_CASE("upsilon examples and combinatorial count oracle") {
    auto cfg = make_cfg(4, 2, 2, 0.0);
    const auto one_active = pattern_from_index(2, 2);
    CHECK(upsilon(one_active, 3, cfg) == doctest::Approx(0.5));
    CHECK(upsilon(one_active, 4, cfg) == doctest::Approx(0.5));
    const auto all_active = pattern_from_index(4, 2);
    CHECK(upsilon(all_active, 3, cfg) == doctest::Approx(1.0));
    CHECK_THROWS_AS(upsilon(all_active, 4, cfg), std::invalid_argument);
    CHECK_THROWS_AS(upsilon(pattern_from_index(1, 2), 3, cfg), std::invalid_argument);

    // direct enumeration: among all N_A-subsets of the top N_S orders, the
    // fraction whose worst member has order xi
    for (int nt : {4, 6, 8}) {
        for (int ns = 1; ns < nt; ++ns) {
            for (int na = 1; na <= ns; ++na) {
                SystemConfig c = make_cfg(nt, ns, 2, 0.0);
                int k = 1;
                for (int b = 0; b < na; ++b) k += 1 << b;
                const auto pattern = pattern_from_index(k, ns);
                std::vector<int> orders(static_cast<std::size_t>(ns));
                for (int i = 0; i < ns; ++i) orders[static_cast<std::size_t>(i)] = nt - ns + 1 + i;
                std::vector<long long> count(static_cast<std::size_t>(nt) + 2, 0);
                long long total = 0;
                std::vector<int> pick;
                auto rec = [&](auto&& self, int start) -> void {
                    if (static_cast<int>(pick.size()) == na) {
                        ++count[static_cast<std::size_t>(*std::min_element(pick.begin(), pick.end()))];
                        ++total;
                        return;
                    }
                    for (int i = start; i < ns; ++i) {
                        pick.push_back(orders[static_cast<std::size_t>(i)]);
                        self(self, i + 1);
                        pick.pop_back();
                    }
                };
                rec(rec, 0);
                double norm_sum = 0.0;
                for (int xi = nt - ns + 1; xi <= nt - na + 1; ++xi) {
                    const double u = upsilon(pattern, xi, c);
                    CHECK(u == doctest::Approx(static_cast<double>(count[static_cast<std::size_t>(xi)]) /
                                               static_cast<double>(total)));
                    norm_sum += u;
                }
                CHECK(norm_sum == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("conditional outage: limits and monotonicity") {
    auto cfg = make_cfg(4, 2, 2, 10.0);
    for (int k = 1; k <= 4; ++k) {
        const auto pattern = pattern_from_index(k, 2);
        CHECK(outage_conditional_decentralized(pattern, 0.0, 1, cfg) == 0.0);
        double prev = -1.0;
        for (double s = 0.0; s < 20.0; s += 0.5) {
            const double v = outage_conditional_decentralized(pattern, s, 1, cfg);
            CHECK(v >= prev);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
}

TEST_CASE("conditional outage against a selection + threshold Monte Carlo") {
    // hop 1, every pattern, (N_T, N_S) = (4, 2), rho = 10 dB, s = 1
    auto cfg = make_cfg(4, 2, 2, 10.0);
    std::mt19937_64 rng(321);
    std::exponential_distribution<double> exp1(1.0);
    const int draws = 400000;
    std::array<long long, 5> outages{};
    for (int i = 0; i < draws; ++i) {
        std::array<double, 4> g;
        for (auto& v : g) v = exp1(rng);
        std::array<int, 4> idx = {0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return g[static_cast<std::size_t>(a)] > g[static_cast<std::size_t>(b)];
        });
        std::array<int, 2> sel = {idx[0], idx[1]};
        std::sort(sel.begin(), sel.end());
        const int comp = idx[2];
        for (int k = 1; k <= 4; ++k) {
            bool out = false;
            if (k == 1) {
                out = cfg.snr_tx * g[static_cast<std::size_t>(comp)] < cfg.outage_threshold;
            } else {
                const int na = std::popcount(static_cast<unsigned>(k - 1));
                for (int n = 0; n < 2; ++n) {
                    if (!(((k - 1) >> n) & 1)) continue;
                    if (cfg.snr_tx / na * g[static_cast<std::size_t>(sel[static_cast<std::size_t>(n)])] <
                        cfg.outage_threshold)
                        out = true;
                }
            }
            if (out) ++outages[static_cast<std::size_t>(k)];
        }
    }
    for (int k = 1; k <= 4; ++k) {
        const double analytic =
            outage_conditional_decentralized(pattern_from_index(k, 2), cfg.outage_threshold, 1, cfg);
        const double se = std::sqrt(analytic * (1.0 - analytic) / draws);
        CHECK(std::abs(static_cast<double>(outages[static_cast<std::size_t>(k)]) / draws - analytic) <=
              3.0 * se);
    }
}

TEST_CASE("average outage basics") {
    auto cfg = make_cfg(4, 2, 2, 10.0);
    // P -> 1 as s -> inf
    CHECK(outage_average(Methodology::decentralized, 1e9, cfg) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(outage_average(Methodology::centralized, 1e9, cfg) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(outage_average(Methodology::decentralized, 0.0, cfg) == 0.0);
    CHECK_THROWS_AS(outage_average(Methodology::none, 1.0, cfg), std::invalid_argument);

    // centralized with mu1 = mu2 equals the one-hop formula under mu_sigma:
    // here verified via the substitution identity on the conditional pieces
    for (int k = 1; k <= 4; ++k) {
        SystemConfig sub = cfg;
        sub.mean_gain_hop1 = link_mean_gain(cfg.mean_gain_hop1, cfg.mean_gain_hop2);
        sub.mean_gain_hop2 = sub.mean_gain_hop1;
        CHECK(outage_conditional_centralized(pattern_from_index(k, 2), 1.0, cfg) ==
              doctest::Approx(outage_conditional_decentralized(pattern_from_index(k, 2), 1.0, 1, sub))
                  .epsilon(1e-12));
    }
}

TEST_CASE("average outage and SER are non-increasing in SNR") {
    for (auto m : {Methodology::decentralized, Methodology::centralized}) {
        double prev_o = 1.1, prev_s = 1.1;
        for (double db : {0.0, 10.0, 20.0, 30.0, 40.0}) {
            const auto cfg = make_cfg(4, 2, 2, db);
            const double o = outage_average(m, 1.0, cfg);
            const double s = ser_average(m, cfg);
            CHECK(o <= prev_o);
            CHECK(s <= prev_s);
            prev_o = o;
            prev_s = s;
        }
    }
}

TEST_CASE("asymptotic outage: ratio, slope and coefficient") {
    for (auto [nt, ns] : {std::pair{4, 1}, std::pair{4, 2}, std::pair{4, 3}, std::pair{8, 4}}) {
        auto cfg = make_cfg(nt, ns, 2, 60.0);
        for (auto m : {Methodology::decentralized, Methodology::centralized}) {
            const double exact = outage_average(m, 1.0, cfg);
            const double asym = outage_asymptotic(m, 1.0, cfg);
            CHECK(asym / exact == doctest::Approx(1.0).epsilon(0.05));
            // log-log slope of the exact curve between 50 and 60 dB
            auto cfg50 = make_cfg(nt, ns, 2, 50.0);
            const double slope =
                std::log10(outage_average(m, 1.0, cfg)) - std::log10(outage_average(m, 1.0, cfg50));
            CHECK(slope == doctest::Approx(-(nt - ns)).epsilon(0.1 / (nt - ns)));
        }
    }
    // coefficient ratio centralized/decentralized = 2^(d-1) when mu1 = mu2 = 1
    auto cfg = make_cfg(4, 2, 2, 30.0);
    const double ratio = outage_asymptotic(Methodology::centralized, 1.0, cfg) /
                         outage_asymptotic(Methodology::decentralized, 1.0, cfg);
    CHECK(ratio == doctest::Approx(std::pow(2.0, 4 - 2 - 1)).epsilon(1e-12));
}

TEST_CASE("lambda_term matches quadrature of its defining integral") {
    for (auto [nt, xi, x, mu] : {std::tuple{4, 3, 0.1, 1.0}, std::tuple{4, 1, 0.5, 2.0},
                                 std::tuple{4, 4, 0.02, 1.0}, std::tuple{8, 5, 0.25, 0.7}}) {
        const double quad = integrate_to_inf(
            [&](double s) {
                return x / 2.0 * std::log2(1.0 + s) * oracle_order_pdf(xi, x * s, nt, mu);
            },
            0.0, 1e-11);
        CHECK(lambda_term(nt, xi, x, mu) == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("nu_term matches quadrature of its defining integral") {
    for (auto [nt, xi, eta, x, mi, mj] :
         {std::tuple{4, 3, 4, 0.1, 1.0, 1.0}, std::tuple{4, 2, 2, 0.5, 1.0, 1.0},
          std::tuple{4, 4, 3, 0.2, 2.0, 0.5}, std::tuple{8, 6, 7, 0.3, 1.0, 1.0}}) {
        const double quad = integrate_to_inf(
            [&](double s) {
                return x / 2.0 * std::log2(1.0 + s) * oracle_order_pdf(xi, x * s, nt, mi) *
                       oracle_order_cdf(eta, x * s, nt, mj);
            },
            0.0, 1e-11);
        CHECK(nu_term(nt, xi, eta, x, mi, mj) == doctest::Approx(quad).epsilon(1e-7));
    }
    // capacity integrand vanishes as x grows (x = 200 is ~ -23 dB per slot)
    CHECK(nu_term(4, 3, 4, 200.0, 1.0, 1.0) < 0.01);
    CHECK(nu_term(4, 3, 4, 200.0, 1.0, 1.0) < nu_term(4, 3, 4, 0.1, 1.0, 1.0));
    CHECK(lambda_term(4, 3, 200.0, 1.0) < 0.01);
    CHECK(lambda_term(4, 3, 2000.0, 1.0) < lambda_term(4, 3, 200.0, 1.0));
}

TEST_CASE("capacity_special_g matches quadrature of the min-SNR density") {
    auto cfg = make_cfg(4, 2, 2, 0.0);
    cfg.mean_gain_hop1 = 1.0;
    cfg.mean_gain_hop2 = 2.0;
    for (auto [xi, eta, x] : {std::tuple{3, 4, 0.1}, std::tuple{2, 2, 0.5}, std::tuple{4, 3, 0.05}}) {
        const double quad = integrate_to_inf(
            [&](double s) {
                const double f1 = oracle_order_pdf(xi, x * s, 4, cfg.mean_gain_hop1);
                const double F2 = oracle_order_cdf(eta, x * s, 4, cfg.mean_gain_hop2);
                const double f2 = oracle_order_pdf(eta, x * s, 4, cfg.mean_gain_hop2);
                const double F1 = oracle_order_cdf(xi, x * s, 4, cfg.mean_gain_hop1);
                return 0.5 * std::log2(1.0 + s) * x * (f1 * (1.0 - F2) + f2 * (1.0 - F1));
            },
            0.0, 1e-11);
        CHECK(capacity_special_g(xi, eta, x, cfg) == doctest::Approx(quad).epsilon(1e-7));
    }
    // Lambda decreases as x grows (larger x = lower SNR)
    CHECK(capacity_special_g(3, 3, 0.1, cfg) > capacity_special_g(3, 3, 0.2, cfg));
    CHECK(capacity_special_l(3, 0.1, cfg) > capacity_special_l(3, 0.2, cfg));
    // equal means and equal orders: Lambda_G equals the numerical min-density
    // integral with the link mean only via quadrature, asserted above
}

TEST_CASE("literal permutation sum equals the symmetry-reduced capacity") {
    for (auto [nt, ns] : {std::pair{4, 2}, std::pair{4, 3}, std::pair{8, 4}}) {
        auto cfg = make_cfg(nt, ns, 2, 17.0);
        cfg.mean_gain_hop1 = 1.3;
        cfg.mean_gain_hop2 = 0.8;
        for (int w = 1; w <= ns; ++w) {
            int k = 1;
            for (int b = 0; b < w; ++b) k += 1 << b;
            const auto pattern = pattern_from_index(k, ns);
            for (auto m : {Methodology::decentralized, Methodology::centralized}) {
                const double lit = capacity_conditional_permutation_sum(pattern, m, cfg);
                const double red = capacity_conditional_reduced(pattern, m, cfg);
                CHECK(lit == doctest::Approx(red).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("capacity_average against a protocol Monte Carlo") {
    auto cfg = make_cfg(4, 2, 2, 20.0);
    std::mt19937_64 rng(777);
    std::exponential_distribution<double> exp1(1.0);
    for (auto m : {Methodology::decentralized, Methodology::centralized}) {
        testsupport::MeanAccum acc;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            std::array<double, 4> g1, g2;
            for (auto& v : g1) v = exp1(rng);
            for (auto& v : g2) v = exp1(rng);
            auto top2 = [&](const std::array<double, 4>& g, std::array<int, 2>& sel, int& comp) {
                std::array<int, 4> idx = {0, 1, 2, 3};
                std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                    return g[static_cast<std::size_t>(a)] > g[static_cast<std::size_t>(b)];
                });
                sel = {idx[0], idx[1]};
                std::sort(sel.begin(), sel.end());
                comp = idx[2];
            };
            std::array<int, 2> s1, s2;
            int c1, c2;
            if (m == Methodology::decentralized) {
                top2(g1, s1, c1);
                top2(g2, s2, c2);
            } else {
                std::array<double, 4> link;
                for (int n = 0; n < 4; ++n)
                    link[static_cast<std::size_t>(n)] = std::min(g1[static_cast<std::size_t>(n)],
                                                                 g2[static_cast<std::size_t>(n)]);
                top2(link, s1, c1);
                s2 = s1;
                c2 = c1;
            }
            const int k = 1 + static_cast<int>(rng() % 4);
            double cap = 0.0;
            if (k == 1) {
                cap = 0.5 * std::log2(1.0 + cfg.snr_tx * std::min(g1[static_cast<std::size_t>(c1)],
                                                                  g2[static_cast<std::size_t>(c2)]));
            } else {
                const int na = std::popcount(static_cast<unsigned>(k - 1));
                for (int n = 0; n < 2; ++n) {
                    if (!(((k - 1) >> n) & 1)) continue;
                    const double ga = g1[static_cast<std::size_t>(s1[static_cast<std::size_t>(n)])];
                    const double gb = g2[static_cast<std::size_t>(s2[static_cast<std::size_t>(n)])];
                    cap += 0.5 * std::log2(1.0 + cfg.snr_tx / na * std::min(ga, gb));
                }
            }
            acc.add(cap);
        }
        const double analytic = capacity_average(m, cfg);
        CHECK(std::abs(acc.mean() - analytic) / analytic < 0.02);
    }
}

TEST_CASE("capacity increases with SNR and rejects oversized permutation sums") {
    for (auto m : {Methodology::decentralized, Methodology::centralized}) {
        double prev = 0.0;
        for (double db : {0.0, 10.0, 20.0, 30.0}) {
            const double c = capacity_average(m, make_cfg(4, 2, 2, db));
            CHECK(c > prev);
            prev = c;
        }
    }
    CHECK_THROWS_AS(capacity_average(Methodology::decentralized, make_cfg(256, 7, 2, 10.0)),
                    std::invalid_argument);
}

TEST_CASE("ser_theta degenerate and monotonicity") {
    auto cfg = make_cfg(4, 2, 2, 20.0);
    const auto block = encode(BitPayload{4, {1, 2}}, cfg);
    const std::array<int, 2> orders = {3, 4};
    // zero distance: every Gamma ratio is 1, so Theta = 1/12 + 1/4
    CHECK(ser_theta(block, block, orders, 1.0, cfg) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const auto other = encode(BitPayload{4, {2, 1}}, cfg);
    const double t20 = ser_theta(block, other, orders, 1.0, cfg);
    const double t30 = ser_theta(block, other, orders, 1.0, make_cfg(4, 2, 2, 30.0));
    CHECK(t30 < t20);
    CHECK_THROWS_AS(ser_theta(block, other, std::array<int, 2>{2, 4}, 1.0, cfg), std::invalid_argument);
}

TEST_CASE("ser_theta matches (N_S+1)-fold Monte Carlo integration of q_approx") {
    // single-slot difference at 10 dB where the MC integration is well
    // conditioned; independent per-slot order statistics by construction
    auto cfg = make_cfg(4, 2, 2, 10.0);
    const auto t = encode(BitPayload{3, {1}}, cfg); // slot 2 active, +1
    const auto h = encode(BitPayload{3, {2}}, cfg); // slot 2 active, -1
    std::mt19937_64 rng(24680);
    for (const std::array<int, 2> orders : {std::array<int, 2>{3, 4}, std::array<int, 2>{4, 3}}) {
        testsupport::MeanAccum acc;
        const int draws = 2000000;
        for (int i = 0; i < draws; ++i) {
            double quad = 0.0;
            for (int n = 0; n < 2; ++n) {
                const double delta = std::norm(t.slots[static_cast<std::size_t>(n)] -
                                               h.slots[static_cast<std::size_t>(n)]);
                if (delta > 0.0)
                    quad += delta * testsupport::sample_order_stat(
                                        rng, orders[static_cast<std::size_t>(n)], 4, 1.0);
            }
            const double deltac = std::norm(t.slots[2] - h.slots[2]);
            if (deltac > 0.0) quad += deltac * testsupport::sample_order_stat(rng, 2, 4, 1.0);
            const double x = std::sqrt(cfg.snr_tx * quad);
            acc.add(std::exp(-0.5 * x * x) / 12.0 + std::exp(-2.0 * x * x / 3.0) / 4.0);
        }
        const double closed = ser_theta(t, h, orders, 1.0, cfg);
        CHECK(std::abs(closed - acc.mean()) / acc.mean() < 0.05);
    }
}

TEST_CASE("block prior sums to one over the candidate set") {
    for (int ns = 1; ns <= 6; ++ns) {
        for (int m : {2, 4}) {
            SystemConfig cfg = make_cfg(8, ns, m, 0.0);
            const CandidateSet cands(cfg);
            CHECK(cands.size() == static_cast<int>(symbol_space_size(ns, m)));
            double total = 0.0;
            for (const auto& b : cands.blocks()) total += block_prior(b, cfg);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("ser_average orderings and guards") {
    // decentralized selection outperforms centralized at high SNR
    auto cfg40 = make_cfg(4, 2, 2, 40.0);
    const double dec = ser_average(Methodology::decentralized, cfg40);
    const double cen = ser_average(Methodology::centralized, cfg40);
    CHECK(dec <= cen);
    CHECK(dec > 0.0);
    // decreasing in SNR
    CHECK(ser_average(Methodology::decentralized, make_cfg(4, 2, 2, 30.0)) > dec);
    // clipped at low SNR
    const auto low = ser_average_detail(Methodology::centralized, make_cfg(4, 2, 2, -10.0));
    CHECK(low.value <= 1.0);
    if (low.saturated) CHECK(low.raw > 1.0);
    CHECK_THROWS_AS(ser_average(Methodology::decentralized, make_cfg(16, 5, 2, 10.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ser_average(Methodology::decentralized, make_cfg(16, 2, 8, 10.0)),
                    std::invalid_argument);
}

TEST_CASE("analytic_curve bundles the closed forms over a grid") {
    auto cfg = make_cfg(4, 2, 2, 0.0);
    const std::vector<double> grid = {10.0, 20.0, 30.0};
    const auto exact = analytic_curve(CurveKind::outage_exact, Methodology::decentralized, cfg, grid);
    const auto asym =
        analytic_curve(CurveKind::outage_asymptotic, Methodology::decentralized, cfg, grid);
    const auto cap = analytic_curve(CurveKind::capacity, Methodology::centralized, cfg, grid);
    REQUIRE(exact.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto point_cfg = cfg.with_snr(db_to_linear(grid[i]));
        CHECK(exact[i].snr_tx == doctest::Approx(point_cfg.snr_tx));
        CHECK(exact[i].kind == CurveKind::outage_exact);
        CHECK(exact[i].value ==
              doctest::Approx(outage_average(Methodology::decentralized, 1.0, point_cfg)));
        CHECK(asym[i].value ==
              doctest::Approx(outage_asymptotic(Methodology::decentralized, 1.0, point_cfg)));
        CHECK(cap[i].value == doctest::Approx(capacity_average(Methodology::centralized, point_cfg)));
    }
}

TEST_CASE("rate benchmarks") {
    const auto r42 = rate_benchmarks(make_cfg(4, 2, 2, 0.0));
    CHECK(r42.classic_bpcu == doctest::Approx(4.0));
    CHECK(r42.fpsk_bpcu == doctest::Approx(3.0));
    const auto r82 = rate_benchmarks(make_cfg(8, 2, 2, 0.0));
    CHECK(r82.classic_bpcu == doctest::Approx(10.0)); // 4 + floor(log2 70)
    CHECK(r82.fpsk_bpcu == doctest::Approx(4.0));
    // independent re-derivation by integer enumeration
    for (int nt : {4, 8, 16}) {
        for (int m : {2, 4}) {
            const auto r = rate_benchmarks(make_cfg(nt, nt / 2, m, 0.0));
            int width = 0;
            while ((1ll << (width + 1)) <= static_cast<long long>(pascal_binomial(nt, nt / 2))) ++width;
            const int bm = m == 2 ? 1 : 2;
            CHECK(r.classic_bpcu == doctest::Approx(nt / 2.0 * bm + width));
            int wfpsk = 0;
            while ((1 << (wfpsk + 1)) <= nt) ++wfpsk;
            CHECK(r.fpsk_bpcu == doctest::Approx(bm + wfpsk));
        }
    }
}
