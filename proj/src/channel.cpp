#include "ofdmim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "ofdmim/patterns.hpp"

namespace ofdmim {

ChannelRealization sample_realization(RngStream& rng, const SystemConfig& config) {
    ChannelRealization r;
    sample_realization(rng, config, r);
    return r;
}

void sample_realization(RngStream& rng, const SystemConfig& config, ChannelRealization& out) {
    out.hop1.resize(static_cast<std::size_t>(config.n_total));
    out.hop2.resize(static_cast<std::size_t>(config.n_total));
    for (auto& h : out.hop1) h = rng.cnormal(config.mean_gain_hop1);
    for (auto& h : out.hop2) h = rng.cnormal(config.mean_gain_hop2);
}

double exp_pdf(double s, double mu) { return s < 0.0 ? 0.0 : std::exp(-s / mu) / mu; }

double exp_cdf(double s, double mu) { return s <= 0.0 ? 0.0 : -std::expm1(-s / mu); }

namespace {

void check_order(int xi, int n_total) {
    if (n_total < 1 || xi < 1 || xi > n_total)
        throw std::invalid_argument("order statistic: requires 1 <= xi <= n_total");
}

} // namespace

double order_stat_cdf(int xi, double s, int n_total, double mu) {
    check_order(xi, n_total);
    const double F = exp_cdf(s, mu);
    if (F <= 0.0) return 0.0;
    const double G = 1.0 - F;
    double acc = 0.0;
    for (int n = xi; n <= n_total; ++n) {
        acc += static_cast<double>(binomial(n_total, n)) * std::pow(F, n) * std::pow(G, n_total - n);
    }
    return acc > 1.0 ? 1.0 : acc;
}

double order_stat_pdf(int xi, double s, int n_total, double mu) {
    check_order(xi, n_total);
    if (s < 0.0) return 0.0;
    const double F = exp_cdf(s, mu);
    const double coeff = static_cast<double>(xi) * static_cast<double>(binomial(n_total, xi));
    return coeff * std::pow(F, xi - 1) * std::pow(1.0 - F, n_total - xi) * exp_pdf(s, mu);
}

double link_mean_gain(double mu1, double mu2) {
    if (!(mu1 > 0.0) || !(mu2 > 0.0))
        throw std::invalid_argument("link_mean_gain: means must be positive");
    return mu1 * mu2 / (mu1 + mu2);
}

double link_gain_pdf(double s, double mu1, double mu2) { return exp_pdf(s, link_mean_gain(mu1, mu2)); }

double link_gain_cdf(double s, double mu1, double mu2) { return exp_cdf(s, link_mean_gain(mu1, mu2)); }

double link_order_stat_cdf(int xi, double s, int n_total, double mu1, double mu2) {
    return order_stat_cdf(xi, s, n_total, link_mean_gain(mu1, mu2));
}

double link_order_stat_pdf(int xi, double s, int n_total, double mu1, double mu2) {
    return order_stat_pdf(xi, s, n_total, link_mean_gain(mu1, mu2));
}

} // namespace ofdmim
