#pragma once

#include <complex>
#include <vector>

#include "ofdmim/config.hpp"
#include "ofdmim/rng.hpp"

namespace ofdmim {

class RngStream;

// One block-fading draw: independent frequency-domain gains for both hops.
struct ChannelRealization {
    std::vector<std::complex<double>> hop1; // h_1(n), n = 1..N_T
    std::vector<std::complex<double>> hop2;

    const std::vector<std::complex<double>>& hop(int i) const { return i == 1 ? hop1 : hop2; }
};

// Gains are CN(0, mu_i) per subcarrier so |h_i(n)|^2 ~ Exp(mean mu_i).
ChannelRealization sample_realization(RngStream& rng, const SystemConfig& config);

// Allocation-free variant for trial loops.
void sample_realization(RngStream& rng, const SystemConfig& config, ChannelRealization& out);

double exp_pdf(double s, double mu);
double exp_cdf(double s, double mu);

// CDF of the xi-th order statistic (xi-th smallest of n_total i.i.d.
// exponential gains): sum_{n=xi}^{N_T} C(N_T,n) F(s)^n (1-F(s))^{N_T-n}.
double order_stat_cdf(int xi, double s, int n_total, double mu);

// Matching density N_T! F^{xi-1} (1-F)^{N_T-xi} f / ((xi-1)!(N_T-xi)!).
double order_stat_pdf(int xi, double s, int n_total, double mu);

// A "link" is the per-subcarrier bottleneck min(|h_1|^2, |h_2|^2); it is
// exponential with mean mu1*mu2 / (mu1+mu2).
double link_mean_gain(double mu1, double mu2);
double link_gain_pdf(double s, double mu1, double mu2);
double link_gain_cdf(double s, double mu1, double mu2);
double link_order_stat_cdf(int xi, double s, int n_total, double mu1, double mu2);
double link_order_stat_pdf(int xi, double s, int n_total, double mu1, double mu2);

} // namespace ofdmim
