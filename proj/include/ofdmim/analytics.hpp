#pragma once

#include <span>
#include <vector>

#include "ofdmim/config.hpp"
#include "ofdmim/mapping.hpp"
#include "ofdmim/modem.hpp"
#include "ofdmim/patterns.hpp"

namespace ofdmim {

// One evaluated point of a closed-form curve.
enum class CurveKind { outage_exact, outage_asymptotic, capacity, ser_approx, rate };
struct AnalyticCurvePoint {
    double snr_tx = 0.0;
    double value = 0.0;
    CurveKind kind = CurveKind::outage_exact;
};

// Evaluates one closed-form family over an SNR grid (dB in, linear snr_tx
// out in each point). Outage kinds use base.outage_threshold.
std::vector<AnalyticCurvePoint> analytic_curve(CurveKind kind, Methodology methodology,
                                               const SystemConfig& base,
                                               std::span<const double> snr_db_grid);

// ---- outage -------------------------------------------------------------

// Probability that the worst of the N_A(k) active subcarriers sits at order
// xi among the N_T sorted gains: C(N_T-xi, N_A-1) / C(N_S, N_A).
double upsilon(const ActivationPattern& pattern, int xi, const SystemConfig& config);

// Conditional outage of one hop given pattern k (decentralized selection).
double outage_conditional_decentralized(const ActivationPattern& pattern, double s, int hop,
                                        const SystemConfig& config);

// Conditional outage of the whole link given pattern k (centralized).
double outage_conditional_centralized(const ActivationPattern& pattern, double s,
                                      const SystemConfig& config);

// Equiprobable average over all 2^N_S patterns, two-hop combined.
double outage_average(Methodology methodology, double s, const SystemConfig& config);

// High-SNR power-series limit; diversity order N_T - N_S.
double outage_asymptotic(Methodology methodology, double s, const SystemConfig& config);

// ---- capacity -----------------------------------------------------------

// lambda(xi, x; mu) = int_0^inf (x/2) log2(1+s) f_(xi)(x s) ds in closed
// form (finite alternating sum of exp(a)Ei(-a) terms).
double lambda_term(int n_total, int xi, double x, double mu);

// nu(xi, eta, x; mu_i, mu_j) = int (x/2) log2(1+s) f_i(xi)(xs) F_j(eta)(xs) ds.
double nu_term(int n_total, int xi, int eta, double x, double mu_i, double mu_j);

// Lambda_G(xi, eta, x) = lambda_1 - nu_{1,2} + lambda_2 - nu_{2,1}: average
// of (1/2)log2(1 + min of the two hops' order-statistic SNRs).
double capacity_special_g(int xi, int eta, double x, const SystemConfig& config);

// Lambda_L(xi, x): single-hop form under the link mean mu_sigma.
double capacity_special_l(int xi, double x, const SystemConfig& config);

// Conditional average capacity for one pattern, literal permutation sum.
double capacity_conditional_permutation_sum(const ActivationPattern& pattern,
                                            Methodology methodology, const SystemConfig& config);

// Equivalent symmetry-reduced form N_A/N_S^2 * sum_xi sum_eta Lambda_G
// (decentralized) resp. N_A/N_S * sum_xi Lambda_L (centralized).
double capacity_conditional_reduced(const ActivationPattern& pattern, Methodology methodology,
                                    const SystemConfig& config);

// Average network capacity in bit/s/Hz. Literal permutation sums are used
// for N_S <= 4 and the reduced form up to N_S = 6; larger N_S is rejected.
double capacity_average(Methodology methodology, const SystemConfig& config);

// ---- SER ----------------------------------------------------------------

// Pairwise error kernel Theta: expectation of the two-exponential Q
// approximation over independent order-statistic gains, as a product of
// Gamma ratios evaluated in log space. `orders` assigns one of the top N_S
// order indices to each selected slot; the complementary slot always sits
// at order N_T - N_S. `mu` is the hop mean (mu_i) or the link mean
// (mu_sigma) depending on the methodology.
double ser_theta(const ConcatenatedBlock& x_true, const ConcatenatedBlock& x_hyp,
                 std::span<const int> orders, double mu, const SystemConfig& config);

// Probability that a given block is transmitted under equiprobable bits:
// 1 / (2^N_S M^{max(1, N_A)}); sums to one over the candidate set.
double block_prior(const ConcatenatedBlock& block, const SystemConfig& config);

struct SerResult {
    double value = 0.0;  // clipped to [0, 1]
    double raw = 0.0;    // union bound before clipping
    bool saturated = false;
};

// Union-bound average SER over all transmitted blocks, permutation-averaged
// over the order assignments (Omega terms), end-to-end combined per
// methodology. Guarded to N_S <= 4 and M <= 4.
SerResult ser_average_detail(Methodology methodology, const SystemConfig& config);
double ser_average(Methodology methodology, const SystemConfig& config);

// ---- rate benchmarks ----------------------------------------------------

struct RateBenchmarks {
    double classic_bpcu = 0.0; // OFDM IM without adaptation, N_T/2 active
    double fpsk_bpcu = 0.0;    // single active subcarrier
};
RateBenchmarks rate_benchmarks(const SystemConfig& config);

} // namespace ofdmim
