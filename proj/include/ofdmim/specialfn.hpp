#pragma once

namespace ofdmim {

// ln Gamma(x) for x > 0. Gamma ratios in the SER formulas are formed as
// exp(log_gamma(a) - log_gamma(b)) so they survive arguments of order 1e5.
double log_gamma(double x);

// e^x * Ei(-x) for x > 0, computed without forming Ei(-x) alone (which
// underflows beyond ~700). Always finite and negative; tends to -1/x.
double exp_ei_neg(double x);

// Gaussian tail Q(x) via erfc.
double q_exact(double x);

// Two-exponential approximation Q(x) ~ exp(-x^2/2)/12 + exp(-2x^2/3)/4,
// accurate for large x.
double q_approx(double x);

} // namespace ofdmim
