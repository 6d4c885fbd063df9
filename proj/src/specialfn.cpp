#include "ofdmim/specialfn.hpp"

#include <cmath>
#include <stdexcept>

namespace ofdmim {

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Ei(-x) = gamma + ln x + sum (-x)^n / (n n!), reliable for small x.
double ei_neg_series(double x) {
    double sum = 0.0, term = 1.0;
    for (int n = 1; n < 200; ++n) {
        term *= -x / n;
        const double add = term / n;
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return kEulerGamma + std::log(x) + sum;
}

// e^x E1(x) by the modified Lentz continued fraction, stable for x >= 1.
double expx_e1_cf(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 400; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

// e^x E1(x) ~ (1/x) sum (-1)^k k! / x^k, truncated at the smallest term.
double expx_e1_asymptotic(double x) {
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double next = -term * k / x;
        if (std::abs(next) >= std::abs(term)) break; // divergent tail reached
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17) break;
    }
    return sum / x;
}

} // namespace

double exp_ei_neg(double x) {
    if (!(x > 0.0)) throw std::domain_error("exp_ei_neg: requires x > 0");
    if (x < 1.0) return std::exp(x) * ei_neg_series(x);
    if (x < 40.0) return -expx_e1_cf(x);
    return -expx_e1_asymptotic(x);
}

double q_exact(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_approx(double x) {
    if (!(x >= 0.0)) throw std::domain_error("q_approx: requires x >= 0");
    return std::exp(-0.5 * x * x) / 12.0 + std::exp(-2.0 * x * x / 3.0) / 4.0;
}

} // namespace ofdmim
