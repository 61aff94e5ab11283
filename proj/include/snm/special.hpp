#pragma once

#include <cmath>
#include <limits>

#include "snm/errors.hpp"

namespace snm::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

// Regularized lower incomplete gamma P(a,x), a > 0.  Series for x < a+1,
// continued fraction for the complement otherwise.
inline double gamma_p(double a, double x) {
    if (a <= 0.0) throw DomainError("gamma_p requires a > 0");
    if (x < 0.0) throw DomainError("gamma_p requires x >= 0");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // series for gamma(a,x)*x^{-a}e^{x}
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= x / (a + k);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// log of the continued-fraction denominator D in Gamma(a,x) = e^{-x} x^a / D.
// Valid for any real a once x is moderately large (we use it for x >= ~20).
inline double log_gamma_upper_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    // Gamma(a,x) = e^{-x} x^a * h
    return -x + a * std::log(x) + std::log(h);
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Quantile of the standard gamma (shape a, scale 1) by bisection on gamma_p.
inline double gamma_quantile(double a, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) throw DomainError("gamma_quantile requires p < 1");
    double lo = 0.0, hi = a + 1.0;
    while (gamma_p(a, hi) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_p(a, mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace snm::special
