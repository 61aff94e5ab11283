#pragma once

// Adaptive Gauss-Kronrod integration of non-negative-axis integrands.
// Semi-infinite integrals are mapped to (0,1) and refined globally with a
// worst-segment-first heap until the requested tolerance is met.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "snm/errors.hpp"

namespace snm {

enum class Transform { rational_map, log_map, none_with_truncation };

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
    int initial_intervals = 1; // uniform seed partition before adaptation
    Transform transform = Transform::rational_map;
    double truncation_lambda_max = 0.0; // only with none_with_truncation

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw ConfigError("quadrature tolerances must be positive");
        if (max_subdivisions < 1)
            throw ConfigError("max_subdivisions must be >= 1");
        if (initial_intervals < 1 || initial_intervals > 1024)
            throw ConfigError("initial_intervals must be in [1, 1024]");
        if (transform == Transform::none_with_truncation && !(truncation_lambda_max > 0.0))
            throw ConfigError("truncation_lambda_max must be positive with none_with_truncation");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions_used = 0;
    bool converged = false;
    std::int64_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double a, double b, double& value, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[15];
    fv[7] = f(mid);
    double resg = kWg[3] * fv[7];
    double resk = kWgk[7] * fv[7];
    double resabs = std::fabs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(mid - dx);
        fv[14 - j] = f(mid + dx);
        const double fsum = fv[j] + fv[14 - j];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fv[7] - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv[j] - reskh) + std::fabs(fv[14 - j] - reskh));
    value = resk * half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double underflow = std::numeric_limits<double>::min();
    if (resabs > underflow / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
}

struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

// Globally adaptive GK15 on a finite interval.  A uniform seed partition
// (initial_intervals > 1) makes evaluation counts nearly independent of how
// sharply the integrand is peaked.
template <class F>
IntegralResult adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                        int max_subdivisions, int initial_intervals = 1) {
    std::int64_t evals = 0;
    auto counted = [&](double x) {
        ++evals;
        const double y = f(x);
        if (!std::isfinite(y)) throw EvaluationError("non-finite integrand value", x);
        return y;
    };
    std::priority_queue<Segment> heap;
    const int init = std::clamp(initial_intervals, 1, max_subdivisions);
    double total = 0.0, toterr = 0.0;
    for (int i = 0; i < init; ++i) {
        Segment s{a + (b - a) * (double(i) / init), a + (b - a) * (double(i + 1) / init), 0.0,
                  0.0};
        gk15(counted, s.a, s.b, s.value, s.err);
        total += s.value;
        toterr += s.err;
        heap.push(s);
    }
    int used = init;
    while (toterr > std::max(abs_tol, rel_tol * std::fabs(total)) && used < max_subdivisions) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) { // interval at machine resolution
            heap.push(worst);
            break;
        }
        Segment left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
        gk15(counted, left.a, left.b, left.value, left.err);
        gk15(counted, right.a, right.b, right.value, right.err);
        total += left.value + right.value - worst.value;
        toterr += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++used;
    }
    // re-sum for accuracy
    double vsum = 0.0, esum = 0.0;
    while (!heap.empty()) {
        vsum += heap.top().value;
        esum += heap.top().err;
        heap.pop();
    }
    IntegralResult r;
    r.value = vsum;
    r.error_estimate = esum;
    r.subdivisions_used = used;
    r.converged = esum <= std::max(abs_tol, rel_tol * std::fabs(vsum));
    r.evaluations = evals;
    return r;
}

} // namespace detail

// Integral of f over a finite interval.
template <class F>
IntegralResult integrate_finite(F&& f, double a, double b, double rel_tol = 1e-10,
                                double abs_tol = 1e-12, int max_subdivisions = 4000) {
    return detail::adaptive(std::forward<F>(f), a, b, rel_tol, abs_tol, max_subdivisions);
}

// Integral of f over (0, infinity).  f may have an integrable power
// singularity at 0; the caller guarantees overall integrability.
template <class F>
IntegralResult integrate_semi_infinite(F&& f, const QuadratureConfig& config = {}) {
    config.validate();
    switch (config.transform) {
        case Transform::rational_map: {
            // lambda = t/(1-t), d lambda = dt/(1-t)^2
            auto g = [&f](double t) {
                const double om = 1.0 - t;
                if (om < 1e-150) return 0.0; // admissible integrands have long since decayed
                return f(t / om) / (om * om);
            };
            return detail::adaptive(g, 0.0, 1.0, config.rel_tol, config.abs_tol,
                                    config.max_subdivisions, config.initial_intervals);
        }
        case Transform::log_map: {
            // lambda = -log(1-t), d lambda = dt/(1-t)
            auto g = [&f](double t) {
                const double om = 1.0 - t;
                if (om < 1e-300) return 0.0;
                return f(-std::log(om)) / om;
            };
            return detail::adaptive(g, 0.0, 1.0, config.rel_tol, config.abs_tol,
                                    config.max_subdivisions, config.initial_intervals);
        }
        case Transform::none_with_truncation:
            return detail::adaptive(f, 0.0, config.truncation_lambda_max, config.rel_tol,
                                    config.abs_tol, config.max_subdivisions,
                                    config.initial_intervals);
    }
    throw ConfigError("unknown transform");
}

// (1/Gamma(alpha)) * integral of lambda^{alpha-1} g(lambda) over (0, infinity),
// with the power weight folded into node evaluation.
template <class G>
IntegralResult integrate_with_power_weight(G&& g, double power_exponent,
                                           const QuadratureConfig& config = {}) {
    if (!(power_exponent > 0.0))
        throw ConfigError("power_exponent must be positive");
    const double log_gamma = std::lgamma(power_exponent);
    auto f = [&g, power_exponent, log_gamma](double lam) {
        const double w = std::exp((power_exponent - 1.0) * std::log(lam) - log_gamma);
        return w * g(lam);
    };
    return integrate_semi_infinite(f, config);
}

} // namespace snm
