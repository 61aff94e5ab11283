#pragma once

// T-kernels for the ratio engine: each kernel knows how to evaluate T(x) on a
// sample (used by the Monte Carlo / enumeration oracles) and how to compute
// E[T] under a product of exponentially tilted marginals (used by the
// lambda-integral).  Tilted marginals arrive as distinct views with
// multiplicities, so cost scales with the number of distinct laws, not n.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "snm/distributions.hpp"

namespace snm {

struct TKernel {
    enum class Kind { pairwise_u_stat, single_sum, custom };

    Kind kind = Kind::custom;
    int degree = 1;
    std::string name;
    // E[T(X)] when X_i are independent with the given tilted marginals;
    // views[i] repeats mult[i] times, n = sum(mult).
    std::function<double(const std::vector<TiltedView>&, const std::vector<std::int64_t>&,
                         std::int64_t)>
        tilted_expectation;
    // T(x) on a concrete sample (oracle side).
    std::function<double(std::span<const double>)> evaluate;
    // When set, the kernel is only meaningful with this normalizing power.
    double required_power = 0.0; // 0 = unconstrained
};

struct RatioStatistic {
    TKernel kernel;
    double power = 1.0;   // alpha
    double fallback_r = 0.0;

    void validate() const {
        if (!(power > 0.0)) throw ConfigError("ratio power must be > 0");
        if (fallback_r < 0.0) throw ConfigError("fallback r must be >= 0");
        if (kernel.required_power != 0.0 && kernel.required_power != power)
            throw ConfigError("kernel '" + kernel.name + "' requires power " +
                              std::to_string(kernel.required_power));
    }
};

namespace kernels {

namespace detail {

// E|X - Y| for independent X, Y with the given (tilted) laws.
inline double cross_gmd(const TiltedView& u, const TiltedView& v) {
    auto f = [&u, &v](double t) {
        const double Fu = u.cdf(t), Fv = v.cdf(t);
        return Fu * (1.0 - Fv) + Fv * (1.0 - Fu);
    };
    QuadratureConfig qc;
    qc.rel_tol = 1e-11;
    qc.abs_tol = 1e-280;
    return integrate_semi_infinite(f, qc).value;
}

inline double sum_abs_diffs(std::span<const double> x) {
    // sum_{i != j} |x_i - x_j| via the sorted identity
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const std::int64_t n = std::int64_t(s.size());
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += (2.0 * i - (n - 1)) * s[i];
    return 2.0 * acc;
}

} // namespace detail

// T = S_n^k, the identity-statistic family (with power alpha = k this must
// integrate to 1 - P(S_n = 0) exactly).
inline TKernel sum_power(int k) {
    if (k < 1 || k > 3) throw ConfigError("sum_power supports k in {1,2,3}");
    TKernel t;
    t.kind = TKernel::Kind::custom;
    t.degree = k;
    t.name = "sum_power_" + std::to_string(k);
    t.evaluate = [k](std::span<const double> x) {
        const double s = std::accumulate(x.begin(), x.end(), 0.0);
        double v = 1.0;
        for (int i = 0; i < k; ++i) v *= s;
        return v;
    };
    t.tilted_expectation = [k](const std::vector<TiltedView>& views,
                               const std::vector<std::int64_t>& mult, std::int64_t) {
        // cumulants of S add across independent components
        double k1 = 0.0, k2 = 0.0, k3 = 0.0;
        for (std::size_t i = 0; i < views.size(); ++i) {
            const double m1 = views[i].moment(1);
            if (k == 1) {
                k1 += mult[i] * m1;
                continue;
            }
            const double m2 = views[i].moment(2);
            k1 += mult[i] * m1;
            k2 += mult[i] * (m2 - m1 * m1);
            if (k == 3) {
                const double m3 = views[i].moment(3);
                k3 += mult[i] * (m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1);
            }
        }
        if (k == 1) return k1;
        if (k == 2) return k2 + k1 * k1;
        return k3 + 3.0 * k2 * k1 + k1 * k1 * k1;
    };
    return t;
}

// T = X_1.
inline TKernel first_component() {
    TKernel t;
    t.kind = TKernel::Kind::single_sum;
    t.degree = 1;
    t.name = "first_component";
    t.evaluate = [](std::span<const double> x) { return x.empty() ? 0.0 : x[0]; };
    t.tilted_expectation = [](const std::vector<TiltedView>& views,
                              const std::vector<std::int64_t>&, std::int64_t) {
        return views.front().moment(1);
    };
    return t;
}

// T = sum_i x_i^j (j in {1,2,3}).
inline TKernel sum_of_powers(int j) {
    TKernel t;
    t.kind = TKernel::Kind::single_sum;
    t.degree = 1;
    t.name = "sum_of_powers_" + std::to_string(j);
    t.evaluate = [j](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += std::pow(v, j);
        return s;
    };
    t.tilted_expectation = [j](const std::vector<TiltedView>& views,
                               const std::vector<std::int64_t>& mult, std::int64_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < views.size(); ++i) s += mult[i] * views[i].moment(j);
        return s;
    };
    return t;
}

// T = c * sum_{i != j} |x_i - x_j|  (the Gini numerator for c = 1/(2(n-1))).
inline TKernel pairwise_abs_diff(double scale) {
    TKernel t;
    t.kind = TKernel::Kind::pairwise_u_stat;
    t.degree = 2;
    t.name = "pairwise_abs_diff";
    t.evaluate = [scale](std::span<const double> x) {
        return scale * detail::sum_abs_diffs(x);
    };
    t.tilted_expectation = [scale](const std::vector<TiltedView>& views,
                                   const std::vector<std::int64_t>& mult, std::int64_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < views.size(); ++i) {
            if (mult[i] >= 2) s += double(mult[i]) * (mult[i] - 1) * views[i].gmd();
            for (std::size_t jj = i + 1; jj < views.size(); ++jj)
                s += 2.0 * mult[i] * mult[jj] * detail::cross_gmd(views[i], views[jj]);
        }
        return scale * s;
    };
    return t;
}

// T = c * sum_{i<j} (x_i - x_j)^2  (the SCV numerator for c = n/(n-1)).
inline TKernel pairwise_sq_diff(double scale) {
    TKernel t;
    t.kind = TKernel::Kind::pairwise_u_stat;
    t.degree = 2;
    t.name = "pairwise_sq_diff";
    t.evaluate = [scale](std::span<const double> x) {
        // sum_{i<j}(xi-xj)^2 = n sum x^2 - (sum x)^2
        const double n = double(x.size());
        double s = 0.0, s2 = 0.0;
        for (double v : x) {
            s += v;
            s2 += v * v;
        }
        return scale * (n * s2 - s * s);
    };
    t.tilted_expectation = [scale](const std::vector<TiltedView>& views,
                                   const std::vector<std::int64_t>& mult, std::int64_t) {
        // E sum_{i != j} (X_i - X_j)^2 with per-component tilted laws
        double s = 0.0;
        std::vector<double> m1(views.size()), var(views.size());
        for (std::size_t i = 0; i < views.size(); ++i) {
            m1[i] = views[i].moment(1);
            var[i] = views[i].variance();
        }
        for (std::size_t i = 0; i < views.size(); ++i) {
            if (mult[i] >= 2) s += double(mult[i]) * (mult[i] - 1) * 2.0 * var[i];
            for (std::size_t jj = i + 1; jj < views.size(); ++jj) {
                const double d = m1[i] - m1[jj];
                s += 2.0 * mult[i] * mult[jj] * (var[i] + var[jj] + d * d);
            }
        }
        return scale * 0.5 * s; // ordered pairs -> i<j pairs
    };
    return t;
}

// Fully custom kernel.
inline TKernel custom(std::string name,
                      std::function<double(const std::vector<TiltedView>&,
                                           const std::vector<std::int64_t>&, std::int64_t)>
                          tilted,
                      std::function<double(std::span<const double>)> eval, int degree = 1) {
    TKernel t;
    t.kind = TKernel::Kind::custom;
    t.degree = degree;
    t.name = std::move(name);
    t.tilted_expectation = std::move(tilted);
    t.evaluate = std::move(eval);
    return t;
}

} // namespace kernels
} // namespace snm
