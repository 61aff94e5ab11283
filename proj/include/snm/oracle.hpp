#pragma once

// Independent ground truth for the lambda-integral engine: plain Monte Carlo
// over i.i.d. replications, exact enumeration over truncated product spaces
// for discrete laws, and Monte Carlo cross moments of tilted laws.  Nothing
// in here touches the quadrature reduction, so agreement is meaningful.

#include <cstdint>
#include <optional>

#include "snm/kernels.hpp"

namespace snm {

struct OracleEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t replications = 0;
    std::uint64_t seed = 0;
};

// Brute-force E[V(X)]: average of T(x)/S^alpha over replications of n i.i.d.
// draws, with the fallback value on all-zero samples.  Bit-identical per
// (seed, replications) regardless of thread count.
inline OracleEstimate mc_expected_statistic(const DistributionSpec& dist, std::int64_t n,
                                            const RatioStatistic& stat,
                                            std::int64_t replications,
                                            std::uint64_t seed) {
    if (replications < 1000) throw ConfigError("mc_expected_statistic requires >= 1000 replications");
    if (n < 1) throw ConfigError("mc_expected_statistic requires n >= 1");
    stat.validate();
    std::vector<MeanAccumulator> parts(kFixedChunks + 1);
    parallel_chunks(replications, [&](int chunk, std::int64_t b, std::int64_t e) {
        auto rng = make_stream(seed, std::uint64_t(chunk));
        MeanAccumulator acc;
        std::vector<double> x(n);
        for (std::int64_t i = b; i < e; ++i) {
            double s = 0.0;
            for (auto& v : x) {
                v = dist.sample_one(rng);
                s += v;
            }
            if (s <= 0.0) {
                acc.add(stat.fallback_r);
            } else {
                acc.add(stat.kernel.evaluate(x) / std::pow(s, stat.power));
            }
        }
        parts[chunk] = acc;
    });
    MeanAccumulator total;
    for (const auto& p : parts) total.merge(p);
    return {total.mean(), total.std_error(), replications, seed};
}

struct EnumerationResult {
    double value = 0.0;
    double truncation_error_bound = 0.0;
    std::int64_t states = 0;
    std::int64_t support_size = 0; // per-coordinate truncated support {0..K}
};

// Exact E[V(X)] for a discrete law by summing pmf-weighted V over the
// truncated product space, enumerated as multisets with multinomial weights.
// The omitted joint mass is bounded by n * per-coordinate tail mass; the
// remainder bound multiplies it by sup|V|, which must be supplied whenever
// any mass is truncated (refuses otherwise -- an unbounded statistic with
// truncated mass has no rigorous bound).
inline EnumerationResult enumerate_expected_statistic(
    const DistributionSpec& dist, std::int64_t n, const RatioStatistic& stat,
    double truncation_mass_bound = 1e-12,
    std::optional<double> sup_abs_v = std::nullopt) {
    if (dist.support_kind() != SupportKind::discrete)
        throw CapabilityError("enumeration requires a discrete family");
    if (n < 1 || n > 12) throw ConfigError("enumeration supports 1 <= n <= 12");
    stat.validate();

    // truncate the per-coordinate support so n * tail <= bound
    std::vector<double> p;
    double mass = 0.0;
    const double per_coord = truncation_mass_bound / double(n);
    for (std::int64_t k = 0; k < 100000; ++k) {
        p.push_back(dist.pmf(k));
        mass += p.back();
        if (1.0 - mass <= per_coord) break;
    }
    const double tail = std::max(0.0, 1.0 - mass);
    const double omitted_joint = double(n) * tail; // >= 1 - (1-tail)^n
    if (omitted_joint > 0.0 && !sup_abs_v)
        throw CapabilityError(
            "truncated mass " + std::to_string(omitted_joint) +
            " with no sup|V| bound: cannot bound the remainder of an unbounded statistic");
    const std::int64_t K = std::int64_t(p.size());

    std::vector<double> logp(K);
    for (std::int64_t k = 0; k < K; ++k)
        logp[k] = p[k] > 0.0 ? std::log(p[k]) : -std::numeric_limits<double>::infinity();
    std::vector<double> lfact(n + 1);
    for (std::int64_t i = 0; i <= n; ++i) lfact[i] = std::lgamma(double(i) + 1.0);

    // enumerate occupancy vectors (c_0..c_{K-1}), sum c = n, weight
    // n!/(prod c_k!) * prod p_k^{c_k}
    double total = 0.0;
    std::int64_t states = 0;
    std::vector<std::int64_t> c(K, 0);
    std::vector<double> x;
    x.reserve(n);
    auto evaluate_state = [&]() {
        ++states;
        double logw = lfact[n];
        x.clear();
        for (std::int64_t k = 0; k < K; ++k) {
            if (c[k] == 0) continue;
            if (!std::isfinite(logp[k])) return; // zero-probability state
            logw += c[k] * logp[k] - lfact[c[k]];
            for (std::int64_t i = 0; i < c[k]; ++i) x.push_back(double(k));
        }
        double s = 0.0;
        for (double v : x) s += v;
        const double val = s <= 0.0 ? stat.fallback_r
                                    : stat.kernel.evaluate(x) / std::pow(s, stat.power);
        total += std::exp(logw) * val;
    };
    // recursive composition of n into K bins, iterative via explicit stack
    std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t k,
                                                              std::int64_t left) {
        if (k == K - 1) {
            c[k] = left;
            evaluate_state();
            c[k] = 0;
            return;
        }
        for (std::int64_t take = 0; take <= left; ++take) {
            c[k] = take;
            rec(k + 1, left - take);
        }
        c[k] = 0;
    };
    rec(0, n);

    EnumerationResult out;
    out.value = total;
    out.truncation_error_bound = sup_abs_v ? *sup_abs_v * omitted_joint : 0.0;
    out.states = states;
    out.support_size = K;
    return out;
}

enum class CrossMoment { gmd, xi1 };

namespace detail {

// One draw from the tilted law.  Closed-form tilts sample directly; otherwise
// rejection from the base law with acceptance e^{-lambda x} (exact), falling
// back to inverse-CDF when the overall acceptance rate L(lambda) is below 1e-4.
inline double sample_tilted_one(const TiltedView& view, std::mt19937_64& rng) {
    if (auto cf = view.closed_form()) return cf->sample_one(rng);
    const double lam = view.lambda();
    if (lam == 0.0) return view.base().sample_one(rng);
    if (view.base().laplace(lam) < 1e-4) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double v = u(rng);
        v = std::min(std::max(v, 1e-15), 1.0 - 1e-15);
        return view.quantile(v);
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        const double x = view.base().sample_one(rng);
        if (u(rng) <= std::exp(-lam * x)) return x;
    }
}

} // namespace detail

inline std::vector<double> sample_tilted(const TiltedView& view, std::int64_t n,
                                         std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample_tilted requires n >= 1");
    auto rng = make_stream(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = detail::sample_tilted_one(view, rng);
    return out;
}

// Monte Carlo GMD(F^(lambda)) = E|X1-X2| or xi1(F^(lambda)) = E|X1-X2||X1-X3|
// with sampling from the tilted law.
inline OracleEstimate mc_tilted_cross_moment(const TiltedView& view, CrossMoment which,
                                             std::int64_t samples, std::uint64_t seed) {
    if (samples < 1000) throw ConfigError("mc_tilted_cross_moment requires >= 1000 samples");
    std::vector<MeanAccumulator> parts(kFixedChunks + 1);
    parallel_chunks(samples, [&](int chunk, std::int64_t b, std::int64_t e) {
        auto rng = make_stream(seed, std::uint64_t(chunk));
        MeanAccumulator acc;
        for (std::int64_t i = b; i < e; ++i) {
            const double x1 = detail::sample_tilted_one(view, rng);
            const double x2 = detail::sample_tilted_one(view, rng);
            if (which == CrossMoment::gmd) {
                acc.add(std::fabs(x1 - x2));
            } else {
                const double x3 = detail::sample_tilted_one(view, rng);
                acc.add(std::fabs(x1 - x2) * std::fabs(x1 - x3));
            }
        }
        parts[chunk] = acc;
    });
    MeanAccumulator total;
    for (const auto& p : parts) total.merge(p);
    return {total.mean(), total.std_error(), samples, seed};
}

} // namespace snm
