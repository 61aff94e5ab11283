#pragma once

// Exact first and second moments of the normalized inequality statistics
// (sample Gini, squared coefficient of variation, Theil index) via the
// lambda-integral reduction, plus the closed forms available for Gamma
// samples.

#include <cstdint>
#include <map>
#include <mutex>

#include "snm/ratio_engine.hpp"

namespace snm {

struct StatMomentReport {
    double expected = 0.0;
    double population_value = 0.0;
    double ratio = 0.0;          // expected / population (NaN when population is 0)
    double atom_term = 0.0;
    double quadrature_error = 0.0;
    bool converged = false;
    std::int64_t evaluations = 0;
};

struct SecondMomentReport {
    double second_moment = 0.0;
    double expected = 0.0;
    double variance = 0.0;
    double atom_term = 0.0;
    double quadrature_error = 0.0;
    bool converged = false;
    std::int64_t evaluations = 0;
};

struct Xi1Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t triples = 0;
};

// Monte Carlo estimate of xi1 = E|X1-X2||X1-X3| over i.i.d. triples.
// Chunking is fixed-width, so the result is bit-identical for a given
// (seed, triples) regardless of thread count.
inline Xi1Estimate xi1_monte_carlo(const DistributionSpec& dist,
                                   std::int64_t triples = 10'000'000,
                                   std::uint64_t seed = 20240817u) {
    if (triples < 1) throw ConfigError("xi1_monte_carlo requires triples >= 1");
    std::vector<MeanAccumulator> parts(kFixedChunks + 1);
    parallel_chunks(triples, [&](int chunk, std::int64_t b, std::int64_t e) {
        auto rng = make_stream(seed, std::uint64_t(chunk));
        MeanAccumulator acc;
        for (std::int64_t i = b; i < e; ++i) {
            const double x1 = dist.sample_one(rng);
            const double x2 = dist.sample_one(rng);
            const double x3 = dist.sample_one(rng);
            acc.add(std::fabs(x1 - x2) * std::fabs(x1 - x3));
        }
        parts[chunk] = acc;
    });
    MeanAccumulator total;
    for (const auto& p : parts) total.merge(p);
    return {total.mean(), total.std_error(), triples};
}

// xi1 of the unit-scale Gamma(shape, 1), memoized per shape.  The second
// moment of the Gini coefficient for scale families only ever needs this
// one number per shape; the tilt rescales it.
inline Xi1Estimate xi1_gamma_unit_cached(double shape,
                                         std::int64_t triples = 10'000'000) {
    static std::map<std::pair<double, std::int64_t>, Xi1Estimate> cache;
    static std::mutex mu;
    const auto key = std::make_pair(shape, triples);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const Xi1Estimate est = xi1_monte_carlo(DistributionSpec::gamma(shape, 1.0), triples);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, est);
    return est;
}

// --- Gamma closed forms ----------------------------------------------------

// Population Gini of Gamma(shape, any scale): Gamma(a+1/2) / (sqrt(pi) Gamma(a+1)).
inline double gamma_gini_population(double shape) {
    return std::exp(std::lgamma(shape + 0.5) - std::lgamma(shape + 1.0)) / std::sqrt(M_PI);
}

// E[Ghat^2] for Gamma(shape, .) samples of size n, given xi1 of the
// unit-scale law.
inline double gamma_gini_second_moment_closed_form(double shape, std::int64_t n,
                                                   double xi1_unit) {
    if (n < 2) throw ConfigError("closed-form Gini second moment requires n >= 2");
    const double a = shape;
    const double dn = double(n);
    const double denom = (dn - 1.0) * (a * dn + 1.0);
    const double g2 = std::exp(2.0 * (std::lgamma(a + 0.5) - std::lgamma(a))) / M_PI;
    return 1.0 / denom + (dn - 2.0) * xi1_unit / (a * denom) +
           (dn - 2.0) * (dn - 3.0) * g2 / (a * denom);
}

// Var(Ghat) for Gamma samples; uses the exact unbiasedness E[Ghat] = G.
inline double gamma_gini_variance_closed_form(double shape, std::int64_t n,
                                              double xi1_unit) {
    const double g = gamma_gini_population(shape);
    return gamma_gini_second_moment_closed_form(shape, n, xi1_unit) - g * g;
}

// E[chat_V^2] for Gamma(shape, .) samples: n / (shape * n + 1).
inline double gamma_scv_expectation_closed_form(double shape, std::int64_t n) {
    return double(n) / (shape * double(n) + 1.0);
}

// --- first moments ---------------------------------------------------------

// E[Ghat] and R = E[Ghat]/G for i.i.d. samples, with fallback value r on the
// all-zero sample.
inline StatMomentReport gini_expectation(const DistributionSpec& dist, std::int64_t n,
                                         double r = 0.0,
                                         const QuadratureConfig& config = {}) {
    if (n < 2) throw ConfigError("sample Gini requires n >= 2");
    RatioStatistic stat{kernels::pairwise_abs_diff(1.0 / (2.0 * double(n - 1))), 1.0, r};
    const MomentResult m = expected_ratio_iid(dist, n, stat, config);
    StatMomentReport out;
    out.expected = m.value;
    out.population_value = dist.population_stat(Stat::gini);
    out.ratio = out.population_value > 0.0
                    ? out.expected / out.population_value
                    : std::numeric_limits<double>::quiet_NaN();
    out.atom_term = m.atom_term;
    out.quadrature_error = m.quadrature_error;
    out.converged = m.converged;
    out.evaluations = m.evaluations;
    return out;
}

// E[chat_V^2] and its ratio to the population squared coefficient of
// variation.  Requires a finite population variance (Pareto needs shape > 2).
inline StatMomentReport scv_expectation(const DistributionSpec& dist, std::int64_t n,
                                        double r = 0.0,
                                        const QuadratureConfig& config = {}) {
    if (n < 2) throw ConfigError("sample SCV requires n >= 2");
    const double pop = dist.population_stat(Stat::scv); // throws if infinite/undefined
    RatioStatistic stat{kernels::pairwise_sq_diff(double(n) / double(n - 1)), 2.0, r};
    const MomentResult m = expected_ratio_iid(dist, n, stat, config);
    StatMomentReport out;
    out.expected = m.value;
    out.population_value = pop;
    out.ratio = pop > 0.0 ? out.expected / pop : std::numeric_limits<double>::quiet_NaN();
    out.atom_term = m.atom_term;
    out.quadrature_error = m.quadrature_error;
    out.converged = m.converged;
    out.evaluations = m.evaluations;
    return out;
}

// --- second moment of the sample Gini --------------------------------------

namespace detail {

// xi_2 = 2 E(X1-X2)^2 /2 ... precisely: xi_2 = E(X1-X2)^2 = 2 Var,
// xi_1 = E|X1-X2||X1-X3|, xi_0 = GMD^2, all under the tilted law.
struct XiSet {
    double xi2 = 0.0;
    double xi1 = 0.0;
    double xi0 = 0.0;
};

// xi_1 of a discrete lattice law by direct truncated summation:
// sum_x pmf(x) m(x)^2 with m(x) = E|x - X|.
inline double xi1_discrete(const DistributionSpec& d) {
    std::vector<double> p;
    double mass = 0.0;
    for (std::int64_t k = 0; k < 100000; ++k) {
        const double pk = d.pmf(k);
        p.push_back(pk);
        mass += pk;
        if (mass > 1.0 - 1e-16 && pk < 1e-18) break;
    }
    const std::int64_t K = std::int64_t(p.size());
    double out = 0.0;
    for (std::int64_t x = 0; x < K; ++x) {
        if (p[x] == 0.0) continue;
        double m = 0.0;
        for (std::int64_t y = 0; y < K; ++y) m += p[y] * std::fabs(double(x - y));
        out += p[x] * m * m;
    }
    return out;
}

// Provides the tilted xi-triple for one distribution.  Scale families reuse
// a single Monte Carlo xi1 of the unit-scale law; discrete closed tilts sum
// the lattice directly; the rest fall back to quasi-random sampling.
class XiProvider {
public:
    XiProvider(const DistributionSpec& dist, std::int64_t mc_triples)
        : dist_(dist) {
        switch (dist.family()) {
            case Family::Gamma:
                scale_ = true;
                base_xi2_ = 2.0 * dist.variance();
                base_xi0_ = dist.gmd() * dist.gmd();
                base_xi1_ = dist.param2() * dist.param2() *
                            xi1_gamma_unit_cached(dist.param1(), mc_triples).value;
                xi1_se_ = dist.param2() * dist.param2() *
                          xi1_gamma_unit_cached(dist.param1(), mc_triples).std_error;
                break;
            case Family::Exponential:
                scale_ = true;
                base_xi2_ = 2.0 * dist.variance();
                base_xi0_ = dist.gmd() * dist.gmd();
                base_xi1_ = xi1_gamma_unit_cached(1.0, mc_triples).value /
                            (dist.param1() * dist.param1());
                xi1_se_ = xi1_gamma_unit_cached(1.0, mc_triples).std_error /
                          (dist.param1() * dist.param1());
                break;
            default:
                break;
        }
    }

    double xi1_std_error() const { return xi1_se_; }

    XiSet at(double lam, bool need1, bool need0) const {
        XiSet xs;
        if (scale_) {
            // tilting a scale family is a deterministic shrink by c(lambda)
            const double c = dist_.family() == Family::Gamma
                                 ? 1.0 / (1.0 + dist_.param2() * lam)
                                 : dist_.param1() / (dist_.param1() + lam);
            const double c2 = c * c;
            xs.xi2 = c2 * base_xi2_;
            if (need1) xs.xi1 = c2 * base_xi1_;
            if (need0) xs.xi0 = c2 * base_xi0_;
            return xs;
        }
        TiltedView view(dist_, lam);
        if (auto cf = view.closed_form()) {
            if (cf->family() == Family::Bernoulli) {
                const double q = cf->param1();
                xs.xi2 = 2.0 * q * (1.0 - q);
                if (need1) xs.xi1 = q * (1.0 - q);
                if (need0) xs.xi0 = 4.0 * q * q * (1.0 - q) * (1.0 - q);
                return xs;
            }
            if (cf->family() == Family::PointMass) return xs; // all zero
            if (cf->support_kind() == SupportKind::discrete) {
                xs.xi2 = 2.0 * cf->variance();
                if (need1) xs.xi1 = xi1_discrete(*cf);
                if (need0) {
                    const double g = cf->gmd();
                    xs.xi0 = g * g;
                }
                return xs;
            }
        }
        xs.xi2 = 2.0 * view.variance();
        if (need1) xs.xi1 = view.xi1_qmc(4096).first;
        if (need0) {
            const double g = view.gmd();
            xs.xi0 = g * g;
        }
        return xs;
    }

private:
    DistributionSpec dist_;
    bool scale_ = false;
    double base_xi2_ = 0.0, base_xi1_ = 0.0, base_xi0_ = 0.0;
    double xi1_se_ = 0.0;
};

} // namespace detail

// E[Ghat^2] and Var(Ghat) for i.i.d. samples:
//
//   E Ghat^2 = (1/(4(n-1)^2)) int_0^inf lambda [2n(n-1) xi2(lam)
//              + 4n(n-1)(n-2) xi1(lam) + n(n-1)(n-2)(n-3) xi0(lam)]
//              L^n(lambda) d lambda + r^2 P^n(X=0)
//
// (the alpha = 2 case of the reduction; 1/Gamma(2) = 1).
inline SecondMomentReport gini_second_moment(const DistributionSpec& dist, std::int64_t n,
                                             double r = 0.0,
                                             const QuadratureConfig& config = {},
                                             std::int64_t xi1_mc_triples = 10'000'000) {
    if (n < 2) throw ConfigError("sample Gini requires n >= 2");
    const double dn = double(n);
    const double c2 = 2.0 * dn * (dn - 1.0) / (4.0 * (dn - 1.0) * (dn - 1.0));
    const double c1 = 4.0 * dn * (dn - 1.0) * (dn - 2.0) / (4.0 * (dn - 1.0) * (dn - 1.0));
    const double c0 =
        dn * (dn - 1.0) * (dn - 2.0) * (dn - 3.0) / (4.0 * (dn - 1.0) * (dn - 1.0));
    const bool need1 = c1 != 0.0;
    const bool need0 = c0 != 0.0;

    detail::XiProvider xi(dist, xi1_mc_triples);

    auto integrand = [&](double lam) {
        const double logw = std::log(lam) + dn * dist.log_laplace(lam);
        if (logw < -745.0) return 0.0;
        const detail::XiSet xs = xi.at(lam, need1, need0);
        return std::exp(logw) * (c2 * xs.xi2 + c1 * xs.xi1 + c0 * xs.xi0);
    };
    QuadratureConfig qc = config;
    qc.initial_intervals = std::max(qc.initial_intervals, 16); // see run_engine
    const IntegralResult ir = integrate_semi_infinite(integrand, qc);
    const double p0n = std::pow(dist.zero_mass(), dn);

    SecondMomentReport out;
    out.atom_term = r * r * p0n;
    out.second_moment = ir.value + out.atom_term;
    out.quadrature_error = ir.error_estimate;
    out.converged = ir.converged;
    out.evaluations = ir.evaluations;

    const StatMomentReport first = gini_expectation(dist, n, r, config);
    out.expected = first.expected;
    out.variance = out.second_moment - first.expected * first.expected;
    out.converged = out.converged && first.converged;
    return out;
}

// --- Theil index -----------------------------------------------------------

namespace detail {

inline constexpr int kPrimes[64] = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

// T(x) = sum_i x_i log(n x_i / S_n) with 0 log 0 := 0.
inline double theil_numerator(std::span<const double> x) {
    const double dn = double(x.size());
    double s = 0.0;
    for (double v : x) s += v;
    if (s <= 0.0) return 0.0;
    double t = 0.0;
    for (double v : x)
        if (v > 0.0) t += v * std::log(dn * v / s);
    return t;
}

} // namespace detail

struct TheilReport {
    double expected = 0.0;
    double population_value = 0.0;
    double ratio = 0.0;
    double atom_term = 0.0;
    double quadrature_error = 0.0;
    double inner_std_error = 0.0; // largest per-node std error of the inner estimate
    bool converged = false;
    std::int64_t evaluations = 0;
};

// E[That] for the sample Theil index That = T(X)/S_n with
// T(X) = sum_i X_i log(n X_i / S_n).  The inner expectation
// E_tilted[T] has no product form, so it is estimated at each lambda node by
// quasi-random sampling through the tilted quantile transform.  For scale
// families (Gamma, Exponential) the tilt only shrinks the sample, T is
// 1-homogeneous, and one precomputed unit-scale inner estimate serves every
// node exactly.
inline TheilReport theil_expectation(const DistributionSpec& dist, std::int64_t n,
                                     double r = 0.0, const QuadratureConfig& config = {},
                                     std::int64_t inner_points = 2048) {
    if (n < 2) throw ConfigError("sample Theil requires n >= 2");
    if (n > 64) throw CapabilityError("Theil inner sampler supports n <= 64");
    if (inner_points < 16) throw ConfigError("inner_points must be >= 16");
    const double dn = double(n);

    TheilReport out;
    out.population_value = dist.population_stat(Stat::theil);
    const double p0n = std::pow(dist.zero_mass(), dn);
    out.atom_term = r * p0n;

    const bool scale_family =
        dist.family() == Family::Gamma || dist.family() == Family::Exponential;

    double unit_t = 0.0;
    if (scale_family) {
        TiltedView base_view(dist, 0.0);
        MeanAccumulator acc;
        std::vector<double> x(n);
        for (std::int64_t i = 0; i < inner_points; ++i) {
            for (std::int64_t j = 0; j < n; ++j) {
                const double u =
                    std::min(std::max(halton(i, detail::kPrimes[j]), 1e-12), 1.0 - 1e-12);
                x[j] = base_view.quantile(u);
            }
            acc.add(detail::theil_numerator(x));
        }
        unit_t = acc.mean();
        out.inner_std_error = acc.std_error();
    }

    double worst_se = out.inner_std_error;
    auto integrand = [&](double lam) {
        const double logw = dn * dist.log_laplace(lam);
        if (logw < -745.0) return 0.0;
        if (scale_family) {
            const double c = dist.family() == Family::Gamma
                                 ? 1.0 / (1.0 + dist.param2() * lam)
                                 : dist.param1() / (dist.param1() + lam);
            return std::exp(logw) * c * unit_t;
        }
        TiltedView view(dist, lam);
        MeanAccumulator acc;
        std::vector<double> x(n);
        for (std::int64_t i = 0; i < inner_points; ++i) {
            for (std::int64_t j = 0; j < n; ++j) {
                const double u =
                    std::min(std::max(halton(i, detail::kPrimes[j]), 1e-12), 1.0 - 1e-12);
                x[j] = view.quantile(u);
            }
            acc.add(detail::theil_numerator(x));
        }
        if (acc.std_error() > worst_se) worst_se = acc.std_error();
        return std::exp(logw) * acc.mean();
    };
    const IntegralResult ir = integrate_semi_infinite(integrand, config);
    out.expected = ir.value + out.atom_term;
    out.quadrature_error = ir.error_estimate;
    out.inner_std_error = worst_se;
    out.converged = ir.converged;
    out.evaluations = ir.evaluations;
    out.ratio = out.population_value > 0.0
                    ? out.expected / out.population_value
                    : std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace snm
