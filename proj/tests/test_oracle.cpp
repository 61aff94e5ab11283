#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snm/oracle.hpp"
#include "snm/statistics.hpp"

using namespace snm;

namespace {

RatioStatistic gini_stat(std::int64_t n, double r = 0.0) {
    return {kernels::pairwise_abs_diff(1.0 / (2.0 * double(n - 1))), 1.0, r};
}

} // namespace

TEST_CASE("exact enumeration for Bernoulli") {
    // E sample-Gini for Bernoulli(p), n=2 is 2p(1-p): mixed pairs have Gini 1
    const auto e = enumerate_expected_statistic(DistributionSpec::bernoulli(0.3), 2,
                                                gini_stat(2));
    CHECK(e.value == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(e.truncation_error_bound == 0.0);
    CHECK(e.support_size == 2);
    CHECK(e.states == 3);
}

TEST_CASE("enumeration truncation bookkeeping for Poisson") {
    const auto e = enumerate_expected_statistic(DistributionSpec::poisson(1.0), 3,
                                                gini_stat(3), 1e-12, 1.5);
    CHECK(e.truncation_error_bound > 0.0);
    CHECK(e.truncation_error_bound < 1e-7);
    const auto engine = gini_expectation(DistributionSpec::poisson(1.0), 3);
    CHECK(std::fabs(engine.expected - e.value) <= 1e-9 + e.truncation_error_bound);
}

TEST_CASE("enumeration refuses truncated mass without a statistic bound") {
    CHECK_THROWS_AS(enumerate_expected_statistic(DistributionSpec::poisson(1.0), 3,
                                                 gini_stat(3), 1e-12),
                    CapabilityError);
    CHECK_THROWS_AS(enumerate_expected_statistic(DistributionSpec::gamma(1.0, 1.0), 3,
                                                 gini_stat(3)),
                    CapabilityError); // continuous support cannot be enumerated
    CHECK_THROWS_AS(enumerate_expected_statistic(DistributionSpec::bernoulli(0.5), 13,
                                                 gini_stat(13)),
                    ConfigError); // n cap
}

TEST_CASE("Monte Carlo oracle is deterministic and honest about error") {
    const DistributionSpec d = DistributionSpec::exponential(1.0);
    const auto a = mc_expected_statistic(d, 5, gini_stat(5), 200000, 42);
    const auto b = mc_expected_statistic(d, 5, gini_stat(5), 200000, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error > 0.0);

    const auto engine = gini_expectation(d, 5);
    CHECK(std::fabs(engine.expected - a.mean) <= 4.0 * a.std_error);
}

TEST_CASE("Monte Carlo fallback value at the all-zero sample") {
    RatioStatistic stat = gini_stat(2, 0.25);
    const auto m = mc_expected_statistic(DistributionSpec::bernoulli(0.5), 2, stat, 50000, 9);
    // E = 2pq * 1 + q^2 * 0.25 with p=q=1/2
    CHECK(m.mean == doctest::Approx(0.5 + 0.25 * 0.25).epsilon(0.05));
}

TEST_CASE("tilted sampling matches tilted moments") {
    for (const auto& d : {DistributionSpec::gamma(2.0, 1.0), DistributionSpec::pareto(2.5, 1.0),
                          DistributionSpec::lognormal(0.0, 0.5)}) {
        for (double lam : {0.5, 2.0}) {
            const TiltedView view(d, lam);
            const auto x = sample_tilted(view, 200000, 31);
            MeanAccumulator acc;
            for (double v : x) acc.add(v);
            const double z = (acc.mean() - view.mean()) / acc.std_error();
            CHECK(std::fabs(z) < 4.0);
        }
    }
}

TEST_CASE("tilted cross moments: gmd within the Monte Carlo band") {
    const TiltedView view(DistributionSpec::gamma(1.0, 1.0), 1.0);
    const auto cm = mc_tilted_cross_moment(view, CrossMoment::gmd, 200000, 17);
    CHECK(std::fabs(cm.mean - view.gmd()) <= 4.0 * cm.std_error);
}
