#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "snm/ratio_engine.hpp"

using namespace snm;

TEST_CASE("kernel evaluation on samples") {
    const std::vector<double> x = {3.0, 1.0, 2.0};
    CHECK(kernels::sum_power(1).evaluate(x) == doctest::Approx(6.0));
    CHECK(kernels::sum_power(2).evaluate(x) == doctest::Approx(36.0));
    CHECK(kernels::first_component().evaluate(x) == doctest::Approx(3.0));
    CHECK(kernels::sum_of_powers(2).evaluate(x) == doctest::Approx(14.0));
    // abs-diff kernel sums ordered pairs: 2 * (2 + 1 + 1)
    CHECK(kernels::pairwise_abs_diff(1.0).evaluate(x) == doctest::Approx(8.0));
    // sq-diff kernel sums unordered pairs: 4 + 1 + 1
    CHECK(kernels::pairwise_sq_diff(1.0).evaluate(x) == doctest::Approx(6.0));
}

TEST_CASE("sorted pairwise sum identity matches the quadratic loop") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (std::size_t n : {2u, 17u, 1000u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = u(rng);
        double brute = 0.0; // ordered pairs
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) brute += std::fabs(x[i] - x[j]);
        CHECK(kernels::pairwise_abs_diff(1.0).evaluate(x) ==
              doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("identity ratio T = S_n") {
    for (const auto& d : {DistributionSpec::gamma(0.5, 1.0), DistributionSpec::pareto(3.0, 1.0),
                          DistributionSpec::lognormal(0.0, 0.5)}) {
        RatioStatistic stat{kernels::sum_power(1), 1.0, 0.0};
        const auto m = expected_ratio_iid(d, 4, stat);
        CHECK(m.value == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.converged);
    }
}

TEST_CASE("T = X1 gives 1/n by exchangeability") {
    RatioStatistic stat{kernels::first_component(), 1.0, 0.0};
    const auto m = expected_ratio_iid(DistributionSpec::gamma(2.0, 1.0), 5, stat);
    CHECK(m.value == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("sum of squares over squared sum, Exponential(1), n=4") {
    // E[sum Xi^2 / (sum Xi)^2] = 2/(n+1) for exponential samples
    RatioStatistic stat{kernels::sum_of_powers(2), 2.0, 0.0};
    const auto m = expected_ratio_iid(DistributionSpec::exponential(1.0), 4, stat);
    CHECK(m.value == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("independent non-identical components") {
    RatioStatistic sum{kernels::sum_power(1), 1.0, 0.0};
    RatioStatistic first{kernels::first_component(), 1.0, 0.0};

    const auto pm = expected_ratio_independent(
        {DistributionSpec::point_mass(1.0), DistributionSpec::point_mass(1.0)}, sum);
    CHECK(pm.value == doctest::Approx(1.0).epsilon(1e-9));

    const auto iid = expected_ratio_independent(
        {DistributionSpec::exponential(1.0), DistributionSpec::exponential(1.0)}, first);
    CHECK(iid.value == doctest::Approx(0.5).epsilon(1e-9));

    // X1 ~ Gamma(1), X2 ~ Gamma(2): X1/(X1+X2) is Beta(1,2) with mean 1/3
    const auto beta = expected_ratio_independent(
        {DistributionSpec::gamma(1.0, 1.0), DistributionSpec::gamma(2.0, 1.0)}, first);
    CHECK(beta.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    CHECK_THROWS_AS(expected_ratio_independent({}, sum), ConfigError);
}

TEST_CASE("sanity identity suite") {
    for (const auto& c : sanity_identity_suite(DistributionSpec::gamma(0.5, 1.0), 2, 2))
        CHECK(c.pass);
    for (const auto& c : sanity_identity_suite(DistributionSpec::pareto(3.0, 1.0), 5, 1))
        CHECK(c.pass);

    // Poisson(2), n=3, k=1, r=0: E[S 1{S>0}/S] = 1 - P(S=0) = 1 - e^{-6}
    RatioStatistic stat{kernels::sum_power(1), 1.0, 0.0};
    const auto m = expected_ratio_iid(DistributionSpec::poisson(2.0), 3, stat);
    CHECK(m.value == doctest::Approx(1.0 - std::exp(-6.0)).epsilon(1e-9));
}

TEST_CASE("atom term moves linearly in r for Bernoulli") {
    const DistributionSpec d = DistributionSpec::bernoulli(0.3);
    const std::int64_t n = 4;
    RatioStatistic s1{kernels::pairwise_abs_diff(1.0), 1.0, 0.2};
    RatioStatistic s2{kernels::pairwise_abs_diff(1.0), 1.0, 0.9};
    const double delta =
        expected_ratio_iid(d, n, s2).value - expected_ratio_iid(d, n, s1).value;
    CHECK(delta == doctest::Approx(0.7 * std::pow(0.7, 4.0)).epsilon(1e-10));
}

TEST_CASE("scale invariance of dimensionless kernels") {
    RatioStatistic gini{kernels::pairwise_abs_diff(1.0), 1.0, 0.0};
    RatioStatistic scv{kernels::pairwise_sq_diff(1.0), 2.0, 0.0};
    const auto a1 = expected_ratio_iid(DistributionSpec::gamma(2.0, 1.0), 5, gini);
    const auto a2 = expected_ratio_iid(DistributionSpec::gamma(2.0, 7.0), 5, gini);
    CHECK(a1.value == doctest::Approx(a2.value).epsilon(2e-10));
    const auto b1 = expected_ratio_iid(DistributionSpec::pareto(3.0, 1.0), 4, scv);
    const auto b2 = expected_ratio_iid(DistributionSpec::pareto(3.0, 5.0), 4, scv);
    CHECK(b1.value == doctest::Approx(b2.value).epsilon(2e-9));
}

TEST_CASE("n=1 with a pairwise kernel is the atom term alone") {
    RatioStatistic stat{kernels::pairwise_abs_diff(1.0), 1.0, 0.4};
    const auto m = expected_ratio_iid(DistributionSpec::bernoulli(0.3), 1, stat);
    CHECK(m.value == doctest::Approx(0.4 * 0.7));
    CHECK(m.converged);
}

TEST_CASE("evaluation counts do not grow with n") {
    RatioStatistic stat{kernels::pairwise_abs_diff(1.0), 1.0, 0.0};
    const auto e2 = expected_ratio_iid(DistributionSpec::gamma(1.0, 1.0), 2, stat);
    const auto e20 = expected_ratio_iid(DistributionSpec::gamma(1.0, 1.0), 20, stat);
    const auto e200 = expected_ratio_iid(DistributionSpec::gamma(1.0, 1.0), 200, stat);
    CHECK(e20.evaluations < 2 * e2.evaluations);
    CHECK(e200.evaluations < 2 * e2.evaluations);
}

TEST_CASE("statistic validation") {
    CHECK_THROWS_AS((RatioStatistic{kernels::sum_power(1), -1.0, 0.0}.validate()), ConfigError);
    RatioStatistic stat{kernels::sum_power(2), 2.0, 0.0};
    CHECK_NOTHROW(stat.validate());
}
