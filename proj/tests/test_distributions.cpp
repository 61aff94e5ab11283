#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snm/distributions.hpp"
#include "snm/quadrature.hpp"
#include "snm/rng.hpp"

using namespace snm;

namespace {

std::vector<DistributionSpec> catalog() {
    return {DistributionSpec::gamma(2.0, 1.0),
            DistributionSpec::gamma(0.5, 2.0),
            DistributionSpec::exponential(1.3),
            DistributionSpec::pareto(2.0, 1.0),
            DistributionSpec::poisson(1.5),
            DistributionSpec::bernoulli(0.3),
            DistributionSpec::negative_binomial(2.0, 0.4),
            DistributionSpec::lognormal(0.0, 1.0),
            DistributionSpec::inverse_gaussian(1.0, 1.0)};
}

} // namespace

TEST_CASE("laplace transform reference values") {
    CHECK(DistributionSpec::gamma(2.0, 1.0).laplace(1.0) == doctest::Approx(0.25));
    for (const auto& d : catalog()) CHECK(d.laplace(0.0) == doctest::Approx(1.0));

    // Pareto(2,1): direct quadrature of the defining integral at lambda=1
    auto f = [](double x) { return std::exp(-x - 1.0) * 2.0 * std::pow(1.0 + x, -3.0); };
    const double want = integrate_semi_infinite(f).value;
    CHECK(DistributionSpec::pareto(2.0, 1.0).laplace(1.0) ==
          doctest::Approx(want).epsilon(1e-9));

    CHECK_THROWS_AS(DistributionSpec::gamma(2.0, 1.0).laplace(-0.1), DomainError);
}

TEST_CASE("zero mass") {
    CHECK(DistributionSpec::bernoulli(0.3).zero_mass() == doctest::Approx(0.7));
    CHECK(DistributionSpec::gamma(2.0, 1.0).zero_mass() == 0.0);
    CHECK(DistributionSpec::poisson(1.0).zero_mass() == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("laplace transform is decreasing and convex with limit zero_mass") {
    for (const auto& d : catalog()) {
        double prev = 1.0, prev_diff = 0.0;
        bool first = true;
        for (double lam = 0.25; lam <= 12.0; lam += 0.25) {
            const double v = d.laplace(lam);
            CHECK(v <= prev + 1e-12);
            const double diff = v - prev; // successive slopes must increase (convexity)
            if (!first) CHECK(diff >= prev_diff - 1e-9);
            prev = v;
            prev_diff = diff;
            first = false;
        }
        // limit is zero_mass; polynomial-in-lambda families converge slowly,
        // so allow a small absolute gap at a very large tilt
        CHECK(d.laplace(1e9) == doctest::Approx(d.zero_mass()).epsilon(1e-9).scale(1e6));
    }
}

TEST_CASE("tilted mean matches the log-derivative of the Laplace transform") {
    for (const auto& d : catalog()) {
        for (double lam : {0.1, 1.0, 5.0}) {
            const double h = 1e-5 * std::max(1.0, lam);
            const double dL = (d.laplace(lam + h) - d.laplace(lam - h)) / (2.0 * h);
            const double want = -dL / d.laplace(lam);
            const double got = TiltedView(d, lam).mean();
            if (want > 1e-12)
                CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("tilted views at lambda=0 reproduce the base law") {
    for (const auto& d : catalog()) {
        TiltedView v(d, 0.0);
        CHECK(v.mean() == doctest::Approx(d.mean()).epsilon(1e-9));
        CHECK(v.gmd() == doctest::Approx(d.gmd()).epsilon(1e-7));
        CHECK(v.moment(0) == doctest::Approx(1.0));
    }
}

TEST_CASE("closed-form tilts") {
    // Gamma(2,1) tilted by 1 is Gamma(2, 1/2): mean 1
    CHECK(TiltedView(DistributionSpec::gamma(2.0, 1.0), 1.0).mean() == doctest::Approx(1.0));

    const auto tg = TiltedView(DistributionSpec::gamma(3.0, 2.0), 0.5).closed_form();
    REQUIRE(tg.has_value());
    CHECK(*tg == DistributionSpec::gamma(3.0, 1.0));

    const auto tp = TiltedView(DistributionSpec::poisson(2.0), 1.0).closed_form();
    REQUIRE(tp.has_value());
    CHECK(tp->mean() == doctest::Approx(2.0 * std::exp(-1.0)));

    // Poisson tilted mean equals mu e^{-lambda} (checked against L as well above)
    CHECK(TiltedView(DistributionSpec::poisson(1.5), 0.7).mean() ==
          doctest::Approx(1.5 * std::exp(-0.7)));

    // no closed form for Pareto or lognormal
    CHECK_FALSE(TiltedView(DistributionSpec::pareto(2.0, 1.0), 1.0).closed_form().has_value());
    CHECK_FALSE(
        TiltedView(DistributionSpec::lognormal(0.0, 1.0), 1.0).closed_form().has_value());
}

TEST_CASE("gmd scaling factor") {
    CHECK(gmd_scaling_g(DistributionSpec::gamma(2.0, 1.0), 3.0) == doctest::Approx(0.25));
    for (const auto& d : catalog())
        if (d.gmd() > 0.0) CHECK(gmd_scaling_g(d, 0.0) == doctest::Approx(1.0).epsilon(1e-7));
    // tilted Bernoulli(0.5) at lambda=log 3 has q=0.25: ratio of 2q(1-q) values
    CHECK(gmd_scaling_g(DistributionSpec::bernoulli(0.5), std::log(3.0)) ==
          doctest::Approx(0.75).epsilon(1e-9));
    CHECK_THROWS_AS(gmd_scaling_g(DistributionSpec::point_mass(1.0), 1.0), DomainError);
}

TEST_CASE("Gamma generic tilted-GMD path matches the closed scaling") {
    const DistributionSpec d = DistributionSpec::gamma(1.7, 1.0);
    for (double lam : {0.3, 2.0}) {
        // generic single-integral identity GMD = 2 int F(1-F) dx on the tilted law
        const auto tilted = *TiltedView(d, lam).closed_form();
        auto f = [&](double x) {
            const double F = tilted.cdf(x);
            return 2.0 * F * (1.0 - F);
        };
        const double generic = integrate_semi_infinite(f).value;
        CHECK(TiltedView(d, lam).gmd() == doctest::Approx(generic).epsilon(1e-8));
        CHECK(TiltedView(d, lam).gmd() ==
              doctest::Approx(d.gmd() / (1.0 + lam)).epsilon(1e-8));
    }
}

TEST_CASE("population statistics") {
    CHECK(DistributionSpec::gamma(1.0, 1.0).population_stat(Stat::gini) ==
          doctest::Approx(0.5));
    CHECK(DistributionSpec::pareto(2.0, 1.0).population_stat(Stat::gini) ==
          doctest::Approx(1.0 / 3.0));
    CHECK(DistributionSpec::point_mass(3.0).population_stat(Stat::gini) ==
          doctest::Approx(0.0));
    CHECK(DistributionSpec::gamma(2.0, 1.0).population_stat(Stat::scv) ==
          doctest::Approx(0.5));
    // SCV requires finite variance: Pareto shape <= 2 must refuse
    CHECK_THROWS_AS(DistributionSpec::pareto(2.0, 1.0).population_stat(Stat::scv),
                    CapabilityError);
}

TEST_CASE("moment set invariants") {
    for (const auto& d :
         {DistributionSpec::gamma(0.5, 1.0), DistributionSpec::exponential(1.0),
          DistributionSpec::pareto(3.0, 1.0)}) {
        const TiltedView v(d, 0.5);
        const auto m = tilted_moments(
            v, {MomentKind::mean, MomentKind::variance, MomentKind::gmd, MomentKind::xi1});
        CHECK(m.xi0 == m.gmd * m.gmd);
        CHECK(m.xi2 == 2.0 * m.variance);
        CHECK(m.xi1 >= 0.0);
        CHECK(m.xi1 * m.xi1 <= m.xi2 * m.xi0 + 6.0 * m.xi1_std_error + 1e-9);
    }
}

TEST_CASE("sampling") {
    const auto pm = DistributionSpec::point_mass(2.0).sample(3, 11);
    CHECK(pm == std::vector<double>{2.0, 2.0, 2.0});
    const auto b1 = DistributionSpec::bernoulli(1.0).sample(4, 5);
    CHECK(b1 == std::vector<double>{1.0, 1.0, 1.0, 1.0});

    MeanAccumulator acc;
    const DistributionSpec g = DistributionSpec::gamma(2.0, 1.0);
    auto r2 = make_stream(99);
    for (int i = 0; i < 1000000; ++i) acc.add(g.sample_one(r2));
    CHECK(std::fabs(acc.mean() - 2.0) < 4.0 * std::sqrt(2.0) / 1000.0);

    // determinism
    CHECK(g.sample(5, 123) == g.sample(5, 123));
}

TEST_CASE("text form round trip and parse errors") {
    for (const auto& d : catalog()) {
        CHECK(DistributionSpec::parse(d.to_string()) == d);
    }
    CHECK(DistributionSpec::parse("gamma(2)") == DistributionSpec::gamma(2.0, 1.0));
    CHECK(DistributionSpec::parse("pareto(shape=2)") == DistributionSpec::pareto(2.0, 1.0));
    CHECK_THROWS_AS(DistributionSpec::parse("cauchy(1)"), ConfigError);
    CHECK_THROWS_AS(DistributionSpec::parse("gamma(shape=oops)"), ConfigError);
    CHECK_THROWS_AS(DistributionSpec::gamma(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(DistributionSpec::pareto(1.0, 1.0), DomainError); // needs shape > 1
}
