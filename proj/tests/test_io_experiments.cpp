#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snm/experiments.hpp"

using namespace snm;

TEST_CASE("shortest round-trip float formatting") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(io::format_double(1e300) == "1e+300");
    for (double v : {0.1, 2.0 / 7.0, 1.2345678901234567e-8, 42.0}) {
        const std::string s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("csv write, parse and round trip") {
    io::CsvWriter w({"a", "b", "c"});
    w.cell(1.5).cell(std::int64_t(7)).cell("x").end_row();
    w.cell(2.0 / 3.0).cell(std::int64_t(-1)).cell(true).end_row();
    const std::string text = w.str();
    const auto t = io::CsvTable::parse(text);
    CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
    CHECK(t.rows.size() == 2);
    CHECK(t.number(0, t.column("a")) == 1.5);
    CHECK(t.number(1, 0) == 2.0 / 3.0);
    CHECK(t.rows[1][2] == "true");
    CHECK_THROWS_AS(t.column("missing"), ConfigError);
    CHECK_THROWS_AS(t.number(0, 2), ConfigError);

    io::CsvWriter bad({"a", "b"});
    bad.cell(1.0);
    CHECK_THROWS_AS(bad.end_row(), ConfigError);
}

TEST_CASE("svg chart is a pure function of the csv") {
    io::CsvWriter w({"x", "y", "g"});
    for (int g = 0; g < 2; ++g)
        for (int i = 0; i <= 4; ++i)
            w.cell(double(i)).cell(std::sin(i + g)).cell(std::int64_t(g)).end_row();
    const auto t = io::CsvTable::parse(w.str());
    io::ChartSpec spec{"demo", "x", "y", "g", "", ""};
    const std::string s1 = io::line_chart_svg(t, spec);
    const std::string s2 = io::line_chart_svg(io::CsvTable::parse(w.str()), spec);
    CHECK(s1 == s2);
    CHECK(s1.find("<svg") == 0);
    CHECK(s1.find("polyline") != std::string::npos);
    CHECK(s1.find("demo") != std::string::npos);
    // two series, two legend entries
    CHECK(s1.find("#1f77b4") != std::string::npos);
    CHECK(s1.find("#d62728") != std::string::npos);
}

TEST_CASE("svg skips non-numeric rows instead of failing") {
    io::CsvWriter w({"x", "y"});
    w.cell(1.0).cell(2.0).end_row();
    w.cell("nan").cell("nan").end_row();
    w.cell(2.0).cell(3.0).end_row();
    const auto t = io::CsvTable::parse(w.str());
    CHECK_NOTHROW(io::line_chart_svg(t, {"t", "x", "y", "", "", ""}));
}

TEST_CASE("parameter grid parsing") {
    const auto g = ParamGrid::parse("1.1:3.0:0.1");
    CHECK(g.values().size() == 20);
    CHECK(g.values().front() == doctest::Approx(1.1));
    CHECK(g.values().back() == doctest::Approx(3.0));
    CHECK_THROWS_AS(ParamGrid::parse("1:2"), ConfigError);
    CHECK_THROWS_AS(ParamGrid::parse("2:1:0.5"), ConfigError);
    CHECK_THROWS_AS(ParamGrid::parse("1:2:0"), ConfigError);
    CHECK_THROWS_AS(output_format_from_string("yaml"), ConfigError);
}

TEST_CASE("bias curve sweep") {
    ExperimentConfig cfg;
    cfg.dist = "gamma(shape=2)";
    cfg.n_list = {3};
    cfg.grid = {1.0, 2.0, 0.5};
    const auto t = io::CsvTable::parse(bias_curve_table(cfg).str());
    CHECK(t.rows.size() == 3);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(t.number(i, t.column("ratio_R")) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(t.rows[i][t.column("converged")] == "true");
    }
}

TEST_CASE("pointmass rows are zero") {
    ExperimentConfig cfg;
    cfg.dist = "pointmass(1)";
    cfg.n_list = {3};
    cfg.grid = {1.0, 1.0, 1.0};
    const auto t = io::CsvTable::parse(bias_curve_table(cfg).str());
    CHECK(t.number(0, t.column("population_value")) == 0.0);
    CHECK(t.number(0, t.column("expected_value")) == 0.0);
}

TEST_CASE("inapplicable grid points become nan rows, not aborts") {
    ExperimentConfig cfg;
    cfg.dist = "pareto(shape=2)";
    cfg.stat = Stat::scv; // SCV needs shape > 2: half this grid is inapplicable
    cfg.n_list = {3};
    cfg.grid = {1.5, 3.0, 0.5};
    const auto t = io::CsvTable::parse(scv_curve_table(cfg).str());
    CHECK(t.rows.size() == 4);
    CHECK(t.rows[0][t.column("expected_value")] == "nan");
    CHECK(t.rows[0][t.column("converged")] == "false");
    CHECK(t.rows[3][t.column("converged")] == "true");
    CHECK(t.number(3, t.column("expected_value")) > 0.0);
}

TEST_CASE("debias experiment rows are deterministic") {
    const auto a = debias_experiment_rows({2.0}, 5, 1000, 99);
    const auto b = debias_experiment_rows({2.0}, 5, 1000, 99);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].bias == b[i].bias);
        CHECK(a[i].std_error == b[i].std_error);
    }
    ExperimentConfig cfg;
    cfg.dist = "gamma(shape=2)";
    CHECK_THROWS_AS(debias_experiment_table(cfg), ConfigError);
}
