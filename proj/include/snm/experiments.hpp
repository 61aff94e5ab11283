#pragma once

// Experiment runners behind the CLI subcommands: parameter sweeps of the
// expectation / variance engines written as CSV (optionally with SVG charts)
// and the Pareto debiasing replication experiment.

#include <cstdint>

#include "snm/estimators.hpp"
#include "snm/io/csv.hpp"
#include "snm/io/svg.hpp"
#include "snm/oracle.hpp"

namespace snm {

enum class OutputFormat { csv, json, svg_csv };

inline OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "svg+csv") return OutputFormat::svg_csv;
    throw ConfigError("unknown format: " + s + " (expected csv, json or svg+csv)");
}

struct ParamGrid {
    double start = 0.0, stop = 0.0, step = 0.0;

    // "A:B:STEP"
    static ParamGrid parse(const std::string& text) {
        ParamGrid g;
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ConfigError("grid must be START:STOP:STEP, got: " + text);
        try {
            g.start = std::stod(text.substr(0, c1));
            g.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
            g.step = std::stod(text.substr(c2 + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad grid: " + text);
        }
        g.validate();
        return g;
    }

    void validate() const {
        if (!(step > 0.0)) throw ConfigError("grid step must be > 0");
        if (stop < start) throw ConfigError("grid stop must be >= start");
    }

    std::vector<double> values() const {
        std::vector<double> out;
        for (std::int64_t i = 0;; ++i) {
            const double v = start + double(i) * step;
            if (v > stop + 0.5 * step) break;
            out.push_back(std::min(v, stop));
        }
        return out;
    }
};

struct ExperimentConfig {
    std::string dist = "pareto(shape=2)";
    Stat stat = Stat::gini;
    std::vector<std::int64_t> n_list = {3, 5, 10, 20};
    ParamGrid grid{1.1, 3.0, 0.1};
    double r = 0.0;
    std::int64_t replications = 100000;
    std::uint64_t seed = 1;
    QuadratureConfig quad;
    std::string out = "out";
    OutputFormat format = OutputFormat::csv;

    void validate() const {
        grid.validate();
        if (n_list.empty()) throw ConfigError("n list must be non-empty");
        for (auto n : n_list)
            if (n < 2) throw ConfigError("pairwise statistics require n >= 2");
        if (replications < 1) throw ConfigError("replications must be >= 1");
        quad.validate();
    }
};

namespace detail {

// template dist with its first parameter replaced by the grid value
inline DistributionSpec with_param(const DistributionSpec& tmpl, double param) {
    switch (tmpl.family()) {
        case Family::Gamma: return DistributionSpec::gamma(param, tmpl.param2());
        case Family::Exponential: return DistributionSpec::exponential(param);
        case Family::Pareto: return DistributionSpec::pareto(param, tmpl.param2());
        case Family::Poisson: return DistributionSpec::poisson(param);
        case Family::Bernoulli: return DistributionSpec::bernoulli(param);
        case Family::NegativeBinomial:
            return DistributionSpec::negative_binomial(param, tmpl.param2());
        case Family::Lognormal: return DistributionSpec::lognormal(param, tmpl.param2());
        case Family::InverseGaussian:
            return DistributionSpec::inverse_gaussian(param, tmpl.param2());
        case Family::PointMass: return DistributionSpec::point_mass(param);
    }
    throw DomainError("bad family");
}

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Gamma: return "gamma";
        case Family::Exponential: return "exponential";
        case Family::Pareto: return "pareto";
        case Family::Poisson: return "poisson";
        case Family::Bernoulli: return "bernoulli";
        case Family::NegativeBinomial: return "negative_binomial";
        case Family::Lognormal: return "lognormal";
        case Family::InverseGaussian: return "inverse_gaussian";
        case Family::PointMass: return "pointmass";
    }
    return "?";
}

inline StatMomentReport stat_expectation(const DistributionSpec& d, std::int64_t n, Stat stat,
                                         double r, const QuadratureConfig& quad) {
    switch (stat) {
        case Stat::gini: return gini_expectation(d, n, r, quad);
        case Stat::scv: return scv_expectation(d, n, r, quad);
        case Stat::theil: {
            const TheilReport t = theil_expectation(d, n, r, quad);
            StatMomentReport out;
            out.expected = t.expected;
            out.population_value = t.population_value;
            out.ratio = t.ratio;
            out.atom_term = t.atom_term;
            out.quadrature_error = t.quadrature_error;
            out.converged = t.converged;
            out.evaluations = t.evaluations;
            return out;
        }
    }
    throw DomainError("bad stat");
}

inline std::string nan_cell() { return "nan"; }

} // namespace detail

// Expectation sweep over the parameter grid: one row per (param, n) with the
// population value, the engine expectation and the ratio.  Non-convergent or
// inapplicable points are recorded in-row and never abort the sweep.
inline io::CsvWriter bias_curve_table(const ExperimentConfig& cfg) {
    cfg.validate();
    const DistributionSpec tmpl = DistributionSpec::parse(cfg.dist);
    io::CsvWriter csv({"family", "param", "n", "population_value", "expected_value",
                       "ratio_R", "quad_error", "converged"});
    for (std::int64_t n : cfg.n_list) {
        for (double param : cfg.grid.values()) {
            csv.cell(detail::family_name(tmpl.family())).cell(param).cell(n);
            try {
                const DistributionSpec d = detail::with_param(tmpl, param);
                const StatMomentReport rep =
                    detail::stat_expectation(d, n, cfg.stat, cfg.r, cfg.quad);
                csv.cell(rep.population_value)
                    .cell(rep.expected)
                    .cell(rep.ratio)
                    .cell(rep.quadrature_error)
                    .cell(rep.converged);
            } catch (const SnmError&) {
                csv.cell(detail::nan_cell())
                    .cell(detail::nan_cell())
                    .cell(detail::nan_cell())
                    .cell(detail::nan_cell())
                    .cell(false);
            }
            csv.end_row();
        }
    }
    return csv;
}

// Gini variance sweep (second moment minus squared expectation).
inline io::CsvWriter variance_curve_table(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.stat != Stat::gini)
        throw CapabilityError("variance-curve implements the Gini second moment only");
    const DistributionSpec tmpl = DistributionSpec::parse(cfg.dist);
    io::CsvWriter csv({"family", "param", "n", "expected_value", "second_moment", "variance",
                       "quad_error", "converged"});
    for (std::int64_t n : cfg.n_list) {
        for (double param : cfg.grid.values()) {
            csv.cell(detail::family_name(tmpl.family())).cell(param).cell(n);
            try {
                const DistributionSpec d = detail::with_param(tmpl, param);
                const SecondMomentReport rep = gini_second_moment(d, n, cfg.r, cfg.quad);
                csv.cell(rep.expected)
                    .cell(rep.second_moment)
                    .cell(rep.variance)
                    .cell(rep.quadrature_error)
                    .cell(rep.converged);
            } catch (const SnmError&) {
                csv.cell(detail::nan_cell())
                    .cell(detail::nan_cell())
                    .cell(detail::nan_cell())
                    .cell(detail::nan_cell())
                    .cell(false);
            }
            csv.end_row();
        }
    }
    return csv;
}

// SCV expectation sweep (same schema as the bias curve).
inline io::CsvWriter scv_curve_table(ExperimentConfig cfg) {
    cfg.stat = Stat::scv;
    return bias_curve_table(cfg);
}

// One replication experiment row: empirical bias of a method at (alpha, n).
struct DebiasRow {
    double alpha = 0.0;
    std::int64_t n = 0;
    GiniMethod method = GiniMethod::plain;
    double bias = 0.0;
    double abs_bias = 0.0;
    double std_error = 0.0;
};

// Empirical bias of the five Gini estimators over Pareto(alpha, 1) samples.
// The Pareto bias curve for each n is precomputed once so the debiased
// methods only pay for interpolation inside the replication loop.
inline std::vector<DebiasRow> debias_experiment_rows(const std::vector<double>& alphas,
                                                     std::int64_t n,
                                                     std::int64_t replications,
                                                     std::uint64_t seed,
                                                     const QuadratureConfig& quad = {}) {
    if (n < 2) throw ConfigError("debias experiment requires n >= 2");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    bias_function(Family::Pareto, 2.0, n, quad); // warm the per-n grid

    static constexpr GiniMethod kMethods[] = {GiniMethod::plain, GiniMethod::mle_debiased,
                                              GiniMethod::mom_debiased, GiniMethod::mle_plugin,
                                              GiniMethod::mom_plugin};
    std::vector<DebiasRow> rows;
    for (double a : alphas) {
        const DistributionSpec d = DistributionSpec::pareto(a, 1.0);
        const double G = 1.0 / (2.0 * a - 1.0);
        MeanAccumulator acc[5];
        auto rng = make_stream(seed, std::uint64_t(std::llround(a * 1e6)));
        std::vector<double> x(n);
        for (std::int64_t rep = 0; rep < replications; ++rep) {
            for (auto& v : x) v = d.sample_one(rng);
            for (int m = 0; m < 5; ++m)
                acc[m].add(debiased_gini(x, kMethods[m], 0.0, quad).value);
        }
        for (int m = 0; m < 5; ++m) {
            DebiasRow row;
            row.alpha = a;
            row.n = n;
            row.method = kMethods[m];
            row.bias = acc[m].mean() - G;
            row.abs_bias = std::fabs(row.bias);
            row.std_error = acc[m].std_error();
            rows.push_back(row);
        }
    }
    return rows;
}

inline io::CsvWriter debias_experiment_table(const ExperimentConfig& cfg) {
    cfg.validate();
    const DistributionSpec tmpl = DistributionSpec::parse(cfg.dist);
    if (tmpl.family() != Family::Pareto)
        throw ConfigError("debias-experiment requires a pareto distribution");
    io::CsvWriter csv({"alpha", "n", "method", "bias", "abs_bias", "std_error"});
    for (std::int64_t n : cfg.n_list) {
        const auto rows =
            debias_experiment_rows(cfg.grid.values(), n, cfg.replications, cfg.seed, cfg.quad);
        for (const auto& row : rows)
            csv.cell(row.alpha)
                .cell(row.n)
                .cell(to_string(row.method))
                .cell(row.bias)
                .cell(row.abs_bias)
                .cell(row.std_error)
                .end_row();
    }
    return csv;
}

} // namespace snm
