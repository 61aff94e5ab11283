// Command-line front end: expectation/variance sweeps, the Pareto debiasing
// experiment, engine-vs-oracle validation, and single-moment queries.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "snm/validate.hpp"

namespace {

using nlohmann::json;

snm::Stat stat_from_string(const std::string& s) {
    if (s == "gini") return snm::Stat::gini;
    if (s == "scv") return snm::Stat::scv;
    if (s == "theil") return snm::Stat::theil;
    throw snm::ConfigError("unknown stat: " + s + " (expected gini, scv or theil)");
}

std::vector<std::int64_t> parse_n_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            out.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw snm::ConfigError("bad n list entry: " + tok);
        }
    }
    if (out.empty()) throw snm::ConfigError("empty n list");
    return out;
}

// Flags the subcommands share.  Each field remembers whether the user set it
// so CLI values override the config file, which overrides defaults.
struct CliOptions {
    std::string dist, stat, n, grid, out, format, config_path;
    double r = 0.0, rel_tol = 0.0;
    std::int64_t reps = 0;
    std::uint64_t seed = 0;
    CLI::App* sub = nullptr;

    void attach(CLI::App* app) {
        sub = app;
        app->add_option("--dist", dist, "distribution, e.g. pareto(shape=2,xm=1)");
        app->add_option("--stat", stat, "statistic: gini, scv or theil");
        app->add_option("--n", n, "comma-separated sample sizes, e.g. 3,5,10,20");
        app->add_option("--grid", grid, "parameter grid START:STOP:STEP");
        app->add_option("--r", r, "fallback value at the all-zero sample");
        app->add_option("--reps", reps, "Monte Carlo replications");
        app->add_option("--seed", seed, "random seed");
        app->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
        app->add_option("--out", out, "output path prefix");
        app->add_option("--format", format, "csv, json or svg+csv");
        app->add_option("--config", config_path, "JSON config file");
    }

    bool given(const std::string& name) const { return sub && sub->count(name) > 0; }

    snm::ExperimentConfig resolve() const {
        snm::ExperimentConfig cfg;
        if (!config_path.empty()) apply_file(cfg);
        if (given("--dist")) cfg.dist = dist;
        if (given("--stat")) cfg.stat = stat_from_string(stat);
        if (given("--n")) cfg.n_list = parse_n_list(n);
        if (given("--grid")) cfg.grid = snm::ParamGrid::parse(grid);
        if (given("--r")) cfg.r = r;
        if (given("--reps")) cfg.replications = reps;
        if (given("--seed")) cfg.seed = seed;
        if (given("--rel-tol")) cfg.quad.rel_tol = rel_tol;
        if (given("--out")) cfg.out = out;
        if (given("--format")) cfg.format = snm::output_format_from_string(format);
        cfg.validate();
        return cfg;
    }

private:
    void apply_file(snm::ExperimentConfig& cfg) const {
        std::ifstream in(config_path);
        if (!in) throw snm::ConfigError("cannot open config file: " + config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw snm::ConfigError("bad config file: " + std::string(e.what()));
        }
        if (j.contains("dist")) cfg.dist = j["dist"].get<std::string>();
        if (j.contains("stat")) cfg.stat = stat_from_string(j["stat"].get<std::string>());
        if (j.contains("n")) cfg.n_list = j["n"].get<std::vector<std::int64_t>>();
        if (j.contains("grid")) cfg.grid = snm::ParamGrid::parse(j["grid"].get<std::string>());
        if (j.contains("r")) cfg.r = j["r"].get<double>();
        if (j.contains("reps")) cfg.replications = j["reps"].get<std::int64_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("rel_tol")) cfg.quad.rel_tol = j["rel_tol"].get<double>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("format"))
            cfg.format = snm::output_format_from_string(j["format"].get<std::string>());
    }
};

json table_to_json(const snm::io::CsvTable& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        json row;
        for (std::size_t c = 0; c < t.header.size(); ++c) {
            const std::string& cell = t.rows[i][c];
            try {
                row[t.header[c]] = t.number(i, c);
            } catch (const snm::ConfigError&) {
                row[t.header[c]] = cell;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

snm::io::CsvTable filter_rows(const snm::io::CsvTable& t, const std::string& column,
                              const std::string& value) {
    snm::io::CsvTable out;
    out.header = t.header;
    const std::size_t c = t.column(column);
    for (const auto& row : t.rows)
        if (row[c] == value) out.rows.push_back(row);
    return out;
}

// Writes <out>.csv / <out>.json and, for svg+csv, the given charts rendered
// from the emitted CSV so the pictures are a pure function of the file.
void emit(const snm::ExperimentConfig& cfg, const snm::io::CsvWriter& csv,
          const std::vector<std::pair<std::string, snm::io::ChartSpec>>& charts) {
    const std::string text = csv.str();
    if (cfg.format == snm::OutputFormat::json) {
        const json j = table_to_json(snm::io::CsvTable::parse(text));
        std::ofstream out(cfg.out + ".json", std::ios::binary);
        if (!out) throw snm::ConfigError("cannot write file: " + cfg.out + ".json");
        out << j.dump(2) << '\n';
        std::cout << "wrote " << cfg.out << ".json\n";
        return;
    }
    snm::io::save_text(cfg.out + ".csv", text);
    std::cout << "wrote " << cfg.out << ".csv\n";
    if (cfg.format == snm::OutputFormat::svg_csv) {
        const auto table = snm::io::CsvTable::parse(text);
        for (const auto& [suffix, spec] : charts) {
            const std::string path = cfg.out + suffix + ".svg";
            snm::io::save_text(path, snm::io::line_chart_svg(table, spec));
            std::cout << "wrote " << path << "\n";
        }
    }
}

int run_curve(const snm::ExperimentConfig& cfg, const std::string& kind) {
    snm::io::CsvWriter csv =
        kind == "variance" ? snm::variance_curve_table(cfg)
        : kind == "scv"    ? snm::scv_curve_table(cfg)
                           : snm::bias_curve_table(cfg);
    const std::string y = kind == "variance" ? "variance" : "ratio_R";
    snm::io::ChartSpec spec;
    spec.title = kind + " curve, " + cfg.dist;
    spec.x_column = "param";
    spec.y_column = y;
    spec.series_column = "n";
    emit(cfg, csv, {{"", spec}});
    return 0;
}

int run_debias(const snm::ExperimentConfig& cfg) {
    const snm::io::CsvWriter csv = snm::debias_experiment_table(cfg);
    const std::string text = csv.str();
    if (cfg.format != snm::OutputFormat::svg_csv) {
        emit(cfg, csv, {});
        return 0;
    }
    snm::io::save_text(cfg.out + ".csv", text);
    std::cout << "wrote " << cfg.out << ".csv\n";
    const auto table = snm::io::CsvTable::parse(text);
    for (std::int64_t n : cfg.n_list) {
        const auto sub = filter_rows(table, "n", std::to_string(n));
        for (const std::string y : {"bias", "abs_bias"}) {
            snm::io::ChartSpec spec;
            spec.title = y + " of Gini estimators, n=" + std::to_string(n);
            spec.x_column = "alpha";
            spec.y_column = y;
            spec.series_column = "method";
            const std::string path =
                cfg.out + "_" + y + "_n" + std::to_string(n) + ".svg";
            snm::io::save_text(path, snm::io::line_chart_svg(sub, spec));
            std::cout << "wrote " << path << "\n";
        }
    }
    return 0;
}

const char* stat_name(snm::Stat s) {
    switch (s) {
        case snm::Stat::gini: return "gini";
        case snm::Stat::scv: return "scv";
        case snm::Stat::theil: return "theil";
    }
    return "?";
}

int run_moment_cmd(const snm::ExperimentConfig& cfg) {
    const snm::DistributionSpec d = snm::DistributionSpec::parse(cfg.dist);
    if (cfg.n_list.size() != 1)
        throw snm::ConfigError("moment takes a single --n value");
    const auto rep =
        snm::detail::stat_expectation(d, cfg.n_list[0], cfg.stat, cfg.r, cfg.quad);
    json j;
    j["dist"] = d.to_string();
    j["stat"] = stat_name(cfg.stat);
    j["n"] = cfg.n_list[0];
    j["r"] = cfg.r;
    j["value"] = rep.expected;
    j["population_value"] = rep.population_value;
    j["ratio"] = rep.ratio;
    j["atom_term"] = rep.atom_term;
    j["quadrature_error"] = rep.quadrature_error;
    j["converged"] = rep.converged;
    j["evaluations"] = rep.evaluations;
    std::cout << j.dump(2) << '\n';
    return rep.converged ? 0 : 1;
}

int run_validate_cmd(bool quick, const std::string& suite) {
    snm::ValidationOptions opt;
    opt.quick = quick;
    opt.suite = suite;
    const auto rep = snm::run_validate(opt, &std::cout);
    std::size_t failed = 0;
    for (const auto& c : rep.checks())
        if (!c.pass) ++failed;
    std::cout << rep.checks().size() - failed << "/" << rep.checks().size()
              << " checks passed\n";
    return rep.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact moments of self-normalized statistics"};
    app.require_subcommand(1);

    CliOptions bias, var, scv, debias, moment;
    bias.attach(app.add_subcommand("bias-curve", "expectation sweep over a parameter grid"));
    var.attach(app.add_subcommand("variance-curve", "Gini variance sweep"));
    scv.attach(app.add_subcommand("scv-curve", "squared-coefficient-of-variation sweep"));
    debias.attach(
        app.add_subcommand("debias-experiment", "bias of five Gini estimators under Pareto"));
    moment.attach(app.add_subcommand("moment", "one engine evaluation printed as JSON"));

    auto* validate = app.add_subcommand("validate", "engine-vs-oracle acceptance suites");
    bool quick = false;
    std::string suite;
    validate->add_flag("--quick", quick, "fast subset (skips the Monte Carlo heavy suites)");
    validate->add_option("--suite", suite,
                         "run one suite: gamma-identity, gamma-unbiasedness, gamma-scv, "
                         "enumeration, pareto-bias, variance-triangle, debias-ordering, "
                         "sanity, evaluation-count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bias.sub->parsed()) return run_curve(bias.resolve(), "bias");
        if (var.sub->parsed()) return run_curve(var.resolve(), "variance");
        if (scv.sub->parsed()) return run_curve(scv.resolve(), "scv");
        if (debias.sub->parsed()) return run_debias(debias.resolve());
        if (moment.sub->parsed()) return run_moment_cmd(moment.resolve());
        if (validate->parsed()) return run_validate_cmd(quick, suite);
    } catch (const snm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const snm::SnmError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
