#pragma once

// Dependency-free SVG line charts rendered directly from a parsed CSV table.
// The output is a pure function of the table contents and the chart spec, so
// regenerating from the same CSV is byte-identical.

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "snm/io/csv.hpp"

namespace snm::io {

struct ChartSpec {
    std::string title;
    std::string x_column;
    std::string y_column;
    std::string series_column; // one polyline per distinct value; may be empty
    std::string x_label;       // defaults to x_column
    std::string y_label;       // defaults to y_column
};

namespace detail {

inline const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

// tick step of the form {1,2,5}*10^k giving 4-8 ticks over the span
inline double tick_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac < 1.5) return mag;
    if (frac < 3.5) return 2.0 * mag;
    if (frac < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

inline std::string format_tick(double v) {
    // trim float noise in tick labels
    const double r = std::round(v * 1e9) / 1e9;
    return format_double(r == 0.0 ? 0.0 : r);
}

} // namespace detail

inline std::string line_chart_svg(const CsvTable& table, const ChartSpec& spec) {
    const std::size_t xc = table.column(spec.x_column);
    const std::size_t yc = table.column(spec.y_column);
    const bool grouped = !spec.series_column.empty();
    const std::size_t sc = grouped ? table.column(spec.series_column) : 0;

    // collect series in first-appearance order, skipping non-numeric cells
    std::vector<std::string> names;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        double x, y;
        try {
            x = table.number(i, xc);
            y = table.number(i, yc);
        } catch (const ConfigError&) {
            continue;
        }
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        const std::string key = grouped ? table.rows[i][sc] : std::string("series");
        if (series.find(key) == series.end()) names.push_back(key);
        series[key].emplace_back(x, y);
    }
    if (names.empty()) throw ConfigError("no plottable rows for chart '" + spec.title + "'");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [k, pts] : series)
        for (const auto& [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
    const double pw = W - L - R, ph = H - T - B;
    auto px = [&](double x) { return L + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return T + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << L + pw / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\""
       << " text-anchor=\"middle\">" << spec.title << "</text>\n";

    // axes box
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

    // ticks + grid
    const double xs = detail::tick_step(xmax - xmin);
    for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-12 * xs; t += xs) {
        const double X = px(t);
        os << "<line x1=\"" << X << "\" y1=\"" << T << "\" x2=\"" << X << "\" y2=\"" << T + ph
           << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
        os << "<text x=\"" << X << "\" y=\"" << T + ph + 18
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
           << detail::format_tick(t) << "</text>\n";
    }
    const double ys = detail::tick_step(ymax - ymin);
    for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-12 * ys; t += ys) {
        const double Y = py(t);
        os << "<line x1=\"" << L << "\" y1=\"" << Y << "\" x2=\"" << L + pw << "\" y2=\"" << Y
           << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
        os << "<text x=\"" << L - 8 << "\" y=\"" << Y + 4
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
           << detail::format_tick(t) << "</text>\n";
    }

    // axis labels
    os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
       << (spec.x_label.empty() ? spec.x_column : spec.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << T + ph / 2
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\""
       << " transform=\"rotate(-90 18 " << T + ph / 2 << ")\">"
       << (spec.y_label.empty() ? spec.y_column : spec.y_label) << "</text>\n";

    // series
    for (std::size_t s = 0; s < names.size(); ++s) {
        auto pts = series[names[s]];
        std::sort(pts.begin(), pts.end());
        const char* color = detail::kPalette[s % 8];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) os << ' ';
            os << format_double(std::round(px(pts[i].first) * 100.0) / 100.0) << ','
               << format_double(std::round(py(pts[i].second) * 100.0) / 100.0);
        }
        os << "\"/>\n";
        // legend entry
        const double ly = T + 14 + 18.0 * double(s);
        os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 34
           << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << W - R + 40 << "\" y=\"" << ly + 4
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << names[s] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << text;
}

} // namespace snm::io
