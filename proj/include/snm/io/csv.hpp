#pragma once

// CSV emission and parsing for the experiment runners.  Floats are written
// with the shortest representation that round-trips to the same double, so
// files are stable, full precision, and locale independent.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "snm/errors.hpp"

namespace snm::io {

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvWriter& cell(const std::string& s) {
        row_.push_back(s);
        return *this;
    }
    CsvWriter& cell(const char* s) { return cell(std::string(s)); }
    CsvWriter& cell(double v) { return cell(format_double(v)); }
    CsvWriter& cell(std::int64_t v) { return cell(std::to_string(v)); }
    CsvWriter& cell(bool v) { return cell(std::string(v ? "true" : "false")); }

    void end_row() {
        if (row_.size() != header_.size())
            throw ConfigError("csv row width does not match header");
        rows_.push_back(std::move(row_));
        row_.clear();
    }

    std::string str() const {
        std::ostringstream os;
        write_line(os, header_);
        for (const auto& r : rows_) write_line(os, r);
        return os.str();
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write file: " + path);
        out << str();
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::string> row_;
    std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ConfigError("csv column not found: " + name);
    }

    double number(std::size_t row, std::size_t col) const {
        const std::string& s = rows.at(row).at(col);
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{}) throw ConfigError("non-numeric csv cell: " + s);
        return v;
    }

    static CsvTable parse(const std::string& text) {
        CsvTable t;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ls(line);
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            if (line.back() == ',') cells.emplace_back();
            if (t.header.empty())
                t.header = std::move(cells);
            else
                t.rows.push_back(std::move(cells));
        }
        if (t.header.empty()) throw ConfigError("empty csv");
        return t;
    }

    static CsvTable load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open file: " + path);
        std::ostringstream os;
        os << in.rdbuf();
        return parse(os.str());
    }
};

} // namespace snm::io
