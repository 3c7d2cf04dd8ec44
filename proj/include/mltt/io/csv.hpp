// Copyright 2026 The mltt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mltt/errors.hpp"

namespace mltt {

/// One CSV field. Numbers use the shortest round-trip form; absent numbers
/// are written as "NA".
struct CsvCell {
    std::string text;

    CsvCell(double v) : text(format(v)) {}
    CsvCell(std::optional<double> v) : text(v ? format(*v) : "NA") {}
    CsvCell(std::string s) : text(std::move(s)) {}
    CsvCell(const char* s) : text(s) {}

    static std::string format(double v) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, p);
    }
};

/// Comma-separated table with a header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<CsvCell>>& rows() const noexcept { return rows_; }

    void add(std::vector<CsvCell> row) {
        if (row.size() != header_.size())
            throw DimensionError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                 std::to_string(header_.size()));
        rows_.push_back(std::move(row));
    }

    std::string str() const {
        std::string out;
        for (std::size_t c = 0; c < header_.size(); ++c) out += (c ? "," : "") + header_[c];
        out += '\n';
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c].text;
            out += '\n';
        }
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot open " + path + " for writing");
        out << str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<CsvCell>> rows_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::optional<double> parse_double(const std::string& s) {
    double v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) return std::nullopt;
    return v;
}

}  // namespace detail

/// One-column numeric signal. Blank lines and '#' comments are skipped; a
/// single non-numeric first line is taken as a header. Only the first column
/// of a multi-column row is used.
inline std::vector<double> parse_signal_csv(const std::string& text) {
    std::istringstream in(text);
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0, offset = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t here = offset;
        offset += line.size() + 1;
        auto cell = detail::trim(line.substr(0, line.find(',')));
        if (cell.empty() || cell[0] == '#') continue;
        auto v = detail::parse_double(cell);
        if (!v) {
            if (first) {
                first = false;
                continue;
            }
            throw FormatError("line " + std::to_string(lineno) + ": not a number: '" + cell + "'", here);
        }
        first = false;
        out.push_back(*v);
    }
    return out;
}

inline std::vector<double> read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path, 0);
    std::ostringstream s;
    s << in.rdbuf();
    return parse_signal_csv(s.str());
}

inline void write_signal_csv(const std::string& path, const std::vector<double>& v, const std::string& name = "value") {
    CsvTable t({name});
    for (auto x : v) t.add({x});
    t.write(path);
}

}  // namespace mltt
