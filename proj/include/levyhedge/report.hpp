#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace levyhedge::report {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Column-oriented result of a command; rendered as CSV or JSON records.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Shortest round-trip scientific form, independent of the C locale.
inline std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    return std::string(buf, r.ptr);
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string format_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_real(v);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return csv_field(v);
        },
        c);
}

/// Header row always present, even for an empty table.
inline void write_csv(std::ostream& os, const Table& t)
{
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << csv_field(t.columns[j]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_cell(row[j]);
        os << '\n';
    }
}

inline nlohmann::ordered_json to_json(const Table& t)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (std::size_t j = 0; j < row.size() && j < t.columns.size(); ++j) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) rec[t.columns[j]] = v;
                        else rec[t.columns[j]] = format_real(v);  // JSON has no inf or nan
                    } else {
                        rec[t.columns[j]] = v;
                    }
                },
                row[j]);
        }
        arr.push_back(std::move(rec));
    }
    return arr;
}

inline void write_json(std::ostream& os, const Table& t) { os << to_json(t).dump(2) << '\n'; }

inline void write(std::ostream& os, const Table& t, const std::string& format)
{
    if (format == "json") write_json(os, t);
    else write_csv(os, t);
}

} // namespace levyhedge::report
