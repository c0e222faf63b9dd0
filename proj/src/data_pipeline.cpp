#include "lorenz_el/data_pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "lorenz_el/errors.hpp"

namespace lorenz {

std::vector<double> IncomeTable::values(const std::optional<std::string>& group) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const IncomeRow& row : rows) {
        if (!group || row.group == *group) out.push_back(row.value);
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

// "12,345,678.9" -> "12345678.9"; empty string when the grouping is malformed.
std::string strip_grouping(std::string_view s) {
    const auto dot = s.find('.');
    std::string_view integral = s.substr(0, dot);
    const std::string_view rest = dot == std::string_view::npos ? std::string_view{} : s.substr(dot);
    std::size_t sign = (!integral.empty() && (integral[0] == '-' || integral[0] == '+')) ? 1 : 0;
    std::string out(integral.substr(0, sign));
    integral.remove_prefix(sign);
    std::size_t group_len = 0;
    bool first_group = true;
    for (char c : integral) {
        if (c == ',') {
            if (group_len == 0 || (!first_group && group_len != 3) || group_len > 3) return {};
            first_group = false;
            group_len = 0;
        } else {
            out += c;
            ++group_len;
        }
    }
    if (!first_group && group_len != 3) return {};
    out += rest;
    return out;
}

}  // namespace

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    std::string text(cell);
    if (text.find(',') != std::string::npos) {
        text = strip_grouping(cell);
        if (text.empty()) return std::nullopt;
    }
    const char* begin = text.data();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

IncomeTable parse_csv(std::istream& in, const std::string& value_column,
                      const std::optional<std::string>& group_column) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("input has no header row");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    std::vector<std::string> header = split_csv_line(line);
    for (std::string& h : header) h = std::string(trim(h));

    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw SchemaError("column '" + name + "' not found in header");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t value_idx = column(value_column);
    const std::optional<std::size_t> group_idx =
        group_column ? std::optional(column(*group_column)) : std::nullopt;

    IncomeTable table;
    while (std::getline(in, line)) {
        if (trim(line).empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::optional<double> value =
            value_idx < fields.size() ? parse_number(fields[value_idx]) : std::nullopt;
        if (!value) {
            ++table.dropped;
            continue;
        }
        IncomeRow row;
        row.value = *value;
        if (group_idx) {
            row.group = *group_idx < fields.size() ? std::string(trim(fields[*group_idx])) : "";
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

IncomeTable load_csv(const std::string& path, const std::string& value_column,
                     const std::optional<std::string>& group_column) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open '" + path + "'");
    return parse_csv(in, value_column, group_column);
}

CurvePoints curve(const Sample& s, std::span<const double> grid) {
    CurvePoints pts;
    pts.mu_hat = s.mean();
    if (pts.mu_hat == 0.0) throw DomainError("sample mean is zero; Lorenz ordinates undefined");
    for (double t : grid) {
        const double theta = point_estimate(s, OrdinateQuery(t));
        pts.grid.push_back(t);
        pts.generalized.push_back(theta);
        pts.lorenz.push_back(theta / pts.mu_hat);
    }
    return pts;
}

void write_curve_csv(std::ostream& out, const CurvePoints& points, bool raw) {
    const char* num = raw ? "%.17g" : "%.6f";
    out << "t,lorenz,generalized,diagonal\n";
    for (std::size_t i = 0; i < points.grid.size(); ++i) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%g,", points.grid[i]);
        out << buf;
        std::snprintf(buf, sizeof buf, num, points.lorenz[i]);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, num, points.generalized[i]);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%g", points.grid[i]);
        out << buf << '\n';
    }
}

}  // namespace lorenz
