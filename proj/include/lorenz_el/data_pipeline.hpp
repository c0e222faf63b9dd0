#pragma once

// Income-table ingestion and empirical (generalized) Lorenz curve evaluation.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include "lorenz_el/el_core.hpp"

namespace lorenz {

struct IncomeRow {
    std::string group;  // empty when no group column was requested
    double value = 0.0;
};

struct IncomeTable {
    std::vector<IncomeRow> rows;
    /// Rows dropped because the value cell was empty or not numeric.
    std::size_t dropped = 0;

    /// All values, or only those whose group equals `group`.
    std::vector<double> values(const std::optional<std::string>& group = std::nullopt) const;
};

/// Parses comma-separated text with a header row. Fields may be double-quoted;
/// a quoted numeric field may use comma digit grouping ("45,123").
/// Throws SchemaError when a named column is missing from the header.
IncomeTable parse_csv(std::istream& in, const std::string& value_column,
                      const std::optional<std::string>& group_column = std::nullopt);

/// parse_csv on a file. Throws FileError when it cannot be opened.
IncomeTable load_csv(const std::string& path, const std::string& value_column,
                     const std::optional<std::string>& group_column = std::nullopt);

/// Splits one CSV record into fields, honouring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Parses a numeric cell; nullopt for empty or non-numeric text.
std::optional<double> parse_number(std::string_view cell);

struct CurvePoints {
    std::vector<double> grid;
    std::vector<double> lorenz;       // generalized / mu_hat
    std::vector<double> generalized;  // point_estimate at each t
    double mu_hat = 0.0;
};

/// Empirical Lorenz and generalized Lorenz ordinates on `grid` (each t in
/// (0, 1)). Throws DomainError when the sample mean is zero.
CurvePoints curve(const Sample& s, std::span<const double> grid);

/// Header t,lorenz,generalized,diagonal.
void write_curve_csv(std::ostream& out, const CurvePoints& points, bool raw = false);

}  // namespace lorenz
