#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace erps::cli {

using nlohmann::json;
using Grid = std::vector<std::vector<double>>;

/// Twelve significant digits.
std::string decimal(double x);
double rounded(double x);

/// (a + b√3)/c with small integers, when x is one within 1e-11.
std::optional<std::string> exact_sqrt3(double x);

/// {"scale", "values" (scaled and rounded), "exact" (unscaled)}.
json grid_to_json(const Grid& grid, double scale);
std::string grid_to_table(const Grid& grid, double scale);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace erps::cli
