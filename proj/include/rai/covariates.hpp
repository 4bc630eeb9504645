#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rai/csv.hpp"
#include "rai/error.hpp"

namespace rai {

// Canonical column names for the ten socio-economic indicators the toolkit
// knows about (population, economy, employment, poverty, education). Other
// columns are carried through untouched.
inline const std::set<std::string>& known_covariate_columns() {
  static const std::set<std::string> names = {
      "rural_population",     "rural_population_share",
      "gdp_per_capita",       "gdp_per_employed",
      "employment_rate",      "unemployment_rate",
      "poverty_rate",         "income_gini",
      "preschool_enrollment_rate", "adult_literacy_rate",
  };
  return names;
}

struct CovariateColumn {
  std::string name;
  bool recognized = false;
  std::size_t observation_count = 0;  // non-missing entries
};

class CovariateTable {
 public:
  std::vector<CovariateColumn> columns;
  // Row values parallel to `columns`; nullopt marks a missing cell.
  std::map<std::string, std::vector<std::optional<double>>> rows;

  const CovariateColumn* find_column(const std::string& name) const {
    for (const auto& c : columns) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  std::optional<double> value(const std::string& region_code, std::size_t column) const {
    const auto it = rows.find(region_code);
    if (it == rows.end()) return std::nullopt;
    return it->second[column];
  }
};

// CSV with a header row: region_code first, then one column per indicator.
// Empty cells are missing values; anything non-empty must parse as a number.
inline CovariateTable load_covariates(const std::string& path) {
  const auto cells = load_csv(path);
  if (cells.empty()) throw InputError(path + ": empty covariate file");
  const auto& header = cells[0];
  if (header.size() < 2) {
    throw InputError(path + ": header must name region_code plus at least one indicator");
  }

  CovariateTable table;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw InputError(path + ": empty indicator name in header column " + std::to_string(c + 1));
    }
    CovariateColumn col;
    col.name = header[c];
    col.recognized = known_covariate_columns().count(header[c]) > 0;
    table.columns.push_back(col);
  }

  for (std::size_t r = 1; r < cells.size(); ++r) {
    const auto& row = cells[r];
    if (row.size() != header.size()) {
      throw InputError(path + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(row.size()) + " cells, header has " +
                       std::to_string(header.size()));
    }
    const std::string& code = row[0];
    if (code.empty()) {
      throw InputError(path + ": row " + std::to_string(r + 1) + " has empty region code");
    }
    if (table.rows.count(code)) {
      throw InputError(path + ": duplicate region code '" + code + "' at row " +
                       std::to_string(r + 1));
    }
    std::vector<std::optional<double>> values;
    values.reserve(table.columns.size());
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c].empty()) {
        values.push_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      const char* first = row[c].data();
      const char* last = first + row[c].size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) {
        throw InputError(path + ": non-numeric cell '" + row[c] + "' at row " +
                         std::to_string(r + 1) + " column '" + header[c] + "'");
      }
      values.push_back(v);
      ++table.columns[c - 1].observation_count;
    }
    table.rows.emplace(code, std::move(values));
  }
  return table;
}

}  // namespace rai
