#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/raster.hpp"

namespace rai {

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline double parse_double_token(const std::string& tok, const std::string& context) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw InputError(context + ": cannot parse number '" + tok + "'");
  }
  return v;
}

}  // namespace detail

// ESRI ASCII grid: 5-6 line header (ncols, nrows, xllcorner|xllcenter,
// yllcorner|yllcenter, cellsize, optional NODATA_value) followed by row-major
// values, top row first.
inline RasterGrid load_ascii_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::string content(static_cast<std::size_t>(size), '\0');
  in.read(content.data(), size);
  if (!in) throw InputError(path + ": read failed");

  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < content.size() &&
           std::isspace(static_cast<unsigned char>(content[pos]))) {
      ++pos;
    }
    const std::size_t start = pos;
    while (pos < content.size() &&
           !std::isspace(static_cast<unsigned char>(content[pos]))) {
      ++pos;
    }
    return content.substr(start, pos - start);
  };

  long ncols = -1, nrows = -1;
  double xll = 0.0, yll = 0.0, cell = 0.0;
  bool x_is_center = false, y_is_center = false;
  bool have_x = false, have_y = false, have_cell = false;
  std::optional<double> nodata;

  // Header: keyword/value pairs until the first bare number.
  while (true) {
    const std::size_t mark = pos;
    std::string key = next_token();
    if (key.empty()) throw InputError(path + ": missing grid values after header");
    const std::string k = detail::lower(key);
    if (k == "ncols") {
      ncols = static_cast<long>(detail::parse_double_token(next_token(), path));
    } else if (k == "nrows") {
      nrows = static_cast<long>(detail::parse_double_token(next_token(), path));
    } else if (k == "xllcorner" || k == "xllcenter") {
      xll = detail::parse_double_token(next_token(), path);
      x_is_center = (k == "xllcenter");
      have_x = true;
    } else if (k == "yllcorner" || k == "yllcenter") {
      yll = detail::parse_double_token(next_token(), path);
      y_is_center = (k == "yllcenter");
      have_y = true;
    } else if (k == "cellsize") {
      cell = detail::parse_double_token(next_token(), path);
      have_cell = true;
    } else if (k == "nodata_value") {
      nodata = detail::parse_double_token(next_token(), path);
    } else {
      pos = mark;  // first value token, header done
      break;
    }
  }
  if (ncols <= 0 || nrows <= 0) {
    throw InputError(path + ": header must declare positive ncols and nrows");
  }
  if (!have_x || !have_y || !have_cell) {
    throw InputError(path + ": header missing xllcorner/yllcorner/cellsize");
  }
  if (!(cell > 0.0)) throw InputError(path + ": cellsize must be positive");

  const double x_corner = x_is_center ? xll - cell / 2.0 : xll;
  const double y_corner = y_is_center ? yll - cell / 2.0 : yll;

  const std::size_t total = static_cast<std::size_t>(ncols) * static_cast<std::size_t>(nrows);
  std::vector<double> values;
  values.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::string tok = next_token();
    if (tok.empty()) {
      throw InputError(path + ": expected " + std::to_string(total) + " values, got " +
                       std::to_string(i));
    }
    values.push_back(detail::parse_double_token(tok, path));
  }
  if (!next_token().empty()) {
    throw InputError(path + ": trailing data after " + std::to_string(total) + " values");
  }

  const GeoPoint origin{x_corner, y_corner + nrows * cell};
  return RasterGrid(origin, cell, static_cast<int>(nrows), static_cast<int>(ncols), nodata,
                    std::move(values), path);
}

// Writes a grid back out; formatting round-trips doubles exactly.
inline void write_ascii_grid(const RasterGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  char buf[64];
  auto fmt = [&](double v) -> const char* {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  };
  out << "ncols " << grid.cols() << "\n";
  out << "nrows " << grid.rows() << "\n";
  out << "xllcorner " << fmt(grid.origin().lon) << "\n";
  out << "yllcorner " << fmt(grid.origin().lat - grid.rows() * grid.cell_size()) << "\n";
  out << "cellsize " << fmt(grid.cell_size()) << "\n";
  if (grid.nodata()) out << "NODATA_value " << fmt(*grid.nodata()) << "\n";
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      if (c) out << ' ';
      out << fmt(grid.value(r, c));
    }
    out << "\n";
  }
  if (!out) throw InputError(path + ": write failed");
}

}  // namespace rai
