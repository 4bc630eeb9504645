#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"

namespace rai {

// Georeferenced single-band grid with square cells (degrees). The origin is
// the upper-left corner of cell (0, 0); rows grow southwards.
class RasterGrid {
 public:
  RasterGrid(GeoPoint origin_ul, double cell_size_deg, int n_rows, int n_cols,
             std::optional<double> nodata, std::vector<double> values,
             std::string source = "")
      : origin_(origin_ul),
        cell_size_(cell_size_deg),
        n_rows_(n_rows),
        n_cols_(n_cols),
        nodata_(nodata),
        values_(std::move(values)),
        source_(std::move(source)) {
    if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
      throw InputError(source_ + ": cell size must be positive, got " +
                       std::to_string(cell_size_));
    }
    if (n_rows_ <= 0 || n_cols_ <= 0) {
      throw InputError(source_ + ": raster dimensions must be positive");
    }
    if (values_.size() != static_cast<std::size_t>(n_rows_) * static_cast<std::size_t>(n_cols_)) {
      throw InputError(source_ + ": value count does not match nrows*ncols");
    }
    if (!std::isfinite(origin_.lon) || !std::isfinite(origin_.lat)) {
      throw InputError(source_ + ": non-finite raster origin");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]) && !is_nodata_value(values_[i])) {
        throw InputError(source_ + ": non-finite value at cell " + std::to_string(i) +
                         " is not the declared nodata");
      }
    }
  }

  const GeoPoint& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  std::optional<double> nodata() const { return nodata_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& source() const { return source_; }

  double value(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * n_cols_ + c];
  }

  bool is_nodata_value(double v) const {
    if (!nodata_) return false;
    if (std::isnan(*nodata_)) return std::isnan(v);
    return v == *nodata_;
  }

  bool is_nodata(int r, int c) const { return is_nodata_value(value(r, c)); }

  bool in_bounds(int r, int c) const {
    return r >= 0 && r < n_rows_ && c >= 0 && c < n_cols_;
  }

  GeoPoint cell_center(int r, int c) const {
    return GeoPoint{origin_.lon + (c + 0.5) * cell_size_,
                    origin_.lat - (r + 0.5) * cell_size_};
  }

  // Cell whose extent contains p, or nullopt when p falls outside the grid.
  std::optional<std::pair<int, int>> index_of(const GeoPoint& p) const {
    const int c = static_cast<int>(std::floor((p.lon - origin_.lon) / cell_size_));
    const int r = static_cast<int>(std::floor((origin_.lat - p.lat) / cell_size_));
    if (!in_bounds(r, c)) return std::nullopt;
    return std::make_pair(r, c);
  }

  // Nearest-neighbor sample: value of the containing cell, nullopt when out of
  // bounds or nodata.
  std::optional<double> sample_nearest(const GeoPoint& p) const {
    const auto idx = index_of(p);
    if (!idx) return std::nullopt;
    if (is_nodata(idx->first, idx->second)) return std::nullopt;
    return value(idx->first, idx->second);
  }

  GeoBox extent() const {
    GeoBox box;
    box.min_lon = origin_.lon;
    box.max_lon = origin_.lon + n_cols_ * cell_size_;
    box.max_lat = origin_.lat;
    box.min_lat = origin_.lat - n_rows_ * cell_size_;
    return box;
  }

  // Population grids must not carry negative counts.
  void require_non_negative(const std::string& role) const {
    for (int r = 0; r < n_rows_; ++r) {
      for (int c = 0; c < n_cols_; ++c) {
        if (!is_nodata(r, c) && value(r, c) < 0.0) {
          throw InputError(source_ + ": " + role + " raster has negative value " +
                           std::to_string(value(r, c)) + " at row " + std::to_string(r) +
                           " col " + std::to_string(c));
        }
      }
    }
  }

 private:
  GeoPoint origin_;
  double cell_size_;
  int n_rows_;
  int n_cols_;
  std::optional<double> nodata_;
  std::vector<double> values_;
  std::string source_;
};

}  // namespace rai
