#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"
#include "rai/parallel.hpp"
#include "rai/raster.hpp"
#include "rai/regions.hpp"

namespace rai {

// Per-cell overlay of the population grid with regions and urban extent.
// Aligned 1:1 with the population grid it was built from.
struct RuralMask {
  int rows = 0;
  int cols = 0;
  std::vector<std::string> region_codes;        // ascending, index space below
  std::vector<std::int32_t> region_of_cell;     // -1 = no region
  std::vector<std::uint8_t> rural;              // 1 = rural cell
  std::size_t rural_cell_count = 0;

  std::int32_t region_at(int r, int c) const {
    return region_of_cell[static_cast<std::size_t>(r) * cols + c];
  }
  bool rural_at(int r, int c) const {
    return rural[static_cast<std::size_t>(r) * cols + c] != 0;
  }
};

// Rural = inside a region AND not urban. The urban grid is sampled
// nearest-neighbor at the population cell center; cells covered by several
// regions go to the lowest region code; nodata population cells stay
// non-rural and get no region.
inline RuralMask build_rural_mask(const RasterGrid& pop, const RasterGrid& urban,
                                  const RegionSet& regions, int workers = 1) {
  if (regions.regions.empty()) throw InputError("region set is empty");
  RuralMask mask;
  mask.rows = pop.rows();
  mask.cols = pop.cols();
  const std::size_t n_cells = static_cast<std::size_t>(mask.rows) * mask.cols;
  mask.region_of_cell.assign(n_cells, -1);
  mask.rural.assign(n_cells, 0);
  mask.region_codes.reserve(regions.regions.size());
  for (const Region& r : regions.regions) mask.region_codes.push_back(r.code);

  constexpr int kTileRows = 32;
  const std::size_t n_tiles = (mask.rows + kTileRows - 1) / kTileRows;
  std::vector<std::size_t> rural_per_tile(n_tiles, 0);

  run_tasks(n_tiles, workers, [&](std::size_t tile) {
    const int row0 = static_cast<int>(tile) * kTileRows;
    const int row1 = std::min(mask.rows, row0 + kTileRows);
    std::size_t rural_count = 0;
    for (int r = row0; r < row1; ++r) {
      for (int c = 0; c < mask.cols; ++c) {
        if (pop.is_nodata(r, c)) continue;
        const GeoPoint center = pop.cell_center(r, c);
        std::int32_t region_index = -1;
        for (std::size_t i = 0; i < regions.regions.size(); ++i) {
          const Region& region = regions.regions[i];
          if (!region.box.contains(center)) continue;
          for (const Polygon& poly : region.polygons) {
            if (point_in_polygon(center, poly)) {
              region_index = static_cast<std::int32_t>(i);
              break;
            }
          }
          if (region_index >= 0) break;  // regions sorted ascending by code
        }
        if (region_index < 0) continue;
        const std::size_t idx = static_cast<std::size_t>(r) * mask.cols + c;
        mask.region_of_cell[idx] = region_index;
        const auto urban_sample = urban.sample_nearest(center);
        const bool is_urban = urban_sample.has_value() && *urban_sample != 0.0;
        if (!is_urban) {
          mask.rural[idx] = 1;
          ++rural_count;
        }
      }
    }
    rural_per_tile[tile] = rural_count;
  });

  for (std::size_t count : rural_per_tile) mask.rural_cell_count += count;
  return mask;
}

}  // namespace rai
