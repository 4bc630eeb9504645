#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"
#include "rai/parallel.hpp"
#include "rai/raster.hpp"
#include "rai/road_index.hpp"
#include "rai/rural_mask.hpp"

namespace rai {

// Elevation-revised distance: hypotenuse of the planimetric distance and the
// elevation difference between the cell and the road foot point.
inline double apply_dem_correction(double planimetric_m, double elev_pop_m,
                                   double elev_road_m) {
  return std::hypot(planimetric_m, elev_pop_m - elev_road_m);
}

struct DistanceSample {
  double planimetric_m = 0.0;           // D
  GeoPoint foot;                        // nearest point on the road network
  std::optional<double> elev_pop_m;     // E at the cell center
  std::optional<double> elev_road_m;    // E at the foot point
  double corrected_m = 0.0;             // D' (== D when no correction applied)
  bool dem_applied = false;
};

// Full distance sample for one cell center; DEM optional.
inline DistanceSample sample_distance(const GeoPoint& center, const RoadIndex& index,
                                      const RasterGrid* dem, double radius_hint_m = 2000.0) {
  const NearestRoad near = index.nearest(center, radius_hint_m);
  DistanceSample s;
  s.planimetric_m = near.meters;
  s.foot = near.foot;
  s.corrected_m = near.meters;
  if (dem) {
    s.elev_pop_m = dem->sample_nearest(center);
    s.elev_road_m = dem->sample_nearest(near.foot);
    if (s.elev_pop_m && s.elev_road_m) {
      s.corrected_m = apply_dem_correction(near.meters, *s.elev_pop_m, *s.elev_road_m);
      s.dem_applied = true;
    }
  }
  return s;
}

struct RegionIndicators {
  std::string code;
  double pop_rural = 0.0;
  double pop_served = 0.0;
  std::optional<double> rai_percent;  // undefined when pop_rural == 0
  double nsrp = 0.0;
  std::size_t rural_cells = 0;
  std::size_t served_cells = 0;
};

struct IndicatorOptions {
  double threshold_m = 2000.0;
  bool use_index = true;          // false = linear scan per cell (reference path)
  bool allow_empty_roads = false; // true: empty network means nothing is served
  int workers = 1;
};

struct IndicatorRun {
  std::vector<RegionIndicators> regions;  // ascending region code
  std::size_t dem_skipped_cells = 0;      // correction skipped: missing elevation
  std::size_t rural_cells = 0;
  std::size_t served_cells = 0;
};

namespace detail {

// Served test for one rural cell. The indexed path may prove "beyond
// threshold" from the window alone and skip the exact distance; when it does
// return a distance it is the exact linear-scan minimum, so both paths
// classify identically. dem_skipped is bumped when a DEM is present but has
// no elevation for either end.
inline bool cell_served(const GeoPoint& center, const RoadIndex& index,
                        const RasterGrid* dem, const IndicatorOptions& opt,
                        std::size_t& dem_skipped) {
  double d;
  GeoPoint foot;
  if (opt.use_index) {
    const auto hit = index.nearest_within(center, opt.threshold_m);
    if (!hit) return false;  // D > threshold implies D' > threshold
    d = hit->meters;
    foot = hit->foot;
  } else {
    const NearestRoad near = index.linear_nearest(center);
    if (near.meters > opt.threshold_m) return false;
    d = near.meters;
    foot = near.foot;
  }
  if (dem) {
    const auto e_pop = dem->sample_nearest(center);
    const auto e_road = dem->sample_nearest(foot);
    if (e_pop && e_road) {
      d = apply_dem_correction(d, *e_pop, *e_road);
    } else {
      ++dem_skipped;
    }
  }
  return d <= opt.threshold_m;
}

}  // namespace detail

// Cell classification over the whole grid: 0 = not rural, 1 = rural not
// served, 2 = rural served. Reference surface for oracle comparisons.
inline std::vector<std::uint8_t> classify_cells(const RasterGrid& pop, const RuralMask& mask,
                                                const RoadIndex& index, const RasterGrid* dem,
                                                const IndicatorOptions& opt) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(pop.rows()) * pop.cols(), 0);
  std::size_t dem_skipped = 0;
  for (int r = 0; r < pop.rows(); ++r) {
    for (int c = 0; c < pop.cols(); ++c) {
      if (!mask.rural_at(r, c)) continue;
      const std::size_t idx = static_cast<std::size_t>(r) * pop.cols() + c;
      if (index.empty()) {
        out[idx] = 1;
        continue;
      }
      const bool served = detail::cell_served(pop.cell_center(r, c), index, dem, opt, dem_skipped);
      out[idx] = served ? 2 : 1;
    }
  }
  return out;
}

// Aggregates RAI and NSRP per region. Tile-parallel with a fixed tile size
// and in-order merge, so results do not depend on the worker count.
inline IndicatorRun compute_indicators(const RasterGrid& pop, const RuralMask& mask,
                                       const RoadIndex& index, const RasterGrid* dem,
                                       const IndicatorOptions& opt = {}) {
  if (mask.rows != pop.rows() || mask.cols != pop.cols()) {
    throw InputError("rural mask dimensions do not match the population grid");
  }
  if (!(opt.threshold_m > 0.0)) throw InputError("threshold must be positive");
  if (index.empty() && !opt.allow_empty_roads) {
    throw InputError(
        "no all-season roads loaded; pass allow_empty_roads to score all rural cells as "
        "not served");
  }

  const std::size_t n_regions = mask.region_codes.size();
  struct TilePartial {
    std::vector<double> pop_rural;
    std::vector<double> pop_served;
    std::vector<std::size_t> rural_cells;
    std::vector<std::size_t> served_cells;
    std::size_t dem_skipped = 0;
  };

  constexpr int kTileRows = 32;
  const std::size_t n_tiles = (pop.rows() + kTileRows - 1) / kTileRows;
  std::vector<TilePartial> partials(n_tiles);

  run_tasks(n_tiles, opt.workers, [&](std::size_t tile) {
    TilePartial part;
    part.pop_rural.assign(n_regions, 0.0);
    part.pop_served.assign(n_regions, 0.0);
    part.rural_cells.assign(n_regions, 0);
    part.served_cells.assign(n_regions, 0);
    const int row0 = static_cast<int>(tile) * kTileRows;
    const int row1 = std::min(pop.rows(), row0 + kTileRows);
    for (int r = row0; r < row1; ++r) {
      for (int c = 0; c < pop.cols(); ++c) {
        if (!mask.rural_at(r, c)) continue;
        const auto region = static_cast<std::size_t>(mask.region_at(r, c));
        const double people = pop.value(r, c);
        part.pop_rural[region] += people;
        ++part.rural_cells[region];
        if (index.empty()) continue;
        if (detail::cell_served(pop.cell_center(r, c), index, dem, opt, part.dem_skipped)) {
          part.pop_served[region] += people;
          ++part.served_cells[region];
        }
      }
    }
    partials[tile] = std::move(part);
  });

  IndicatorRun run;
  std::vector<double> pop_rural(n_regions, 0.0);
  std::vector<double> pop_served(n_regions, 0.0);
  std::vector<std::size_t> rural_cells(n_regions, 0);
  std::vector<std::size_t> served_cells(n_regions, 0);
  for (const TilePartial& part : partials) {
    for (std::size_t i = 0; i < n_regions; ++i) {
      pop_rural[i] += part.pop_rural[i];
      pop_served[i] += part.pop_served[i];
      rural_cells[i] += part.rural_cells[i];
      served_cells[i] += part.served_cells[i];
    }
    run.dem_skipped_cells += part.dem_skipped;
  }

  run.regions.reserve(n_regions);
  for (std::size_t i = 0; i < n_regions; ++i) {
    RegionIndicators out;
    out.code = mask.region_codes[i];
    out.pop_rural = pop_rural[i];
    out.pop_served = pop_served[i];
    out.nsrp = pop_rural[i] - pop_served[i];
    out.rural_cells = rural_cells[i];
    out.served_cells = served_cells[i];
    if (pop_rural[i] > 0.0) {
      out.rai_percent = pop_served[i] / pop_rural[i] * 100.0;
    }
    run.rural_cells += rural_cells[i];
    run.served_cells += served_cells[i];
    run.regions.push_back(std::move(out));
  }
  return run;
}

// Optional pre-filter behind the road-clipping flag: keeps only segments that
// touch at least one rural cell. The default pipeline does NOT clip; a rural
// cell may legitimately be served by a road inside a nearby town.
inline RoadNetwork clip_roads_to_rural(const RoadNetwork& net, const RasterGrid& pop,
                                       const RuralMask& mask) {
  auto segment_touches_rural = [&](const RoadSegment& seg) {
    GeoBox box;
    box.expand(seg.a);
    box.expand(seg.b);
    const auto lo = pop.index_of(GeoPoint{box.min_lon, box.max_lat});
    const auto hi = pop.index_of(GeoPoint{box.max_lon, box.min_lat});
    const int r0 = lo ? lo->first : 0;
    const int c0 = lo ? lo->second : 0;
    const int r1 = hi ? hi->first : pop.rows() - 1;
    const int c1 = hi ? hi->second : pop.cols() - 1;
    if (!pop.extent().intersects(box)) return false;
    for (int r = std::max(0, r0); r <= std::min(pop.rows() - 1, r1); ++r) {
      for (int c = std::max(0, c0); c <= std::min(pop.cols() - 1, c1); ++c) {
        if (!mask.rural_at(r, c)) continue;
        const GeoPoint center = pop.cell_center(r, c);
        const double half = pop.cell_size() / 2.0;
        // Liang-Barsky style clip of the segment against the cell rectangle.
        double t0 = 0.0, t1 = 1.0;
        const double dx = seg.b.lon - seg.a.lon;
        const double dy = seg.b.lat - seg.a.lat;
        const double p[4] = {-dx, dx, -dy, dy};
        const double q[4] = {seg.a.lon - (center.lon - half), (center.lon + half) - seg.a.lon,
                             seg.a.lat - (center.lat - half), (center.lat + half) - seg.a.lat};
        bool reject = false;
        for (int k = 0; k < 4; ++k) {
          if (p[k] == 0.0) {
            if (q[k] < 0.0) {
              reject = true;
              break;
            }
          } else {
            const double t = q[k] / p[k];
            if (p[k] < 0.0) {
              t0 = std::max(t0, t);
            } else {
              t1 = std::min(t1, t);
            }
          }
        }
        if (!reject && t0 <= t1) return true;
      }
    }
    return false;
  };

  RoadNetwork clipped = net;
  clipped.segments.clear();
  for (const RoadSegment& seg : net.segments) {
    if (segment_touches_rural(seg)) clipped.segments.push_back(seg);
  }
  return clipped;
}

}  // namespace rai
