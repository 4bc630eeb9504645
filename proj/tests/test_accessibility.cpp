#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "rai/indicators.hpp"
#include "rai/raster.hpp"
#include "rai/regions.hpp"
#include "rai/road_index.hpp"
#include "rai/rural_mask.hpp"
#include "support/oracles.hpp"

using rai::GeoPoint;
using rai::RasterGrid;
using rai_test::Rand;

namespace {

rai::RegionSet two_rect_regions() {
  rai::RegionSet set;
  rai::Region a;
  a.code = "AAA";
  rai::Polygon pa;
  pa.exterior = {{0, 0}, {0.1, 0}, {0.1, 0.2}, {0, 0.2}, {0, 0}};
  a.polygons.push_back(pa);
  a.box = rai::polygon_box(pa);
  rai::Region b;
  b.code = "BBB";
  rai::Polygon pb;
  pb.exterior = {{0.1, 0}, {0.2, 0}, {0.2, 0.2}, {0.1, 0.2}, {0.1, 0}};
  b.polygons.push_back(pb);
  b.box = rai::polygon_box(pb);
  set.regions = {a, b};
  return set;
}

}  // namespace

TEST_CASE("rural mask: region, urban, and nodata cases") {
  // 4x4 population grid across two regions; urban grid marks one cell block.
  std::vector<double> pop_values(16, 10.0);
  pop_values[5] = -9999.0;  // nodata cell
  const RasterGrid pop({0, 0.2}, 0.05, 4, 4, -9999.0, pop_values);

  // One-cell urban grid covering the northwest corner only.
  const RasterGrid urban({0, 0.2}, 0.05, 1, 1, -9999.0, {1.0});

  const rai::RegionSet regions = two_rect_regions();
  const rai::RuralMask mask = rai::build_rural_mask(pop, urban, regions);

  REQUIRE(mask.rows == 4);
  REQUIRE(mask.cols == 4);
  // Cell (0,0): inside region A but urban.
  CHECK(mask.region_at(0, 0) == 0);
  CHECK_FALSE(mask.rural_at(0, 0));
  // Cell (1,1): nodata population.
  CHECK(mask.region_at(1, 1) == -1);
  CHECK_FALSE(mask.rural_at(1, 1));
  // Cell (2,0): region A, not urban.
  CHECK(mask.region_at(2, 0) == 0);
  CHECK(mask.rural_at(2, 0));
  // Cell (2,3): region B.
  CHECK(mask.region_codes[mask.region_at(2, 3)] == "BBB");
  CHECK(mask.rural_at(2, 3));
  // Urban sample outside the urban grid extent counts as not urban.
  CHECK(mask.rural_at(3, 3));
}

TEST_CASE("rural mask breaks region ties by ascending code") {
  // Both regions share the border lon = 0.1; a cell center exactly on it.
  rai::RegionSet regions = two_rect_regions();
  const RasterGrid pop({0.05, 0.15}, 0.1, 1, 1, std::nullopt, {5.0});
  // Cell center is (0.1, 0.1): on the shared edge of AAA and BBB.
  const GeoPoint center = pop.cell_center(0, 0);
  REQUIRE(center.lon == 0.1);
  const RasterGrid urban({0, 0.2}, 0.2, 1, 1, std::nullopt, {0.0});
  const rai::RuralMask mask = rai::build_rural_mask(pop, urban, regions);
  CHECK(mask.region_codes[mask.region_at(0, 0)] == "AAA");
}

TEST_CASE("DEM correction formula") {
  CHECK(rai::apply_dem_correction(2000.0, 120.0, 120.0) == 2000.0);
  CHECK(rai::apply_dem_correction(3.0, 4.0, 0.0) == 5.0);
  CHECK(rai::apply_dem_correction(3.0, 0.0, 4.0) == 5.0);
  // Clears the threshold only because of the elevation difference.
  const double d = rai::apply_dem_correction(1990.0, 320.0, 120.0);
  CHECK_THAT(d, Catch::Matchers::WithinAbs(2000.02, 0.01));
  CHECK(d > 2000.0);
  // Correction never shrinks the distance.
  Rand rng(5);
  for (int i = 0; i < 200; ++i) {
    const double base = rng.uniform(0, 5000);
    const double corrected = rai::apply_dem_correction(base, rng.uniform(-500, 3000),
                                                       rng.uniform(-500, 3000));
    REQUIRE(corrected >= base);
  }
}

namespace {

struct SmallWorld {
  RasterGrid pop;
  RasterGrid urban;
  rai::RegionSet regions;
  rai::RuralMask mask;
  rai::RoadIndex index;
};

// 2x4 grid, one region, roads placed so exactly the two western cells are
// within 2 km.
SmallWorld four_cell_world() {
  // Cells are 0.01 deg (~1112 m) wide, centered at lon 0.005 + c * 0.01.
  std::vector<double> pop_values(4, 10.0);
  RasterGrid pop({0, 0.01}, 0.01, 1, 4, std::nullopt, pop_values);
  RasterGrid urban({0, 0.01}, 0.04, 1, 1, std::nullopt, {0.0});
  rai::RegionSet regions;
  rai::Region r;
  r.code = "RRR";
  rai::Polygon poly;
  poly.exterior = {{0, 0}, {0.04, 0}, {0.04, 0.01}, {0, 0.01}, {0, 0}};
  r.polygons.push_back(poly);
  r.box = rai::polygon_box(poly);
  regions.regions.push_back(r);
  rai::RuralMask mask = rai::build_rural_mask(pop, urban, regions);

  // Vertical road at lon = 0: distances from cell centers are ~556, ~1668,
  // ~2780, ~3892 m, so cells 0 and 1 are served at 2 km.
  rai::RoadNetwork net;
  net.segments.push_back({{0.0, 0.0}, {0.0, 0.01}, 0});
  return {std::move(pop), std::move(urban), std::move(regions), std::move(mask),
          rai::RoadIndex(net)};
}

}  // namespace

TEST_CASE("compute_indicators: 4 rural cells, 2 served") {
  SmallWorld world = four_cell_world();
  const rai::IndicatorRun run =
      rai::compute_indicators(world.pop, world.mask, world.index, nullptr, {});
  REQUIRE(run.regions.size() == 1);
  const rai::RegionIndicators& r = run.regions[0];
  CHECK(r.pop_rural == 40.0);
  CHECK(r.pop_served == 20.0);
  REQUIRE(r.rai_percent.has_value());
  CHECK(*r.rai_percent == 50.0);
  CHECK(r.nsrp == 20.0);

  // All served at an infinite-equivalent threshold.
  rai::IndicatorOptions wide;
  wide.threshold_m = 1e9;
  const rai::IndicatorRun all =
      rai::compute_indicators(world.pop, world.mask, world.index, nullptr, wide);
  CHECK(*all.regions[0].rai_percent == 100.0);
  CHECK(all.regions[0].nsrp == 0.0);
}

TEST_CASE("empty road index: error unless explicitly allowed") {
  SmallWorld world = four_cell_world();
  const rai::RoadIndex empty{rai::RoadNetwork{}};
  CHECK_THROWS_WITH(rai::compute_indicators(world.pop, world.mask, empty, nullptr, {}),
                    Catch::Matchers::ContainsSubstring("no all-season roads"));
  rai::IndicatorOptions opt;
  opt.allow_empty_roads = true;
  const rai::IndicatorRun run =
      rai::compute_indicators(world.pop, world.mask, empty, nullptr, opt);
  CHECK(run.regions[0].pop_served == 0.0);
  CHECK(*run.regions[0].rai_percent == 0.0);
  CHECK(run.regions[0].nsrp == 40.0);
}

TEST_CASE("DEM correction can flip a served cell and never raises RAI") {
  SmallWorld world = four_cell_world();
  // Flat DEM: no change.
  const RasterGrid flat_dem({0, 0.01}, 0.01, 1, 4, std::nullopt,
                            std::vector<double>(4, 100.0));
  const rai::IndicatorRun base =
      rai::compute_indicators(world.pop, world.mask, world.index, nullptr, {});
  const rai::IndicatorRun flat =
      rai::compute_indicators(world.pop, world.mask, world.index, &flat_dem, {});
  CHECK(flat.regions[0].pop_served == base.regions[0].pop_served);

  // Steep DEM: cell 1 (D ~1668 m) gains ~1200 m of elevation difference,
  // sqrt(1668^2 + 1200^2) ~ 2055 m > 2000 m, so it flips to not served.
  const RasterGrid steep_dem({0, 0.01}, 0.01, 1, 4, std::nullopt, {0.0, 1200.0, 0.0, 0.0});
  const rai::IndicatorRun steep =
      rai::compute_indicators(world.pop, world.mask, world.index, &steep_dem, {});
  CHECK(steep.regions[0].pop_served == 10.0);
  CHECK(*steep.regions[0].rai_percent <= *base.regions[0].rai_percent);
}

TEST_CASE("indicator invariants on random fixtures") {
  Rand rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const int rows = rng.uniform_int(4, 10);
    const int cols = rng.uniform_int(4, 10);
    const double cell = 0.01;
    std::vector<double> pop_values(static_cast<std::size_t>(rows) * cols);
    for (auto& v : pop_values) v = rng.uniform_int(0, 50);
    const RasterGrid pop({0, rows * cell}, cell, rows, cols, -9999.0, pop_values);
    const RasterGrid urban({0, rows * cell}, cell * rows, 1, 1, std::nullopt, {0.0});

    rai::RegionSet regions;
    rai::Region r;
    r.code = "ONE";
    rai::Polygon poly;
    poly.exterior = {{0, 0},
                     {cols * cell, 0},
                     {cols * cell, rows * cell},
                     {0, rows * cell},
                     {0, 0}};
    r.polygons.push_back(poly);
    r.box = rai::polygon_box(poly);
    regions.regions.push_back(r);
    const rai::RuralMask mask = rai::build_rural_mask(pop, urban, regions);

    rai::RoadNetwork net;
    const int n_segments = rng.uniform_int(1, 8);
    for (int s = 0; s < n_segments; ++s) {
      GeoPoint a{rng.uniform(0, cols * cell), rng.uniform(0, rows * cell)};
      GeoPoint b{a.lon + rng.uniform(-0.03, 0.03), a.lat + rng.uniform(-0.03, 0.03)};
      if (a.lon == b.lon && a.lat == b.lat) b.lon += 1e-4;
      net.segments.push_back({a, b, 0});
    }
    const rai::RoadIndex index(net);

    // RAI monotone in threshold.
    double previous_rai = -1.0;
    for (const double threshold : {500.0, 1000.0, 2000.0, 4000.0, 1e8}) {
      rai::IndicatorOptions opt;
      opt.threshold_m = threshold;
      const auto run = rai::compute_indicators(pop, mask, index, nullptr, opt);
      const auto& region = run.regions[0];
      REQUIRE(region.pop_served <= region.pop_rural);
      REQUIRE(region.nsrp == region.pop_rural - region.pop_served);
      if (region.rai_percent) {
        REQUIRE(*region.rai_percent >= previous_rai);
        previous_rai = *region.rai_percent;
      }
    }
    // Unbounded threshold serves everyone.
    rai::IndicatorOptions wide;
    wide.threshold_m = 1e8;
    const auto everyone = rai::compute_indicators(pop, mask, index, nullptr, wide);
    if (everyone.regions[0].rai_percent) {
      REQUIRE(*everyone.regions[0].rai_percent == 100.0);
      REQUIRE(everyone.regions[0].nsrp == 0.0);
    }

    // Indexed and linear classification agree cell for cell; DEM included.
    std::vector<double> dem_values(static_cast<std::size_t>(rows) * cols);
    for (auto& v : dem_values) v = rng.uniform(0, 800);
    const RasterGrid dem({0, rows * cell}, cell, rows, cols, -9999.0, dem_values);
    rai::IndicatorOptions indexed;
    rai::IndicatorOptions linear;
    linear.use_index = false;
    const auto cells_indexed = rai::classify_cells(pop, mask, index, &dem, indexed);
    const auto cells_linear = rai::classify_cells(pop, mask, index, &dem, linear);
    REQUIRE(cells_indexed == cells_linear);

    // DEM correction never increases RAI.
    const auto with_dem = rai::compute_indicators(pop, mask, index, &dem, {});
    const auto without = rai::compute_indicators(pop, mask, index, nullptr, {});
    if (with_dem.regions[0].rai_percent) {
      REQUIRE(*with_dem.regions[0].rai_percent <= *without.regions[0].rai_percent);
    }
  }
}

TEST_CASE("tile-parallel run is bit-identical to single-threaded") {
  Rand rng(2718);
  const int rows = 70, cols = 40;
  std::vector<double> pop_values(static_cast<std::size_t>(rows) * cols);
  for (auto& v : pop_values) v = rng.uniform(0, 80);
  const RasterGrid pop({0, rows * 0.005}, 0.005, rows, cols, std::nullopt, pop_values);
  const RasterGrid urban({0, rows * 0.005}, 0.1, 2, 2, std::nullopt, {0, 1, 0, 0});
  rai::RegionSet regions = two_rect_regions();
  const rai::RuralMask mask1 = rai::build_rural_mask(pop, urban, regions, 1);
  const rai::RuralMask mask4 = rai::build_rural_mask(pop, urban, regions, 4);
  REQUIRE(mask1.region_of_cell == mask4.region_of_cell);
  REQUIRE(mask1.rural == mask4.rural);

  rai::RoadNetwork net;
  for (int s = 0; s < 30; ++s) {
    GeoPoint a{rng.uniform(0, 0.2), rng.uniform(0, 0.35)};
    GeoPoint b{a.lon + rng.uniform(-0.02, 0.02), a.lat + rng.uniform(-0.02, 0.02)};
    if (a.lon == b.lon && a.lat == b.lat) b.lat += 1e-4;
    net.segments.push_back({a, b, 0});
  }
  const rai::RoadIndex index(net);
  rai::IndicatorOptions opt1;
  opt1.workers = 1;
  rai::IndicatorOptions opt8 = opt1;
  opt8.workers = 8;
  const auto run1 = rai::compute_indicators(pop, mask1, index, nullptr, opt1);
  const auto run8 = rai::compute_indicators(pop, mask4, index, nullptr, opt8);
  REQUIRE(run1.regions.size() == run8.regions.size());
  for (std::size_t i = 0; i < run1.regions.size(); ++i) {
    REQUIRE(run1.regions[i].pop_rural == run8.regions[i].pop_rural);
    REQUIRE(run1.regions[i].pop_served == run8.regions[i].pop_served);
    REQUIRE(run1.regions[i].nsrp == run8.regions[i].nsrp);
  }
}

TEST_CASE("served classification matches densified brute force on a small world") {
  Rand rng(555);
  const int rows = 10, cols = 10;
  const double cell = 0.01;
  std::vector<double> pop_values(100);
  for (auto& v : pop_values) v = rng.uniform_int(1, 9);
  const RasterGrid pop({0, rows * cell}, cell, rows, cols, std::nullopt, pop_values);
  const RasterGrid urban({0, rows * cell}, 1.0, 1, 1, std::nullopt, {0.0});
  rai::RegionSet regions;
  rai::Region r;
  r.code = "ONE";
  rai::Polygon poly;
  poly.exterior = {{0, 0}, {0.1, 0}, {0.1, 0.1}, {0, 0.1}, {0, 0}};
  r.polygons.push_back(poly);
  r.box = rai::polygon_box(poly);
  regions.regions.push_back(r);
  const rai::RuralMask mask = rai::build_rural_mask(pop, urban, regions);

  rai::RoadNetwork net;
  net.segments.push_back({{0.015, 0.01}, {0.015, 0.09}, 0});
  net.segments.push_back({{0.02, 0.085}, {0.08, 0.085}, 0});
  const rai::RoadIndex index(net);

  const auto classified = rai::classify_cells(pop, mask, index, nullptr, {});
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * cols + col;
      REQUIRE(classified[idx] != 0);  // everything here is rural
      const double d =
          rai_test::densified_min_distance(pop.cell_center(row, col), net.segments, 1.0);
      // Densification at 1 m cannot misclassify unless the cell sits within
      // ~0.5 m of the threshold; this layout keeps clear of it.
      REQUIRE(std::abs(d - 2000.0) > 1.0);
      REQUIRE((classified[idx] == 2) == (d <= 2000.0));
    }
  }
}

TEST_CASE("clip_roads_to_rural keeps only segments touching rural cells") {
  SmallWorld world = four_cell_world();
  rai::RoadNetwork net;
  net.segments.push_back({{0.005, 0.005}, {0.015, 0.005}, 0});  // through rural cells
  net.segments.push_back({{0.5, 0.5}, {0.51, 0.5}, 0});         // far away
  const rai::RoadNetwork clipped = rai::clip_roads_to_rural(net, world.pop, world.mask);
  REQUIRE(clipped.segments.size() == 1);
  CHECK(clipped.segments[0].a.lon == 0.005);
}
