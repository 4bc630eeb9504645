#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "rai/weights.hpp"
#include "support/oracles.hpp"

using rai::GeoPoint;
using rai_test::Rand;

TEST_CASE("knn weights: structure and row standardization") {
  std::vector<GeoPoint> pts = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
  const rai::WeightsMatrix w = rai::build_knn_weights(pts, 2);
  REQUIRE(w.size() == 6);
  CHECK(w.row_standardized());
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(w.at(i, i) == 0.0);
    double sum = 0.0;
    int nonzero = 0;
    for (std::size_t j = 0; j < 6; ++j) {
      sum += w.at(i, j);
      if (w.at(i, j) != 0.0) ++nonzero;
    }
    CHECK(nonzero == 2);
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("knn tie-break goes to the lower index") {
  // Three collinear equidistant points on the equator; the middle point is
  // equally far from both neighbors.
  std::vector<GeoPoint> pts = {{0, 0}, {1, 0}, {2, 0}};
  const rai::WeightsMatrix w = rai::build_knn_weights(pts, 1);
  CHECK(w.at(1, 0) == 1.0);
  CHECK(w.at(1, 2) == 0.0);
}

TEST_CASE("knn neighbor sets equal a brute-force scan") {
  Rand rng(808);
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 25; ++i) {
    pts.push_back({rng.uniform(-5, 5), rng.uniform(40, 50)});
  }
  const std::size_t k = 4;
  const rai::WeightsMatrix w = rai::build_knn_weights(pts, k);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    // Brute force: sort all others by (distance, index).
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) all.emplace_back(rai::haversine_m(pts[i], pts[j]), j);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t t = 0; t < all.size(); ++t) {
      const bool expect_neighbor = t < k;
      CHECK((w.at(i, all[t].second) != 0.0) == expect_neighbor);
    }
  }
}

TEST_CASE("knn rejects degenerate inputs") {
  std::vector<GeoPoint> pts = {{0, 0}, {1, 0}, {1, 0}};
  CHECK_THROWS_WITH(rai::build_knn_weights(pts, 1),
                    Catch::Matchers::ContainsSubstring("duplicate centroids"));
  std::vector<GeoPoint> few = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(rai::build_knn_weights(few, 2), rai::InputError);
  CHECK_THROWS_AS(rai::build_knn_weights(few, 0), rai::InputError);
}

TEST_CASE("weights matrix validation") {
  CHECK_THROWS_WITH(rai::WeightsMatrix(2, {1.0, 0.0, 0.0, 0.0}, false),
                    Catch::Matchers::ContainsSubstring("diagonal"));
  CHECK_THROWS_WITH(rai::WeightsMatrix(2, {0.0, -1.0, 0.0, 0.0}, false),
                    Catch::Matchers::ContainsSubstring("negative"));
  CHECK_THROWS_AS(rai::WeightsMatrix(2, {0.0, 1.0, 1.0}, false), rai::InputError);
}

TEST_CASE("queen contiguity from shared boundary vertices") {
  // 2x2 block of squares; all share the center vertex, so queen makes a
  // complete graph.
  rai::RegionSet set;
  auto add = [&](const std::string& code, double x, double y) {
    rai::Region r;
    r.code = code;
    rai::Polygon poly;
    poly.exterior = {{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}, {x, y}};
    r.polygons.push_back(poly);
    r.box = rai::polygon_box(poly);
    set.regions.push_back(r);
  };
  add("NW", 0, 1);
  add("NE", 1, 1);
  add("SW", 0, 0);
  add("SE", 1, 0);
  const rai::WeightsMatrix w = rai::build_queen_weights(set);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) {
        CHECK(w.at(i, j) == 0.0);
      } else {
        CHECK(w.at(i, j) > 0.0);
      }
    }
  }

  // A detached island has no neighbors: its row stays all-zero.
  rai::Region island;
  island.code = "ISL";
  rai::Polygon poly;
  poly.exterior = {{10, 10}, {11, 10}, {11, 11}, {10, 11}, {10, 10}};
  island.polygons.push_back(poly);
  island.box = rai::polygon_box(poly);
  set.regions.push_back(island);
  const rai::WeightsMatrix w5 = rai::build_queen_weights(set);
  double island_row = 0.0;
  for (std::size_t j = 0; j < 5; ++j) island_row += w5.at(4, j);
  CHECK(island_row == 0.0);
}

TEST_CASE("s0 s1 s2 on a known matrix") {
  // Row-standardized rook weights on a 2x2 grid: each cell has 2 neighbors
  // at weight 1/2. S0 = 4; symmetric matrix so S1 = sum (2 w_ij)^2 / 2 = 8 *
  // (1/2)^2... computed by hand below.
  rai::WeightsMatrix w = rai::WeightsMatrix::from_binary(
      4, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 3}, {3, 1}, {2, 3}, {3, 2}}, true);
  CHECK_THAT(w.sum(), Catch::Matchers::WithinAbs(4.0, 1e-12));
  // Every nonzero pair has w_ij = w_ji = 1/2, so (w_ij + w_ji)^2 = 1; there
  // are 8 ordered nonzero pairs, S1 = 8/2 = 4.
  CHECK_THAT(w.s1(), Catch::Matchers::WithinAbs(4.0, 1e-12));
  // Each row and column sums to 1, so S2 = sum (1 + 1)^2 = 16.
  CHECK_THAT(w.s2(), Catch::Matchers::WithinAbs(16.0, 1e-12));
}
