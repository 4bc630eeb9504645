#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "rai/road_index.hpp"
#include "rai/rtree.hpp"
#include "support/oracles.hpp"

using rai::GeoBox;
using rai::GeoPoint;
using rai_test::Rand;

namespace {

GeoBox random_box(Rand& rng, double lo, double hi, double max_size) {
  GeoBox box;
  const double x = rng.uniform(lo, hi);
  const double y = rng.uniform(lo, hi);
  box.expand(GeoPoint{x, y});
  box.expand(GeoPoint{x + rng.uniform(0, max_size), y + rng.uniform(0, max_size)});
  return box;
}

rai::RoadNetwork random_network(Rand& rng, int n_segments, double lon0, double lat0,
                                double extent) {
  rai::RoadNetwork net;
  net.class_names.push_back("residential");
  for (int i = 0; i < n_segments; ++i) {
    GeoPoint a{lon0 + rng.uniform(0, extent), lat0 + rng.uniform(0, extent)};
    GeoPoint b{a.lon + rng.uniform(-0.02, 0.02), a.lat + rng.uniform(-0.02, 0.02)};
    if (a.lon == b.lon && a.lat == b.lat) b.lon += 1e-4;
    net.segments.push_back({a, b, 0});
  }
  return net;
}

}  // namespace

TEST_CASE("rtree window query equals linear scan") {
  Rand rng(31);
  std::vector<GeoBox> boxes;
  for (int i = 0; i < 500; ++i) boxes.push_back(random_box(rng, -10, 10, 0.8));
  const rai::StaticRTree tree(boxes);
  REQUIRE(tree.size() == boxes.size());

  for (int q = 0; q < 200; ++q) {
    const GeoBox window = random_box(rng, -11, 11, 3.0);
    auto got = tree.query_window(window);
    std::sort(got.begin(), got.end());
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (boxes[i].intersects(window)) expected.push_back(i);
    }
    REQUIRE(got == expected);
  }
}

TEST_CASE("rtree handles tiny and empty inputs") {
  const rai::StaticRTree empty((std::vector<GeoBox>()));
  CHECK(empty.query_window(GeoBox{-180, -90, 180, 90}).empty());

  std::vector<GeoBox> one(1);
  one[0].expand(GeoPoint{1, 1});
  const rai::StaticRTree single(one);
  CHECK(single.query_window(GeoBox{0, 0, 2, 2}).size() == 1);
  CHECK(single.query_window(GeoBox{3, 3, 4, 4}).empty());
}

TEST_CASE("single segment one kilometer due north") {
  // A segment running east-west, 1000 m north of the query point.
  const double lat_offset = 1000.0 / rai::kMetersPerDegree;
  rai::RoadNetwork net;
  net.segments.push_back({{-0.01, lat_offset}, {0.01, lat_offset}, 0});
  const rai::RoadIndex index(net);
  const auto near = index.nearest({0, 0});
  CHECK_THAT(near.meters, Catch::Matchers::WithinAbs(1000.0, 1.0));
  // The foot lands straight north.
  CHECK_THAT(near.foot.lon, Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("cell center lying on a segment has zero distance") {
  rai::RoadNetwork net;
  net.segments.push_back({{-0.01, 0.0}, {0.01, 0.0}, 0});
  const rai::RoadIndex index(net);
  CHECK(index.nearest({0.0, 0.0}).meters < 1e-9);
}

TEST_CASE("indexed nearest equals linear scan on random networks") {
  Rand rng(77);
  const rai::RoadNetwork net = random_network(rng, 50, 10.0, 45.0, 0.5);
  const rai::RoadIndex index(net);
  for (int i = 0; i < 500; ++i) {
    const GeoPoint p{10.0 + rng.uniform(-0.2, 0.7), 45.0 + rng.uniform(-0.2, 0.7)};
    const auto fast = index.nearest(p, rng.uniform(10.0, 5000.0));
    const auto slow = index.linear_nearest(p);
    REQUIRE(fast.segment == slow.segment);
    REQUIRE(fast.meters == slow.meters);  // same arithmetic path, bit-identical
  }
}

TEST_CASE("nearest_within agrees with nearest at the radius boundary") {
  Rand rng(78);
  const rai::RoadNetwork net = random_network(rng, 40, -3.0, 50.0, 0.4);
  const rai::RoadIndex index(net);
  for (int i = 0; i < 300; ++i) {
    const GeoPoint p{-3.0 + rng.uniform(-0.1, 0.5), 50.0 + rng.uniform(-0.1, 0.5)};
    const double radius = rng.uniform(50.0, 20000.0);
    const auto exact = index.linear_nearest(p);
    const auto within = index.nearest_within(p, radius);
    if (exact.meters <= radius) {
      REQUIRE(within.has_value());
      REQUIRE(within->segment == exact.segment);
      REQUIRE(within->meters == exact.meters);
    } else {
      REQUIRE_FALSE(within.has_value());
    }
  }
}

TEST_CASE("empty road index refuses nearest queries") {
  const rai::RoadIndex index{rai::RoadNetwork{}};
  CHECK(index.empty());
  CHECK_THROWS_WITH(index.nearest({0, 0}),
                    Catch::Matchers::ContainsSubstring("no all-season roads loaded"));
  CHECK_THROWS_AS(index.nearest_within({0, 0}, 100.0), rai::InputError);
}

TEST_CASE("nearest works when the point is far from every segment") {
  rai::RoadNetwork net;
  net.segments.push_back({{10.0, 45.0}, {10.01, 45.0}, 0});
  const rai::RoadIndex index(net);
  // Start hint tiny; the window has to expand many times.
  const auto near = index.nearest({-170.0, -80.0}, 1.0);
  const auto slow = index.linear_nearest({-170.0, -80.0});
  CHECK(near.meters == slow.meters);
}
