#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"
#include "rai/roads.hpp"
#include "rai/rtree.hpp"

namespace rai {

struct NearestRoad {
  double meters = std::numeric_limits<double>::infinity();
  GeoPoint foot;
  std::size_t segment = 0;
};

// Spatial index over road segments. Nearest queries run an expanding-window
// search whose result provably equals the linear-scan minimum; ties on
// distance break towards the lower segment index in both paths.
class RoadIndex {
 public:
  RoadIndex() = default;

  explicit RoadIndex(const RoadNetwork& net) : segments_(net.segments) {
    std::vector<GeoBox> boxes(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      boxes[i].expand(segments_[i].a);
      boxes[i].expand(segments_[i].b);
    }
    tree_ = StaticRTree(boxes);
  }

  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  const std::vector<RoadSegment>& segments() const { return segments_; }

  std::vector<std::size_t> query_window(const GeoBox& window) const {
    return tree_.query_window(window);
  }

  // Exact nearest segment. `radius_hint_m` seeds the first search window.
  NearestRoad nearest(const GeoPoint& p, double radius_hint_m = 2000.0) const {
    if (empty()) throw InputError("no all-season roads loaded");
    double radius = std::max(radius_hint_m, 1.0);
    const double half_circumference = kPi * kEarthRadiusM;
    while (true) {
      NearestRoad best = scan_window(p, cap_bounding_box(p, inflate(radius)));
      if (best.meters <= radius) return best;
      if (std::isfinite(best.meters)) {
        // Candidates exist but sit beyond the window radius; one more pass at
        // their distance captures anything closer.
        NearestRoad confirmed = scan_window(p, cap_bounding_box(p, inflate(best.meters)));
        return confirmed.meters <= best.meters ? confirmed : best;
      }
      if (radius >= half_circumference) return linear_nearest(p);
      radius = std::min(radius * 8.0, half_circumference);
    }
  }

  // Nearest segment if its distance is <= radius_m, else nullopt. When a
  // result is returned it equals nearest(p).
  std::optional<NearestRoad> nearest_within(const GeoPoint& p, double radius_m) const {
    if (empty()) throw InputError("no all-season roads loaded");
    NearestRoad best = scan_window(p, cap_bounding_box(p, inflate(radius_m)));
    if (best.meters > radius_m) return std::nullopt;
    return best;
  }

  // Brute-force reference path; exposed so pipelines can bypass the tree.
  NearestRoad linear_nearest(const GeoPoint& p) const {
    if (empty()) throw InputError("no all-season roads loaded");
    NearestRoad best;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      consider(p, i, best);
    }
    return best;
  }

 private:
  // Guards the search window against rounding in the cap-box trigonometry so
  // segments at exactly the query radius are never missed.
  static double inflate(double radius_m) { return radius_m * (1.0 + 1e-9) + 1e-6; }

  NearestRoad scan_window(const GeoPoint& p, const GeoBox& window) const {
    NearestRoad best;
    tree_.visit_window(window, [&](std::size_t i) { consider(p, i, best); });
    return best;
  }

  void consider(const GeoPoint& p, std::size_t i, NearestRoad& best) const {
    const SegmentDistance d = point_segment_distance(p, segments_[i].a, segments_[i].b);
    if (d.meters < best.meters || (d.meters == best.meters && i < best.segment)) {
      best = {d.meters, d.foot, i};
    }
  }

  std::vector<RoadSegment> segments_;
  StaticRTree tree_;
};

}  // namespace rai
