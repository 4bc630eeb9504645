#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"
#include "rai/geojson.hpp"

namespace rai {

// OSM highway classes that ensure year-round automobile access. Motorways and
// their links are deliberately absent: elevated/limited-access roads do not
// serve adjacent rural cells.
inline const std::set<std::string>& default_all_season_tags() {
  static const std::set<std::string> tags = {
      "trunk",          "primary",      "secondary",      "tertiary",
      "unclassified",   "residential",  "living_street",  "road",
      "trunk_link",     "primary_link", "secondary_link", "tertiary_link",
  };
  return tags;
}

struct RoadSegment {
  GeoPoint a;
  GeoPoint b;
  std::uint32_t class_id = 0;  // index into RoadNetwork::class_names
};

struct RoadNetwork {
  std::vector<RoadSegment> segments;
  std::vector<std::string> class_names;
  std::size_t source_feature_count = 0;
  std::size_t kept_feature_count = 0;
  std::size_t missing_tag_count = 0;
  std::map<std::string, std::size_t> kept_per_class;     // features kept
  std::map<std::string, std::size_t> dropped_per_class;  // features dropped

  bool empty() const { return segments.empty(); }
};

// Keeps features whose "highway" property is in `accepted`, explodes their
// polylines (and polygon rings, for closed ways) into segments. Features
// without the tag are skipped and counted, not errors.
inline RoadNetwork filter_all_season_roads(
    const FeatureCollection& fc,
    const std::set<std::string>& accepted = default_all_season_tags()) {
  RoadNetwork net;
  net.source_feature_count = fc.features.size();
  std::map<std::string, std::uint32_t> class_ids;

  auto add_polyline = [&](const std::vector<GeoPoint>& pts, std::uint32_t class_id) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i].lon == pts[i + 1].lon && pts[i].lat == pts[i + 1].lat) continue;
      net.segments.push_back({pts[i], pts[i + 1], class_id});
    }
  };

  for (const Feature& f : fc.features) {
    const auto it = f.properties.find("highway");
    if (it == f.properties.end()) {
      ++net.missing_tag_count;
      continue;
    }
    const std::string& cls = it->second;
    if (!accepted.count(cls)) {
      ++net.dropped_per_class[cls];
      continue;
    }
    ++net.kept_per_class[cls];
    ++net.kept_feature_count;
    auto [cid_it, inserted] = class_ids.try_emplace(cls, static_cast<std::uint32_t>(net.class_names.size()));
    if (inserted) net.class_names.push_back(cls);
    for (const Polyline& line : f.polylines) add_polyline(line.vertices, cid_it->second);
    for (const Polygon& poly : f.polygons) {
      add_polyline(poly.exterior, cid_it->second);
      for (const Ring& hole : poly.holes) add_polyline(hole, cid_it->second);
    }
  }
  return net;
}

}  // namespace rai
