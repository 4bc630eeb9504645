#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rai/error.hpp"
#include "rai/geo.hpp"

namespace rai {

// One GeoJSON feature: either line parts or polygon parts, never both.
struct Feature {
  std::vector<Polyline> polylines;
  std::vector<Polygon> polygons;
  std::map<std::string, std::string> properties;
};

struct FeatureCollection {
  std::vector<Feature> features;
};

namespace detail {

inline std::string feature_ctx(const std::string& path, std::size_t index) {
  return path + ": feature " + std::to_string(index);
}

inline GeoPoint parse_position(const nlohmann::json& pos, const std::string& ctx) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw InputError(ctx + ": position must be a [lon, lat] number array");
  }
  GeoPoint p{pos[0].get<double>(), pos[1].get<double>()};
  require_valid(p, ctx);
  return p;
}

// Drops consecutive duplicate vertices; a real line must keep >= 2.
inline Polyline parse_line_string(const nlohmann::json& coords, const std::string& ctx) {
  if (!coords.is_array() || coords.size() < 2) {
    throw InputError(ctx + ": LineString needs at least 2 positions");
  }
  Polyline line;
  line.vertices.reserve(coords.size());
  for (const auto& pos : coords) {
    GeoPoint p = parse_position(pos, ctx);
    if (!line.vertices.empty() && line.vertices.back().lon == p.lon &&
        line.vertices.back().lat == p.lat) {
      continue;
    }
    line.vertices.push_back(p);
  }
  if (line.vertices.size() < 2) {
    throw InputError(ctx + ": degenerate LineString (all points identical)");
  }
  return line;
}

inline Ring parse_ring(const nlohmann::json& coords, const std::string& ctx) {
  if (!coords.is_array()) throw InputError(ctx + ": ring must be an array");
  Ring ring;
  ring.reserve(coords.size());
  for (const auto& pos : coords) ring.push_back(parse_position(pos, ctx));
  require_ring(ring, ctx);
  return ring;
}

inline Polygon parse_polygon(const nlohmann::json& coords, const std::string& ctx) {
  if (!coords.is_array() || coords.empty()) {
    throw InputError(ctx + ": Polygon needs at least an exterior ring");
  }
  Polygon poly;
  poly.exterior = parse_ring(coords[0], ctx);
  if (ring_self_intersects(poly.exterior)) {
    throw InputError(ctx + ": exterior ring is self-intersecting");
  }
  for (std::size_t i = 1; i < coords.size(); ++i) {
    poly.holes.push_back(parse_ring(coords[i], ctx));
  }
  return poly;
}

inline std::string property_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace detail

// RFC 7946 FeatureCollection with LineString / MultiLineString / Polygon /
// MultiPolygon geometries. Anything else is rejected with the feature index.
inline FeatureCollection load_vector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    throw InputError(path + ": top-level object must be a GeoJSON FeatureCollection");
  }
  const auto feats = doc.find("features");
  if (feats == doc.end() || !feats->is_array()) {
    throw InputError(path + ": FeatureCollection has no features array");
  }

  FeatureCollection fc;
  fc.features.reserve(feats->size());
  for (std::size_t i = 0; i < feats->size(); ++i) {
    const auto& jf = (*feats)[i];
    const std::string ctx = detail::feature_ctx(path, i);
    if (!jf.is_object() || jf.value("type", "") != "Feature") {
      throw InputError(ctx + ": not a Feature object");
    }
    const auto geom = jf.find("geometry");
    if (geom == jf.end() || geom->is_null() || !geom->is_object()) {
      throw InputError(ctx + ": missing geometry");
    }
    const std::string gtype = geom->value("type", "");
    const auto coords = geom->find("coordinates");
    if (coords == geom->end()) throw InputError(ctx + ": geometry has no coordinates");

    Feature feature;
    if (gtype == "LineString") {
      feature.polylines.push_back(detail::parse_line_string(*coords, ctx));
    } else if (gtype == "MultiLineString") {
      for (const auto& part : *coords) {
        feature.polylines.push_back(detail::parse_line_string(part, ctx));
      }
      if (feature.polylines.empty()) throw InputError(ctx + ": empty MultiLineString");
    } else if (gtype == "Polygon") {
      feature.polygons.push_back(detail::parse_polygon(*coords, ctx));
    } else if (gtype == "MultiPolygon") {
      for (const auto& part : *coords) {
        feature.polygons.push_back(detail::parse_polygon(part, ctx));
      }
      if (feature.polygons.empty()) throw InputError(ctx + ": empty MultiPolygon");
    } else {
      throw InputError(ctx + ": unsupported geometry type '" + gtype + "'");
    }

    const auto props = jf.find("properties");
    if (props != jf.end() && props->is_object()) {
      for (const auto& [key, value] : props->items()) {
        if (value.is_null()) continue;
        feature.properties[key] = detail::property_to_string(value);
      }
    }
    fc.features.push_back(std::move(feature));
  }
  return fc;
}

}  // namespace rai
