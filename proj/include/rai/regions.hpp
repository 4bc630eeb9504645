#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"
#include "rai/geojson.hpp"

namespace rai {

struct Region {
  std::string code;
  std::string name;
  std::vector<Polygon> polygons;
  GeoBox box;
};

// Administrative regions keyed by unique code, sorted ascending by code.
struct RegionSet {
  std::vector<Region> regions;

  const Region* find(const std::string& code) const {
    const auto it = std::lower_bound(
        regions.begin(), regions.end(), code,
        [](const Region& r, const std::string& c) { return r.code < c; });
    if (it == regions.end() || it->code != code) return nullptr;
    return &*it;
  }
};

// Builds a RegionSet from polygon features. Features sharing a code merge
// their polygons (multi-part regions split across features are common).
inline RegionSet region_set_from_features(const FeatureCollection& fc,
                                          const std::string& source,
                                          const std::string& code_key = "code",
                                          const std::string& name_key = "name") {
  std::map<std::string, Region> by_code;
  for (std::size_t i = 0; i < fc.features.size(); ++i) {
    const Feature& f = fc.features[i];
    const std::string ctx = source + ": feature " + std::to_string(i);
    if (f.polygons.empty()) {
      throw InputError(ctx + ": region feature has no polygon geometry");
    }
    const auto code_it = f.properties.find(code_key);
    if (code_it == f.properties.end() || code_it->second.empty()) {
      throw InputError(ctx + ": missing region code property '" + code_key + "'");
    }
    Region& region = by_code[code_it->second];
    region.code = code_it->second;
    if (region.name.empty()) {
      const auto name_it = f.properties.find(name_key);
      if (name_it != f.properties.end()) region.name = name_it->second;
    }
    for (const Polygon& poly : f.polygons) {
      region.box.expand(polygon_box(poly));
      region.polygons.push_back(poly);
    }
  }
  if (by_code.empty()) throw InputError(source + ": no regions found");

  RegionSet set;
  set.regions.reserve(by_code.size());
  for (auto& [code, region] : by_code) set.regions.push_back(std::move(region));
  return set;
}

inline RegionSet load_regions(const std::string& path, const std::string& code_key = "code",
                              const std::string& name_key = "name") {
  return region_set_from_features(load_vector(path), path, code_key, name_key);
}

}  // namespace rai
