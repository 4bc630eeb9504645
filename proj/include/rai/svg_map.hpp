#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"
#include "rai/regions.hpp"

namespace rai {

struct ChoroplethResult {
  std::string svg;
  std::vector<std::string> warnings;  // indicator rows without geometry
};

namespace detail {

inline const char* kChoroplethColors[5] = {"#ffffcc", "#a1dab4", "#41b6c4", "#2c7fb8",
                                           "#253494"};

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt4g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Linear-interpolated quantile (type 7) of an ascending-sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Equirectangular SVG choropleth: one <path> per region polygon, 5-class
// quantile fill over the defined values, hatched fill for undefined regions.
// Output is byte-deterministic for fixed input.
inline ChoroplethResult render_choropleth(
    const std::vector<std::pair<std::string, std::optional<double>>>& values_by_code,
    const RegionSet& regions, const std::string& field_label) {
  if (regions.regions.empty()) throw InputError("choropleth: no region geometries");

  ChoroplethResult result;
  std::map<std::string, std::optional<double>> values;
  for (const auto& [code, value] : values_by_code) {
    values[code] = value;
    if (!regions.find(code)) {
      result.warnings.push_back("indicator region '" + code + "' has no geometry");
    }
  }

  std::vector<double> defined;
  for (const auto& [code, value] : values) {
    if (value) defined.push_back(*value);
  }
  std::sort(defined.begin(), defined.end());
  double breaks[4] = {0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    breaks[i] = detail::quantile_sorted(defined, (i + 1) / 5.0);
  }
  auto class_of = [&](double v) {
    int c = 0;
    while (c < 4 && v >= breaks[c]) ++c;
    return c;
  };

  GeoBox box;
  for (const Region& region : regions.regions) box.expand(region.box);
  const double pad = 10.0;
  const double extent_lon = std::max(box.max_lon - box.min_lon, 1e-9);
  const double extent_lat = std::max(box.max_lat - box.min_lat, 1e-9);
  const double map_w = 1000.0 - 2 * pad;
  const double scale = map_w / extent_lon;
  const double map_h = extent_lat * scale;
  const double legend_h = 150.0;
  const double total_h = map_h + 2 * pad + legend_h;
  auto px = [&](const GeoPoint& p) {
    return std::make_pair(pad + (p.lon - box.min_lon) * scale,
                          pad + (box.max_lat - p.lat) * scale);
  };

  std::string& svg = result.svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"" +
         detail::fmt2(total_h) + "\" viewBox=\"0 0 1000 " + detail::fmt2(total_h) + "\">\n";
  svg += "<defs>\n<pattern id=\"hatch\" width=\"6\" height=\"6\" "
         "patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">\n"
         "<rect width=\"6\" height=\"6\" fill=\"#f0f0f0\"/>\n"
         "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#888888\" stroke-width=\"2\"/>\n"
         "</pattern>\n</defs>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"" + detail::fmt2(total_h) +
         "\" fill=\"#ffffff\"/>\n";

  std::vector<std::string> undefined_codes;
  for (const Region& region : regions.regions) {
    const auto it = values.find(region.code);
    const std::optional<double> value = (it != values.end()) ? it->second : std::nullopt;
    std::string fill;
    std::string value_text;
    if (value) {
      fill = detail::kChoroplethColors[class_of(*value)];
      value_text = detail::fmt4g(*value);
    } else {
      fill = "url(#hatch)";
      value_text = "undefined";
      undefined_codes.push_back(region.code);
    }
    for (const Polygon& poly : region.polygons) {
      std::string d;
      auto add_ring = [&](const Ring& ring) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
          const auto [x, y] = px(ring[i]);
          d += (i == 0 ? "M" : "L") + detail::fmt2(x) + " " + detail::fmt2(y);
        }
        d += "Z";
      };
      add_ring(poly.exterior);
      for (const Ring& hole : poly.holes) add_ring(hole);
      svg += "<path d=\"" + d + "\" fill=\"" + fill +
             "\" fill-rule=\"evenodd\" stroke=\"#333333\" stroke-width=\"0.5\">";
      svg += "<title>" + detail::xml_escape(region.code + ": " + value_text) + "</title>";
      svg += "</path>\n";
    }
  }

  // Legend: field name, five class swatches, hatched swatch with the
  // undefined region codes.
  const double ly = map_h + 2 * pad;
  svg += "<text x=\"10\" y=\"" + detail::fmt2(ly + 16) +
         "\" font-family=\"sans-serif\" font-size=\"14\" font-weight=\"bold\">" +
         detail::xml_escape(field_label) + " (5-class quantiles)</text>\n";
  const double lo_bound = defined.empty() ? 0.0 : defined.front();
  const double hi_bound = defined.empty() ? 0.0 : defined.back();
  double bounds[6] = {lo_bound, breaks[0], breaks[1], breaks[2], breaks[3], hi_bound};
  for (int i = 0; i < 5; ++i) {
    const double sy = ly + 26 + i * 18;
    svg += "<rect x=\"10\" y=\"" + detail::fmt2(sy) + "\" width=\"24\" height=\"14\" fill=\"" +
           detail::kChoroplethColors[i] + "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
    svg += "<text x=\"42\" y=\"" + detail::fmt2(sy + 11) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + detail::fmt4g(bounds[i]) +
           " \xE2\x80\x93 " + detail::fmt4g(bounds[i + 1]) + "</text>\n";
  }
  const double hy = ly + 26 + 5 * 18;
  svg += "<rect x=\"10\" y=\"" + detail::fmt2(hy) +
         "\" width=\"24\" height=\"14\" fill=\"url(#hatch)\" stroke=\"#333333\" "
         "stroke-width=\"0.5\"/>\n";
  std::string undefined_label = "undefined: ";
  if (undefined_codes.empty()) {
    undefined_label += "none";
  } else {
    for (std::size_t i = 0; i < undefined_codes.size(); ++i) {
      if (i) undefined_label += ", ";
      undefined_label += undefined_codes[i];
    }
  }
  svg += "<text x=\"42\" y=\"" + detail::fmt2(hy + 11) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + detail::xml_escape(undefined_label) +
         "</text>\n";
  svg += "</svg>\n";
  return result;
}

inline void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

}  // namespace rai
