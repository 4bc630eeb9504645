#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rai/error.hpp"

namespace rai {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

// Meters per degree of latitude on the sphere (also per degree of longitude
// at the equator).
inline constexpr double kMetersPerDegree = kEarthRadiusM * kDegToRad;

// WGS84 geographic coordinate, degrees. lon in [-180, 180], lat in [-90, 90].
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

inline bool geo_point_valid(const GeoPoint& p) {
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= -180.0 &&
         p.lon <= 180.0 && p.lat >= -90.0 && p.lat <= 90.0;
}

inline void require_valid(const GeoPoint& p, const std::string& context) {
  if (!geo_point_valid(p)) {
    throw InputError(context + ": coordinate (" + std::to_string(p.lon) + ", " +
                     std::to_string(p.lat) + ") outside lon [-180,180] / lat [-90,90]");
  }
}

// Normalizes a longitude difference to [-180, 180].
inline double wrap_lon_delta(double d) {
  d = std::fmod(d, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d < -180.0) d += 360.0;
  return d;
}

// Great-circle distance on a sphere of radius kEarthRadiusM.
inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double phi_a = a.lat * kDegToRad;
  const double phi_b = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlam = wrap_lon_delta(b.lon - a.lon) * kDegToRad;
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlam / 2.0);
  const double h = sp * sp + std::cos(phi_a) * std::cos(phi_b) * sl * sl;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

// Axis-aligned lon/lat box. Does not model antimeridian crossing; boxes that
// would cross it are widened to the full longitude range by the helpers below.
struct GeoBox {
  double min_lon = std::numeric_limits<double>::infinity();
  double min_lat = std::numeric_limits<double>::infinity();
  double max_lon = -std::numeric_limits<double>::infinity();
  double max_lat = -std::numeric_limits<double>::infinity();

  bool empty() const { return min_lon > max_lon || min_lat > max_lat; }

  void expand(const GeoPoint& p) {
    min_lon = std::min(min_lon, p.lon);
    min_lat = std::min(min_lat, p.lat);
    max_lon = std::max(max_lon, p.lon);
    max_lat = std::max(max_lat, p.lat);
  }

  void expand(const GeoBox& b) {
    min_lon = std::min(min_lon, b.min_lon);
    min_lat = std::min(min_lat, b.min_lat);
    max_lon = std::max(max_lon, b.max_lon);
    max_lat = std::max(max_lat, b.max_lat);
  }

  bool intersects(const GeoBox& b) const {
    return !(b.min_lon > max_lon || b.max_lon < min_lon || b.min_lat > max_lat ||
             b.max_lat < min_lat);
  }

  bool contains(const GeoPoint& p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
  }
};

// Bounding box of the spherical cap of radius `radius_m` around `center`.
// Every point within `radius_m` of `center` lies inside the returned box.
// Longitude extent uses the small-circle tangent formula; caps that reach a
// pole or cross the antimeridian get the full longitude range.
inline GeoBox cap_bounding_box(const GeoPoint& center, double radius_m) {
  GeoBox box;
  const double ang = radius_m / kEarthRadiusM;  // radians
  const double lat_min = center.lat - ang * kRadToDeg;
  const double lat_max = center.lat + ang * kRadToDeg;
  box.min_lat = std::max(-90.0, lat_min);
  box.max_lat = std::min(90.0, lat_max);
  const double cos_phi = std::cos(center.lat * kDegToRad);
  double sin_ratio = 1.0;
  if (ang < kPi / 2.0 && cos_phi > 0.0) {
    sin_ratio = std::sin(ang) / cos_phi;
  }
  if (lat_min <= -90.0 || lat_max >= 90.0 || sin_ratio >= 1.0) {
    box.min_lon = -180.0;
    box.max_lon = 180.0;
    return box;
  }
  const double dlon = std::asin(sin_ratio) * kRadToDeg;
  if (center.lon - dlon < -180.0 || center.lon + dlon > 180.0) {
    box.min_lon = -180.0;
    box.max_lon = 180.0;
  } else {
    box.min_lon = center.lon - dlon;
    box.max_lon = center.lon + dlon;
  }
  return box;
}

// Nearest point on segment [a, b] to p, with distance in meters. The
// perpendicular foot is found on a local equirectangular projection centered
// at p; the result distance is measured by haversine and never exceeds the
// distance to either endpoint.
struct SegmentDistance {
  double meters = 0.0;
  GeoPoint foot;
};

inline SegmentDistance point_segment_distance(const GeoPoint& p, const GeoPoint& a,
                                              const GeoPoint& b) {
  const double cos_phi = std::max(std::cos(p.lat * kDegToRad), 1e-12);
  const double ax = wrap_lon_delta(a.lon - p.lon) * kDegToRad * cos_phi;
  const double ay = (a.lat - p.lat) * kDegToRad;
  const double bx = wrap_lon_delta(b.lon - p.lon) * kDegToRad * cos_phi;
  const double by = (b.lat - p.lat) * kDegToRad;
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;

  SegmentDistance best{haversine_m(p, a), a};
  const double db = haversine_m(p, b);
  if (db < best.meters) best = {db, b};
  if (len2 <= 0.0) return best;  // degenerate segment, endpoint distance

  const double t = std::clamp(-(ax * dx + ay * dy) / len2, 0.0, 1.0);
  GeoPoint foot;
  foot.lon = p.lon + wrap_lon_delta((ax + t * dx) / cos_phi * kRadToDeg);
  foot.lat = std::clamp(p.lat + (ay + t * dy) * kRadToDeg, -90.0, 90.0);
  if (foot.lon > 180.0) foot.lon -= 360.0;
  if (foot.lon < -180.0) foot.lon += 360.0;
  const double df = haversine_m(p, foot);
  if (df < best.meters) best = {df, foot};
  return best;
}

// Closed ring: first vertex equals last, at least 4 entries.
using Ring = std::vector<GeoPoint>;

struct Polyline {
  std::vector<GeoPoint> vertices;  // >= 2, no consecutive duplicates
};

struct Polygon {
  Ring exterior;
  std::vector<Ring> holes;
};

inline bool ring_closed(const Ring& r) {
  return r.size() >= 4 && r.front().lon == r.back().lon && r.front().lat == r.back().lat;
}

inline void require_ring(const Ring& r, const std::string& context) {
  if (r.size() < 4) {
    throw InputError(context + ": ring has " + std::to_string(r.size()) +
                     " points, need at least 4 (closed)");
  }
  if (!ring_closed(r)) {
    throw InputError(context + ": ring is not closed (first point != last point)");
  }
  for (const GeoPoint& p : r) require_valid(p, context);
}

inline GeoBox ring_box(const Ring& r) {
  GeoBox box;
  for (const GeoPoint& p : r) box.expand(p);
  return box;
}

inline GeoBox polygon_box(const Polygon& poly) { return ring_box(poly.exterior); }

namespace detail {

// True when p lies exactly on segment [a, b] (collinear and inside the
// segment's bounding box).
inline bool on_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  const double cross =
      (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
  if (cross != 0.0) return false;
  return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) &&
         p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat);
}

inline bool point_on_ring(const GeoPoint& p, const Ring& ring) {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (on_segment(p, ring[i], ring[i + 1])) return true;
  }
  return false;
}

// Even-odd ray crossing count parity for one ring (ray towards +lon).
inline bool ring_crossings_odd(const GeoPoint& p, const Ring& ring) {
  bool odd = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[i + 1];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x_int = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x_int) odd = !odd;
    }
  }
  return odd;
}

}  // namespace detail

// Even-odd rule over exterior and interior rings combined; points exactly on
// any edge (outer boundary or hole boundary) count as inside.
inline bool point_in_polygon(const GeoPoint& p, const Polygon& poly) {
  if (detail::point_on_ring(p, poly.exterior)) return true;
  for (const Ring& hole : poly.holes) {
    if (detail::point_on_ring(p, hole)) return true;
  }
  bool odd = detail::ring_crossings_odd(p, poly.exterior);
  for (const Ring& hole : poly.holes) {
    if (detail::ring_crossings_odd(p, hole)) odd = !odd;
  }
  return odd;
}

namespace detail {

enum class SegRel { kDisjoint, kProper, kTouch };

inline int orient(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
  const double v = (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
  return (v > 0.0) - (v < 0.0);
}

inline SegRel segments_relation(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c,
                                const GeoPoint& d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) {
    return SegRel::kProper;
  }
  if ((o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
      (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d))) {
    return SegRel::kTouch;
  }
  return SegRel::kDisjoint;
}

}  // namespace detail

// O(n^2) with a sorted sweep over edge boxes; adequate for ingest-time checks.
// Adjacent edges sharing exactly their common endpoint are not intersections.
inline bool ring_self_intersects(const Ring& ring) {
  const std::size_t n = ring.size() - 1;  // edge count
  if (n < 3) return false;
  struct Edge {
    double min_lon, max_lon;
    std::size_t i;
  };
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({std::min(ring[i].lon, ring[i + 1].lon),
                     std::max(ring[i].lon, ring[i + 1].lon), i});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.min_lon < b.min_lon; });
  for (std::size_t ei = 0; ei < n; ++ei) {
    for (std::size_t ej = ei + 1; ej < n; ++ej) {
      if (edges[ej].min_lon > edges[ei].max_lon) break;
      const std::size_t i = std::min(edges[ei].i, edges[ej].i);
      const std::size_t j = std::max(edges[ei].i, edges[ej].i);
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const auto rel = detail::segments_relation(ring[i], ring[i + 1], ring[j], ring[j + 1]);
      if (rel == detail::SegRel::kProper) return true;
      if (rel == detail::SegRel::kTouch && !adjacent) return true;
      if (rel == detail::SegRel::kTouch && adjacent) {
        // Adjacent edges may only share their single common endpoint.
        const GeoPoint& shared = (j == i + 1) ? ring[j] : ring[0];
        const GeoPoint& tail_a = (j == i + 1) ? ring[i] : ring[j];
        const GeoPoint& tail_b = (j == i + 1) ? ring[j + 1] : ring[1];
        if (detail::on_segment(tail_a, shared, tail_b) ||
            detail::on_segment(tail_b, shared, tail_a)) {
          return true;  // edges fold back over each other
        }
      }
    }
  }
  return false;
}

// Planar shoelace area in squared degrees, signed (CCW positive). Used only
// for centroid weighting, never as a physical area.
inline double ring_signed_area(const Ring& r) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    acc += r[i].lon * r[i + 1].lat - r[i + 1].lon * r[i].lat;
  }
  return acc / 2.0;
}

// Area-weighted centroid of a polygon set (holes subtract). Falls back to the
// vertex mean when the total area is degenerate.
inline GeoPoint polygons_centroid(const std::vector<Polygon>& polys) {
  double area_sum = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  auto accumulate_ring = [&](const Ring& r, double sign) {
    const double area = ring_signed_area(r);
    if (area == 0.0) return;
    double rx = 0.0, ry = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double w = r[i].lon * r[i + 1].lat - r[i + 1].lon * r[i].lat;
      rx += (r[i].lon + r[i + 1].lon) * w;
      ry += (r[i].lat + r[i + 1].lat) * w;
    }
    // rx/6A is the ring centroid independent of winding; weight by |A|, signed
    // negative for holes.
    area_sum += sign * std::abs(area);
    const double scale = sign * std::abs(area) / (6.0 * area);
    cx += rx * scale;
    cy += ry * scale;
  };
  for (const Polygon& poly : polys) {
    accumulate_ring(poly.exterior, 1.0);
    for (const Ring& hole : poly.holes) accumulate_ring(hole, -1.0);
  }
  if (std::abs(area_sum) > 1e-30) {
    return GeoPoint{cx / area_sum, cy / area_sum};
  }
  double sx = 0.0, sy = 0.0;
  std::size_t count = 0;
  for (const Polygon& poly : polys) {
    for (std::size_t i = 0; i + 1 < poly.exterior.size(); ++i) {
      sx += poly.exterior[i].lon;
      sy += poly.exterior[i].lat;
      ++count;
    }
  }
  if (count == 0) throw InputError("centroid of empty polygon set");
  return GeoPoint{sx / static_cast<double>(count), sy / static_cast<double>(count)};
}

}  // namespace rai
