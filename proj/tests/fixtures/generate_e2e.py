#!/usr/bin/env python3
"""Generates the committed end-to-end fixture (tests/fixtures/e2e).

Deterministic. Also verifies that no rural cell's nearest-road distance falls
within 2.5 m of the 2000 m threshold, so a 2 m densification oracle can
classify cells without ambiguity.
"""
import json
import math
import os

R = 6371000.0
OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "e2e")
os.makedirs(OUT, exist_ok=True)

NCOLS = 20
NROWS = 20
CELL = 0.01
LON0 = 10.0   # west edge
LAT0 = 50.0   # south edge (yllcorner)
LAT_TOP = LAT0 + NROWS * CELL

def haversine(a, b):
    phi1, phi2 = math.radians(a[1]), math.radians(b[1])
    dphi = math.radians(b[1] - a[1])
    dlam = math.radians(b[0] - a[0])
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return 2 * R * math.asin(min(1.0, math.sqrt(h)))

def seg_distance(p, a, b):
    cosphi = max(math.cos(math.radians(p[1])), 1e-12)
    ax = math.radians(a[0] - p[0]) * cosphi
    ay = math.radians(a[1] - p[1])
    bx = math.radians(b[0] - p[0]) * cosphi
    by = math.radians(b[1] - p[1])
    dx, dy = bx - ax, by - ay
    l2 = dx * dx + dy * dy
    best = min(haversine(p, a), haversine(p, b))
    if l2 <= 0:
        return best
    t = max(0.0, min(1.0, -(ax * dx + ay * dy) / l2))
    foot = (p[0] + math.degrees((ax + t * dx) / cosphi), p[1] + math.degrees(ay + t * dy))
    return min(best, haversine(p, foot))

class Lcg:
    def __init__(self, seed):
        self.state = seed
    def next(self):
        self.state = (self.state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
        return self.state >> 33
    def randint(self, lo, hi):
        return lo + self.next() % (hi - lo + 1)

rng = Lcg(20240101)

# Population: integers 0..99, a few nodata holes, row-major from the top row.
pop = [[rng.randint(0, 99) for _ in range(NCOLS)] for _ in range(NROWS)]
pop[2][3] = -9999
pop[15][1] = -9999
pop[7][12] = 0  # zero-population rural cell

def write_ascii(path, rows, ncols, nrows, xll, yll, cell, nodata=None):
    with open(path, "w") as f:
        f.write(f"ncols {ncols}\n")
        f.write(f"nrows {nrows}\n")
        f.write(f"xllcorner {xll}\n")
        f.write(f"yllcorner {yll}\n")
        f.write(f"cellsize {cell}\n")
        if nodata is not None:
            f.write(f"NODATA_value {nodata}\n")
        for row in rows:
            f.write(" ".join(str(v) for v in row) + "\n")

write_ascii(os.path.join(OUT, "pop.asc"), pop, NCOLS, NROWS, LON0, LAT0, CELL, -9999)

# Urban extent: 4x4 grid of 0.05 deg cells. Region C (lon >= 10.1, lat >= 50.1)
# is fully urban; one extra urban block sits inside region A.
urban = [[0] * 4 for _ in range(4)]
for r in range(4):
    for c in range(4):
        center_lon = LON0 + (c + 0.5) * 0.05
        center_lat = LAT_TOP - (r + 0.5) * 0.05
        if center_lon > 10.1 and center_lat > 50.1:
            urban[r][c] = 1
urban[3][0] = 1  # pocket in region A's southwest
write_ascii(os.path.join(OUT, "urban.asc"), urban, 4, 4, LON0, LAT0, 0.05, -9999)

# DEM aligned with the population grid: east-west ramp plus a ridge.
dem = [[0.0] * NCOLS for _ in range(NROWS)]
for r in range(NROWS):
    for c in range(NCOLS):
        ridge = 250.0 if 8 <= c <= 9 else 0.0
        dem[r][c] = round(10.0 + 14.0 * c + 3.0 * r + ridge, 1)
write_ascii(os.path.join(OUT, "dem.asc"), dem, NCOLS, NROWS, LON0, LAT0, CELL, -9999)

# Regions: three rectangles, shared borders at lon 10.1 and lat 50.1.
def rect(lon_min, lat_min, lon_max, lat_max):
    return [[[lon_min, lat_min], [lon_max, lat_min], [lon_max, lat_max],
             [lon_min, lat_max], [lon_min, lat_min]]]

regions = {
    "type": "FeatureCollection",
    "features": [
        {"type": "Feature", "properties": {"code": "AAA", "name": "Alphaland"},
         "geometry": {"type": "Polygon", "coordinates": rect(10.0, 50.0, 10.1, 50.2)}},
        {"type": "Feature", "properties": {"code": "BBB", "name": "Betaland"},
         "geometry": {"type": "Polygon", "coordinates": rect(10.1, 50.0, 10.2, 50.1)}},
        {"type": "Feature", "properties": {"code": "CCC", "name": "Gammaland"},
         "geometry": {"type": "Polygon", "coordinates": rect(10.1, 50.1, 10.2, 50.2)}},
    ],
}
with open(os.path.join(OUT, "regions.geojson"), "w") as f:
    json.dump(regions, f, indent=1)

# Roads. Vertex chains explode into ~60 segments across 8 accepted classes;
# one motorway, one footway, and one untagged feature are there to be dropped
# or skipped by the filter.
def chain(points, cls):
    props = {"highway": cls} if cls else {}
    return {"type": "Feature", "properties": props,
            "geometry": {"type": "LineString", "coordinates": [[round(x, 6), round(y, 6)] for x, y in points]}}

def vline(lon, lat_a, lat_b, n):
    return [(lon, lat_a + (lat_b - lat_a) * i / n) for i in range(n + 1)]

def hline(lat, lon_a, lon_b, n):
    return [(lon_a + (lon_b - lon_a) * i / n, lat) for i in range(n + 1)]

road_features = [
    chain(vline(10.03, 50.005, 50.195, 10), "primary"),        # 10 segments, region A spine
    chain(hline(50.15, 10.005, 10.095, 6), "secondary"),       # 6, A north crossbar
    chain(hline(50.02, 10.005, 10.055, 4), "residential"),     # 4, A south
    chain(vline(10.075, 50.1, 50.19, 6), "tertiary"),          # 6, A northeast
    chain([(10.005, 50.06), (10.02, 50.07), (10.04, 50.065), (10.055, 50.08)],
          "unclassified"),                                     # 3, A middle
    chain(vline(10.12, 50.002, 50.03, 3), "living_street"),    # 3, B southwest pocket
    chain(hline(50.105, 10.10, 10.16, 5), "trunk"),            # 5, C road near the B border
    chain(vline(10.185, 50.12, 50.18, 4), "road"),             # 4, deep in C (urban)
    chain(hline(50.125, 10.02, 10.06, 3), "trunk_link"),       # 3, A
    chain(vline(10.06, 50.0, 50.04, 8), "primary_link"),       # 8, A south vertical
    chain(hline(50.18, 10.01, 10.05, 4), "secondary_link"),    # 4, A top
    chain(vline(10.095, 50.005, 50.045, 4), "tertiary_link"),  # 4, A east edge south
    chain(hline(50.07, 10.14, 10.19, 4), "motorway"),          # dropped
    chain(hline(50.05, 10.12, 10.18, 3), "footway"),           # dropped
    chain(hline(50.09, 10.11, 10.15, 2), None),                # no tag, skipped
]
roads = {"type": "FeatureCollection", "features": road_features}
with open(os.path.join(OUT, "roads.geojson"), "w") as f:
    json.dump(roads, f, indent=1)

# Covariates: the ten documented columns, one missing cell.
with open(os.path.join(OUT, "covariates.csv"), "w") as f:
    f.write("region_code,rural_population,rural_population_share,gdp_per_capita,"
            "gdp_per_employed,employment_rate,unemployment_rate,poverty_rate,"
            "income_gini,preschool_enrollment_rate,adult_literacy_rate\n")
    f.write("AAA,5200,62.5,14500,31000,61.2,5.1,12.5,0.38,71.0,96.5\n")
    f.write("BBB,2100,48.0,,41000,55.4,7.9,18.9,0.44,64.2,91.3\n")
    f.write("CCC,0,3.2,52000,60500,58.8,4.2,4.1,0.31,88.0,99.1\n")

# --- margin audit -----------------------------------------------------------
accepted = {"trunk", "primary", "secondary", "tertiary", "unclassified",
            "residential", "living_street", "road", "trunk_link", "primary_link",
            "secondary_link", "tertiary_link"}
segments = []
for feat in road_features:
    if feat["properties"].get("highway") not in accepted:
        continue
    coords = feat["geometry"]["coordinates"]
    for i in range(len(coords) - 1):
        segments.append((tuple(coords[i]), tuple(coords[i + 1])))

def region_of(center):
    lon, lat = center
    if 10.0 <= lon <= 10.1 and 50.0 <= lat <= 50.2:
        return "AAA"
    if 10.1 <= lon <= 10.2 and 50.0 <= lat <= 50.1:
        return "BBB"
    if 10.1 <= lon <= 10.2 and 50.1 <= lat <= 50.2:
        return "CCC"
    return None

def urban_at(center):
    c = int((center[0] - LON0) / 0.05)
    r = int((LAT_TOP - center[1]) / 0.05)
    if 0 <= r < 4 and 0 <= c < 4:
        return urban[r][c] != 0
    return False

violations = []
served = {"AAA": 0, "BBB": 0, "CCC": 0}
rural = {"AAA": 0, "BBB": 0, "CCC": 0}
for r in range(NROWS):
    for c in range(NCOLS):
        if pop[r][c] == -9999:
            continue
        center = (LON0 + (c + 0.5) * CELL, LAT_TOP - (r + 0.5) * CELL)
        code = region_of(center)
        if code is None or urban_at(center):
            continue
        d = min(seg_distance(center, a, b) for a, b in segments)
        rural[code] += 1
        if d <= 2000.0:
            served[code] += 1
        if abs(d - 2000.0) < 2.5:
            violations.append((r, c, d))

print(f"segments: {len(segments)}")
print(f"rural cells: {rural}")
print(f"served cells: {served}")
if violations:
    print("THRESHOLD MARGIN VIOLATIONS:")
    for v in violations:
        print("  row %d col %d distance %.3f" % v)
    raise SystemExit(1)
print("margin audit OK (no rural cell within 2.5 m of the threshold)")
