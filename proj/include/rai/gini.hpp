#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rai/error.hpp"

namespace rai {

struct LorenzPoint {
  double population_share = 0.0;  // cumulative, in [0, 1]
  double resource_share = 0.0;    // cumulative, in [0, 1]
};

struct GiniResult {
  double g = 0.0;
  std::vector<LorenzPoint> lorenz;  // starts at (0,0), ends at (1,1)
};

namespace detail {

struct GiniUnit {
  double value = 0.0;
  double weight = 0.0;
  std::size_t index = 0;
};

// Units sorted ascending by resource per unit of population; ties keep input
// order. Zero-weight units with resource sort last (infinitely concentrated).
inline std::vector<GiniUnit> sorted_units(const std::vector<double>& values,
                                          const std::vector<double>& weights) {
  if (values.size() != weights.size()) {
    throw InputError("gini: values and weights must have equal length");
  }
  if (values.empty()) throw InputError("gini: empty input");
  double weight_sum = 0.0;
  double value_sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0)) throw InputError("gini: negative or NaN resource value");
    if (!(weights[i] >= 0.0)) throw InputError("gini: negative or NaN weight");
    weight_sum += weights[i];
    value_sum += values[i];
  }
  if (value_sum <= 0.0) throw InputError("gini: all resource values are zero");
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw InputError("gini: weights must sum to 1 (got " + std::to_string(weight_sum) + ")");
  }
  std::vector<GiniUnit> units(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) units[i] = {values[i], weights[i], i};
  auto ratio = [](const GiniUnit& u) {
    if (u.weight > 0.0) return u.value / u.weight;
    return u.value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  std::stable_sort(units.begin(), units.end(),
                   [&](const GiniUnit& a, const GiniUnit& b) { return ratio(a) < ratio(b); });
  return units;
}

}  // namespace detail

// Weighted Gini from the Lorenz curve on unit axes: G = 1 - 2B where B is the
// trapezoid area under the curve. `weights` are population shares summing to
// 1; `values` are per-unit resource amounts.
inline GiniResult gini(const std::vector<double>& values, const std::vector<double>& weights) {
  const auto units = detail::sorted_units(values, weights);
  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double value_sum = std::accumulate(values.begin(), values.end(), 0.0);

  GiniResult result;
  result.lorenz.reserve(units.size() + 1);
  result.lorenz.push_back({0.0, 0.0});
  double cum_w = 0.0;
  double cum_v = 0.0;
  double area2 = 0.0;  // 2B
  double prev_share = 0.0;
  for (const auto& unit : units) {
    cum_w += unit.weight;
    cum_v += unit.value;
    const double share = cum_v / value_sum;
    result.lorenz.push_back({cum_w / weight_sum, share});
    area2 += (prev_share + share) * (unit.weight / weight_sum);
    prev_share = share;
  }
  result.g = 1.0 - area2;
  return result;
}

// Literal percent-axes form: Lorenz coordinates in percent, trapezoid sum
// S1 = 1/2 sum (Y_i + Y_{i+1}) h_{i+1}, G = 1 - S1/5000. Equals the unit-axes
// form; kept as an independently evaluated route for verification.
inline double gini_percent_axes(const std::vector<double>& values,
                                const std::vector<double>& weights) {
  const auto units = detail::sorted_units(values, weights);
  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double value_sum = std::accumulate(values.begin(), values.end(), 0.0);
  double cum_v = 0.0;
  double s1 = 0.0;
  double prev_y_pct = 0.0;
  for (const auto& unit : units) {
    cum_v += unit.value;
    const double y_pct = cum_v / value_sum * 100.0;
    const double h_pct = unit.weight / weight_sum * 100.0;
    s1 += 0.5 * (prev_y_pct + y_pct) * h_pct;
    prev_y_pct = y_pct;
  }
  return 1.0 - s1 / 5000.0;
}

// Interpretation bands; the printed source brackets leave gaps, so the bands
// are half-open and cover all of [0, 1].
inline std::string classify_gini(double g) {
  if (!(g >= 0.0) || g > 1.0) {
    throw InputError("gini classification needs G in [0,1], got " + std::to_string(g));
  }
  if (g < 0.2) return "highly equal";
  if (g < 0.3) return "relatively equal";
  if (g < 0.4) return "relatively reasonable";
  if (g < 0.6) return "large inequality";
  return "extremely large inequality";
}

}  // namespace rai
