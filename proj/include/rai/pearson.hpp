#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/student_t.hpp"

namespace rai {

struct CorrelationResult {
  bool defined = false;
  std::string undefined_reason;  // set when !defined
  double r = 0.0;
  std::size_t n = 0;  // paired sample size
  double p_value = 1.0;
  std::string stars;  // "**" p<0.01, "*" p<0.05, else ""
};

inline std::string significance_stars(double p) {
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

// Pearson correlation over already-paired samples, two-sided p from the
// t statistic with n-2 degrees of freedom.
inline CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("pearson: inputs must have equal length");
  CorrelationResult result;
  result.n = x.size();
  if (result.n < 3) {
    result.undefined_reason = "need at least 3 paired observations (N=" +
                              std::to_string(result.n) + ")";
    return result;
  }
  const double n = static_cast<double>(result.n);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    result.undefined_reason = "zero variance in one of the variables";
    return result;
  }
  result.defined = true;
  result.r = sxy / std::sqrt(sxx * syy);
  // Guard rounding just past the unit interval.
  if (result.r > 1.0) result.r = 1.0;
  if (result.r < -1.0) result.r = -1.0;
  const double df = n - 2.0;
  const double one_minus_r2 = 1.0 - result.r * result.r;
  if (one_minus_r2 <= 0.0) {
    result.p_value = 0.0;
  } else {
    const double t = result.r * std::sqrt(df / one_minus_r2);
    result.p_value = student_t_two_sided_p(t, df);
  }
  result.stars = significance_stars(result.p_value);
  return result;
}

}  // namespace rai
