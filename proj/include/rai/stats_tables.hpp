#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rai/covariates.hpp"
#include "rai/error.hpp"
#include "rai/gini.hpp"
#include "rai/indicators.hpp"
#include "rai/moran.hpp"
#include "rai/pearson.hpp"
#include "rai/regions.hpp"
#include "rai/weights.hpp"

namespace rai {

struct CorrelationRow {
  std::string factor;
  bool recognized = false;
  CorrelationResult rai;
  CorrelationResult nsrp;
};

// Pearson of RAI and NSRP against every covariate column, paired over shared
// region codes; pairs with an undefined indicator or missing covariate cell
// are dropped per pair, so N varies by row.
inline std::vector<CorrelationRow> correlation_table(
    const std::vector<RegionIndicators>& indicators, const CovariateTable& covariates) {
  std::size_t joinable = 0;
  std::vector<std::string> unmatched;
  for (const auto& region : indicators) {
    if (covariates.rows.count(region.code)) {
      ++joinable;
    } else {
      unmatched.push_back(region.code);
    }
  }
  if (joinable == 0) {
    std::string msg = "no covariate rows match any region code; unmatched:";
    for (std::size_t i = 0; i < unmatched.size() && i < 10; ++i) msg += " " + unmatched[i];
    if (unmatched.size() > 10) msg += " ...";
    throw InputError(msg);
  }

  std::vector<CorrelationRow> rows;
  rows.reserve(covariates.columns.size());
  for (std::size_t col = 0; col < covariates.columns.size(); ++col) {
    CorrelationRow row;
    row.factor = covariates.columns[col].name;
    row.recognized = covariates.columns[col].recognized;
    std::vector<double> rai_x, rai_y, nsrp_x, nsrp_y;
    for (const auto& region : indicators) {
      const auto cell = covariates.value(region.code, col);
      if (!cell) continue;
      if (region.rai_percent) {
        rai_x.push_back(*region.rai_percent);
        rai_y.push_back(*cell);
      }
      nsrp_x.push_back(region.nsrp);
      nsrp_y.push_back(*cell);
    }
    row.rai = pearson(rai_x, rai_y);
    row.nsrp = pearson(nsrp_x, nsrp_y);
    rows.push_back(std::move(row));
  }
  return rows;
}

// How the Gini "resource" is read for the RAI indicator. NSRP is a population
// count already, so both readings coincide there.
enum class GiniResourceMode {
  kServedPopulation,  // resource = served rural population
  kIndicatorValue,    // resource = the RAI value itself
};

struct GiniSummary {
  bool defined = false;
  std::string undefined_reason;
  double g = 0.0;
  std::string category;
  std::vector<LorenzPoint> lorenz;
};

namespace detail {

inline GiniSummary gini_summary(const std::vector<double>& values,
                                const std::vector<double>& weights) {
  GiniSummary out;
  try {
    GiniResult res = gini(values, weights);
    out.defined = true;
    out.g = res.g;
    out.category = classify_gini(res.g);
    out.lorenz = std::move(res.lorenz);
  } catch (const InputError& e) {
    out.undefined_reason = e.what();
  }
  return out;
}

}  // namespace detail

// Gini of the RAI distribution: units are regions with rural population,
// weighted by rural population share.
inline GiniSummary gini_of_rai(const std::vector<RegionIndicators>& indicators,
                               GiniResourceMode mode) {
  std::vector<double> values, weights;
  double total_rural = 0.0;
  for (const auto& r : indicators) total_rural += r.pop_rural;
  if (total_rural <= 0.0) {
    GiniSummary out;
    out.undefined_reason = "no rural population in any region";
    return out;
  }
  for (const auto& r : indicators) {
    if (r.pop_rural <= 0.0) continue;
    weights.push_back(r.pop_rural / total_rural);
    values.push_back(mode == GiniResourceMode::kServedPopulation ? r.pop_served
                                                                 : *r.rai_percent);
  }
  // Re-normalize after dropping zero-weight units so shares still sum to 1.
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;
  return detail::gini_summary(values, weights);
}

inline GiniSummary gini_of_nsrp(const std::vector<RegionIndicators>& indicators) {
  std::vector<double> values, weights;
  double total_rural = 0.0;
  for (const auto& r : indicators) total_rural += r.pop_rural;
  if (total_rural <= 0.0) {
    GiniSummary out;
    out.undefined_reason = "no rural population in any region";
    return out;
  }
  for (const auto& r : indicators) {
    if (r.pop_rural <= 0.0) continue;
    weights.push_back(r.pop_rural / total_rural);
    values.push_back(r.nsrp);
  }
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;
  return detail::gini_summary(values, weights);
}

struct WeightsSpec {
  enum class Kind { kKnn, kQueen } kind = Kind::kKnn;
  std::size_t k = 8;
};

struct MoranSummary {
  bool defined = false;
  std::string undefined_reason;
  MoranResult result;
  std::size_t knn_k_used = 0;  // 0 when queen weights
};

// Moran's I of one indicator over the regions where it is defined. KNN k is
// clamped to n-1 when the region count is small.
inline MoranSummary moran_of_indicator(const std::vector<std::string>& codes,
                                       const std::vector<double>& values,
                                       const RegionSet& regions, const WeightsSpec& spec,
                                       MoranMode mode, std::size_t n_permutations,
                                       std::uint64_t seed, int workers) {
  MoranSummary out;
  if (values.size() < 3) {
    out.undefined_reason = "need at least 3 regions with a defined value, have " +
                           std::to_string(values.size());
    return out;
  }
  try {
    if (spec.kind == WeightsSpec::Kind::kQueen) {
      // Subset the region set to the included codes, preserving order.
      RegionSet subset;
      for (const std::string& code : codes) {
        const Region* r = regions.find(code);
        if (!r) throw InputError("region '" + code + "' missing from geometry set");
        subset.regions.push_back(*r);
      }
      out.result = moran_i(values, build_queen_weights(subset), mode, n_permutations, seed,
                           workers);
    } else {
      std::vector<GeoPoint> centroids;
      centroids.reserve(codes.size());
      for (const std::string& code : codes) {
        const Region* r = regions.find(code);
        if (!r) throw InputError("region '" + code + "' missing from geometry set");
        centroids.push_back(polygons_centroid(r->polygons));
      }
      const std::size_t k = std::min(spec.k, values.size() - 1);
      out.knn_k_used = k;
      out.result = moran_i(values, build_knn_weights(centroids, k), mode, n_permutations,
                           seed, workers);
    }
    out.defined = true;
  } catch (const InputError& e) {
    out.undefined_reason = e.what();
  }
  return out;
}

}  // namespace rai
