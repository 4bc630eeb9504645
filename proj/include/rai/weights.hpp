#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "rai/error.hpp"
#include "rai/geo.hpp"
#include "rai/regions.hpp"

namespace rai {

// Dense spatial weights, zero diagonal. Row standardization scales each
// nonzero row to sum to 1.
class WeightsMatrix {
 public:
  WeightsMatrix(std::size_t n, std::vector<double> values, bool row_standardized)
      : n_(n), w_(std::move(values)), row_standardized_(row_standardized) {
    if (w_.size() != n_ * n_) throw InputError("weights matrix size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      if (w_[i * n_ + i] != 0.0) throw InputError("weights matrix has nonzero diagonal");
      for (std::size_t j = 0; j < n_; ++j) {
        if (w_[i * n_ + j] < 0.0) throw InputError("weights matrix has negative weight");
      }
    }
  }

  static WeightsMatrix from_binary(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                   bool standardize = true) {
    std::vector<double> w(n * n, 0.0);
    for (const auto& [i, j] : pairs) {
      if (i == j) throw InputError("weights pair on the diagonal");
      w[i * n + j] = 1.0;
    }
    WeightsMatrix m(n, std::move(w), false);
    if (standardize) m.row_standardize();
    return m;
  }

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  bool row_standardized() const { return row_standardized_; }

  void row_standardize() {
    for (std::size_t i = 0; i < n_; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n_; ++j) sum += w_[i * n_ + j];
      if (sum > 0.0) {
        for (std::size_t j = 0; j < n_; ++j) w_[i * n_ + j] /= sum;
      }
    }
    row_standardized_ = true;
  }

  double sum() const {  // S0
    double s = 0.0;
    for (double v : w_) s += v;
    return s;
  }

  // S1 = 1/2 sum_ij (w_ij + w_ji)^2
  double s1() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double t = w_[i * n_ + j] + w_[j * n_ + i];
        s += t * t;
      }
    }
    return s / 2.0;
  }

  // S2 = sum_i (row_sum_i + col_sum_i)^2
  double s2() const {
    std::vector<double> row(n_, 0.0), col(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        row[i] += w_[i * n_ + j];
        col[j] += w_[i * n_ + j];
      }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double t = row[i] + col[i];
      s += t * t;
    }
    return s;
  }

  // Sparse view: (j, w_ij) per row, for fast permutation scoring.
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbor_lists() const {
    std::vector<std::vector<std::pair<std::size_t, double>>> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (w_[i * n_ + j] != 0.0) out[i].emplace_back(j, w_[i * n_ + j]);
      }
    }
    return out;
  }

 private:
  std::size_t n_;
  std::vector<double> w_;  // row-major n x n
  bool row_standardized_;
};

// k-nearest-neighbor weights over haversine distance, row-standardized.
// Distance ties break towards the lower index; the matrix may be asymmetric.
inline WeightsMatrix build_knn_weights(const std::vector<GeoPoint>& centroids, std::size_t k) {
  const std::size_t n = centroids.size();
  if (k < 1) throw InputError("knn weights need k >= 1");
  if (n <= k) {
    throw InputError("knn weights need more points (" + std::to_string(n) +
                     ") than neighbors k=" + std::to_string(k));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (centroids[i].lon == centroids[j].lon && centroids[i].lat == centroids[j].lat) {
        throw InputError("duplicate centroids at indices " + std::to_string(i) + " and " +
                         std::to_string(j));
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * k);
  std::vector<std::pair<double, std::size_t>> dist(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back(haversine_m(centroids[i], centroids[j]), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (std::size_t t = 0; t < k; ++t) pairs.emplace_back(i, dist[t].second);
  }
  return WeightsMatrix::from_binary(n, pairs, true);
}

// Queen contiguity from region geometry: regions sharing at least one
// boundary vertex are neighbors. Requires borders digitized with shared
// vertices (true of GADM-style data).
inline WeightsMatrix build_queen_weights(const RegionSet& regions) {
  const std::size_t n = regions.regions.size();
  std::map<std::pair<double, double>, std::vector<std::size_t>> vertex_owners;
  for (std::size_t i = 0; i < n; ++i) {
    for (const Polygon& poly : regions.regions[i].polygons) {
      auto add_ring = [&](const Ring& ring) {
        for (std::size_t v = 0; v + 1 < ring.size(); ++v) {
          auto& owners = vertex_owners[{ring[v].lon, ring[v].lat}];
          if (owners.empty() || owners.back() != i) owners.push_back(i);
        }
      };
      add_ring(poly.exterior);
      for (const Ring& hole : poly.holes) add_ring(hole);
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> links;
  for (const auto& [vertex, owners] : vertex_owners) {
    for (std::size_t a = 0; a < owners.size(); ++a) {
      for (std::size_t b = a + 1; b < owners.size(); ++b) {
        links.emplace(owners[a], owners[b]);
        links.emplace(owners[b], owners[a]);
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs(links.begin(), links.end());
  return WeightsMatrix::from_binary(n, pairs, true);
}

}  // namespace rai
