#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/parallel.hpp"
#include "rai/weights.hpp"

namespace rai {

enum class MoranMode { kNormality, kRandomization, kPermutation };

inline std::string moran_mode_name(MoranMode mode) {
  switch (mode) {
    case MoranMode::kNormality: return "normality";
    case MoranMode::kRandomization: return "randomization";
    case MoranMode::kPermutation: return "permutation";
  }
  return "unknown";
}

struct MoranResult {
  double i = 0.0;
  double expectation = 0.0;  // -1/(n-1)
  double variance = 0.0;
  double z_score = 0.0;
  double p_value = 0.0;  // two-sided
  MoranMode mode = MoranMode::kNormality;
  std::size_t n = 0;
  std::size_t n_permutations = 0;
  // Complete-graph weights make I constant under permutation: the null
  // distribution collapses, z is reported as 0 and p as 1.
  bool degenerate_null = false;
};

namespace detail {

// splitmix64; used to derive independent per-permutation streams from one
// seed so permutation results do not depend on the worker count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class SplitRng {
 public:
  SplitRng(std::uint64_t seed, std::uint64_t stream) : state_(seed ^ splitmix64(stream + 1)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return splitmix64(state_);
  }

  // Uniform integer in [0, bound), bound >= 1; rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    while (true) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

inline double normal_sf_two_sided(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

// Weighted cross-product sum_ij w_ij z_i z_j for a permuted assignment of the
// centered values to locations.
inline double cross_product(const std::vector<std::vector<std::pair<std::size_t, double>>>& nbr,
                            const std::vector<double>& z, const std::vector<std::size_t>& perm) {
  double acc = 0.0;
  for (std::size_t i = 0; i < nbr.size(); ++i) {
    const double zi = z[perm[i]];
    if (zi == 0.0) continue;
    double inner = 0.0;
    for (const auto& [j, w] : nbr[i]) inner += w * z[perm[j]];
    acc += zi * inner;
  }
  return acc;
}

}  // namespace detail

// Global Moran's I of `values` under `weights`, with the inference assumption
// selected by `mode`. The variance under permutation mode is the second
// moment of the permutation distribution about the analytic expectation, so
// z == (I - E) / sqrt(var) holds in every mode.
inline MoranResult moran_i(const std::vector<double>& values, const WeightsMatrix& weights,
                           MoranMode mode = MoranMode::kRandomization,
                           std::size_t n_permutations = 9999, std::uint64_t seed = 1,
                           int workers = 1) {
  const std::size_t n = values.size();
  if (n != weights.size()) throw InputError("values and weights dimensions differ");
  if (n < 3) throw InputError("Moran's I needs at least 3 observations");

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  std::vector<double> z(n);
  double sum_z2 = 0.0;
  double sum_z4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = values[i] - mean;
    sum_z2 += z[i] * z[i];
    sum_z4 += z[i] * z[i] * z[i] * z[i];
  }
  if (sum_z2 <= 0.0) throw InputError("constant attribute, Moran's I undefined");

  const double s0 = weights.sum();
  if (s0 <= 0.0) throw InputError("weights matrix has zero total weight");
  const double nd = static_cast<double>(n);

  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  const auto nbr = weights.neighbor_lists();
  const double cross = detail::cross_product(nbr, z, identity);

  MoranResult result;
  result.mode = mode;
  result.n = n;
  result.i = nd * cross / (s0 * sum_z2);
  result.expectation = -1.0 / (nd - 1.0);

  if (mode == MoranMode::kPermutation) {
    if (n_permutations < 1) throw InputError("permutation mode needs at least 1 permutation");
    result.n_permutations = n_permutations;
    const double observed_dev = std::abs(result.i - result.expectation);
    std::vector<std::uint8_t> extreme(n_permutations, 0);
    std::vector<double> sq_dev(n_permutations, 0.0);
    run_tasks(n_permutations, workers, [&](std::size_t k) {
      detail::SplitRng rng(seed, k);
      std::vector<std::size_t> perm(identity);
      for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
        std::swap(perm[i], perm[j]);
      }
      const double i_perm = nd * detail::cross_product(nbr, z, perm) / (s0 * sum_z2);
      const double dev = std::abs(i_perm - result.expectation);
      extreme[k] = dev >= observed_dev ? 1 : 0;
      sq_dev[k] = (i_perm - result.expectation) * (i_perm - result.expectation);
    });
    std::size_t count = 0;
    double var = 0.0;
    for (std::size_t k = 0; k < n_permutations; ++k) {
      count += extreme[k];
      var += sq_dev[k];
    }
    result.variance = var / static_cast<double>(n_permutations);
    if (result.variance > 0.0) {
      result.z_score = (result.i - result.expectation) / std::sqrt(result.variance);
    } else {
      result.degenerate_null = true;
      result.z_score = 0.0;
    }
    result.p_value = static_cast<double>(count + 1) / static_cast<double>(n_permutations + 1);
    return result;
  }

  const double s1 = weights.s1();
  const double s2 = weights.s2();
  const double e2 = result.expectation * result.expectation;
  if (mode == MoranMode::kNormality) {
    result.variance = (nd * nd * s1 - nd * s2 + 3.0 * s0 * s0) / (s0 * s0 * (nd * nd - 1.0)) - e2;
  } else {
    // Randomization assumption (Cliff & Ord closed form with sample kurtosis).
    const double b2 = nd * sum_z4 / (sum_z2 * sum_z2);
    const double num = nd * ((nd * nd - 3.0 * nd + 3.0) * s1 - nd * s2 + 3.0 * s0 * s0) -
                       b2 * ((nd * nd - nd) * s1 - 2.0 * nd * s2 + 6.0 * s0 * s0);
    const double den = (nd - 1.0) * (nd - 2.0) * (nd - 3.0) * s0 * s0;
    result.variance = num / den - e2;
  }
  if (result.variance > 0.0) {
    result.z_score = (result.i - result.expectation) / std::sqrt(result.variance);
    result.p_value = detail::normal_sf_two_sided(result.z_score);
  } else {
    result.degenerate_null = true;
    result.z_score = 0.0;
    result.p_value = 1.0;
  }
  return result;
}

}  // namespace rai
