#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "rai/error.hpp"
#include "rai/moran.hpp"
#include "rai/roads.hpp"
#include "rai/stats_tables.hpp"

namespace rai {

struct PipelineConfig {
  // Inputs
  std::string population_path;
  std::string urban_path;
  std::string roads_path;
  std::string regions_path;
  std::string dem_path;         // optional
  std::string covariates_path;  // optional

  // Accessibility
  double threshold_m = 2000.0;
  std::set<std::string> highway_tags = default_all_season_tags();
  bool clip_roads_to_rural = false;
  bool allow_empty_roads = false;
  bool use_index = true;

  // Stats
  WeightsSpec weights;
  MoranMode moran_mode = MoranMode::kRandomization;
  std::size_t moran_permutations = 9999;
  GiniResourceMode gini_resource = GiniResourceMode::kServedPopulation;

  // Run
  std::string output_dir = ".";
  int workers = 1;
  std::uint64_t seed = 1;
  std::string region_code_key = "code";
  std::string region_name_key = "name";
};

inline WeightsSpec parse_weights_spec(const std::string& text) {
  WeightsSpec spec;
  if (text == "queen") {
    spec.kind = WeightsSpec::Kind::kQueen;
    return spec;
  }
  if (text.rfind("knn:", 0) == 0) {
    spec.kind = WeightsSpec::Kind::kKnn;
    try {
      const long k = std::stol(text.substr(4));
      if (k < 1) throw std::invalid_argument("k");
      spec.k = static_cast<std::size_t>(k);
    } catch (const std::exception&) {
      throw ConfigError("invalid weights spec '" + text + "' (want knn:<k> or queen)");
    }
    return spec;
  }
  throw ConfigError("invalid weights spec '" + text + "' (want knn:<k> or queen)");
}

// Returns mode and, for perm:<n>, the permutation count.
inline std::pair<MoranMode, std::size_t> parse_moran_mode(const std::string& text) {
  if (text == "normality") return {MoranMode::kNormality, 0};
  if (text == "randomization") return {MoranMode::kRandomization, 0};
  if (text.rfind("perm:", 0) == 0) {
    try {
      const long n = std::stol(text.substr(5));
      if (n < 1) throw std::invalid_argument("n");
      return {MoranMode::kPermutation, static_cast<std::size_t>(n)};
    } catch (const std::exception&) {
      throw ConfigError("invalid moran mode '" + text + "' (want normality|randomization|perm:<n>)");
    }
  }
  throw ConfigError("invalid moran mode '" + text + "' (want normality|randomization|perm:<n>)");
}

inline GiniResourceMode parse_gini_resource(const std::string& text) {
  if (text == "served_population") return GiniResourceMode::kServedPopulation;
  if (text == "indicator_value") return GiniResourceMode::kIndicatorValue;
  throw ConfigError("invalid gini resource '" + text +
                    "' (want served_population|indicator_value)");
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected boolean, got '" + v + "'");
}

}  // namespace detail

// Applies one key/value setting; shared by the config file loader and the
// CLI flag overrides (flags win by being applied last).
inline void apply_config_entry(PipelineConfig& config, const std::string& key,
                               const std::string& raw_value) {
  const std::string value = detail::unquote(detail::trim(raw_value));
  auto as_double = [&](const std::string& v) {
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
    }
  };
  auto as_long = [&](const std::string& v) {
    try {
      return std::stol(v);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
    }
  };

  if (key == "population") config.population_path = value;
  else if (key == "urban") config.urban_path = value;
  else if (key == "roads") config.roads_path = value;
  else if (key == "regions") config.regions_path = value;
  else if (key == "dem") config.dem_path = value;
  else if (key == "covariates") config.covariates_path = value;
  else if (key == "threshold_m") config.threshold_m = as_double(value);
  else if (key == "highway_tags") {
    config.highway_tags.clear();
    std::stringstream ss(value);
    std::string tag;
    while (std::getline(ss, tag, ',')) {
      tag = detail::trim(tag);
      if (!tag.empty()) config.highway_tags.insert(tag);
    }
    if (config.highway_tags.empty()) {
      throw ConfigError("config key 'highway_tags': empty tag list");
    }
  } else if (key == "weights") config.weights = parse_weights_spec(value);
  else if (key == "moran") {
    const auto [mode, perms] = parse_moran_mode(value);
    config.moran_mode = mode;
    if (perms > 0) config.moran_permutations = perms;
  } else if (key == "gini_resource") config.gini_resource = parse_gini_resource(value);
  else if (key == "output_dir") config.output_dir = value;
  else if (key == "workers") config.workers = static_cast<int>(as_long(value));
  else if (key == "seed") config.seed = static_cast<std::uint64_t>(as_long(value));
  else if (key == "region_code_key") config.region_code_key = value;
  else if (key == "region_name_key") config.region_name_key = value;
  else if (key == "clip_roads_to_rural") config.clip_roads_to_rural = detail::parse_bool(value, key);
  else if (key == "allow_empty_roads") config.allow_empty_roads = detail::parse_bool(value, key);
  else if (key == "use_index") config.use_index = detail::parse_bool(value, key);
  else throw ConfigError("unknown config key '" + key + "'");
}

// TOML-style flat key = value file; '#' starts a comment.
inline void load_config_file(PipelineConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    try {
      apply_config_entry(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

inline void validate_compute_config(const PipelineConfig& config) {
  if (config.population_path.empty()) throw ConfigError("missing required path: population");
  if (config.urban_path.empty()) throw ConfigError("missing required path: urban");
  if (config.roads_path.empty()) throw ConfigError("missing required path: roads");
  if (config.regions_path.empty()) throw ConfigError("missing required path: regions");
  if (!(config.threshold_m > 0.0)) throw ConfigError("threshold_m must be positive");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
}

}  // namespace rai
