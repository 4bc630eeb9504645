#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rai/config.hpp"
#include "rai/covariates.hpp"
#include "rai/error.hpp"
#include "rai/geojson.hpp"
#include "rai/indicators.hpp"
#include "rai/raster_io.hpp"
#include "rai/regions.hpp"
#include "rai/report.hpp"
#include "rai/road_index.hpp"
#include "rai/roads.hpp"
#include "rai/rural_mask.hpp"
#include "rai/stats_tables.hpp"
#include "rai/svg_map.hpp"

namespace rai {

struct ComputeResult {
  std::vector<RegionIndicators> indicators;
  IndicatorRun run;
  std::string regions_csv_path;
  std::string regions_json_path;
  std::vector<std::string> notes;  // non-fatal findings (empty network, no rural cells)
};

namespace detail {

inline std::string output_path(const PipelineConfig& config, const std::string& name) {
  return (std::filesystem::path(config.output_dir) / name).string();
}

inline void ensure_output_dir(const PipelineConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw InputError(config.output_dir + ": cannot create output directory");
}

}  // namespace detail

// Ingest -> rural mask -> road index -> per-region indicators -> regions.csv
// and regions.json.
inline ComputeResult cmd_compute(const PipelineConfig& config) {
  validate_compute_config(config);
  detail::ensure_output_dir(config);

  const RasterGrid population = load_raster(config.population_path);
  population.require_non_negative("population");
  const RasterGrid urban = load_raster(config.urban_path);
  std::optional<RasterGrid> dem;
  if (!config.dem_path.empty()) dem = load_raster(config.dem_path);

  const RegionSet regions =
      load_regions(config.regions_path, config.region_code_key, config.region_name_key);
  const FeatureCollection road_features = load_vector(config.roads_path);
  RoadNetwork network = filter_all_season_roads(road_features, config.highway_tags);

  ComputeResult result;
  if (network.empty()) {
    result.notes.push_back("road filter kept no segments");
  }

  const RuralMask mask = build_rural_mask(population, urban, regions, config.workers);
  if (mask.rural_cell_count == 0) {
    result.notes.push_back("no rural cells in the population grid");
  }
  if (config.clip_roads_to_rural) {
    network = clip_roads_to_rural(network, population, mask);
    if (network.empty()) result.notes.push_back("clipping to rural cells removed all segments");
  }
  const RoadIndex index(network);

  IndicatorOptions options;
  options.threshold_m = config.threshold_m;
  options.use_index = config.use_index;
  options.allow_empty_roads = config.allow_empty_roads;
  options.workers = config.workers;
  result.run = compute_indicators(population, mask, index, dem ? &*dem : nullptr, options);
  result.indicators = result.run.regions;

  std::map<std::string, std::string> checksums;
  checksums["population"] = file_checksum(config.population_path);
  checksums["urban"] = file_checksum(config.urban_path);
  checksums["roads"] = file_checksum(config.roads_path);
  checksums["regions"] = file_checksum(config.regions_path);
  if (!config.dem_path.empty()) checksums["dem"] = file_checksum(config.dem_path);

  result.regions_csv_path = detail::output_path(config, "regions.csv");
  result.regions_json_path = detail::output_path(config, "regions.json");
  write_regions_csv(result.indicators, regions, result.regions_csv_path);
  write_json_file(regions_json(result.indicators, regions, result.run, config, checksums),
                  result.regions_json_path);
  return result;
}

struct StatsResult {
  std::string stats_json_path;
  MoranSummary moran_rai;
  MoranSummary moran_nsrp;
  GiniSummary gini_rai;
  GiniSummary gini_nsrp;
  std::vector<CorrelationRow> correlations;
};

// Moran, Gini, and the correlation table from an indicator file; writes
// stats.json shaped like the report tables (per-indicator columns).
inline StatsResult cmd_stats(const PipelineConfig& config, const std::string& indicators_path) {
  if (config.regions_path.empty()) throw ConfigError("missing required path: regions");
  detail::ensure_output_dir(config);

  const std::vector<RegionIndicators> indicators = read_indicator_csv(indicators_path);
  if (indicators.size() < 3) {
    throw InputError("need >= 3 regions for spatial statistics, have " +
                     std::to_string(indicators.size()));
  }
  const RegionSet regions =
      load_regions(config.regions_path, config.region_code_key, config.region_name_key);

  StatsResult result;

  std::vector<std::string> rai_codes;
  std::vector<double> rai_values;
  std::vector<std::string> nsrp_codes;
  std::vector<double> nsrp_values;
  for (const auto& row : indicators) {
    if (row.rai_percent) {
      rai_codes.push_back(row.code);
      rai_values.push_back(*row.rai_percent);
    }
    nsrp_codes.push_back(row.code);
    nsrp_values.push_back(row.nsrp);
  }
  result.moran_rai =
      moran_of_indicator(rai_codes, rai_values, regions, config.weights, config.moran_mode,
                         config.moran_permutations, config.seed, config.workers);
  result.moran_nsrp =
      moran_of_indicator(nsrp_codes, nsrp_values, regions, config.weights, config.moran_mode,
                         config.moran_permutations, config.seed + 1, config.workers);
  result.gini_rai = gini_of_rai(indicators, config.gini_resource);
  result.gini_nsrp = gini_of_nsrp(indicators);

  std::map<std::string, std::string> checksums;
  checksums["indicators"] = file_checksum(indicators_path);
  checksums["regions"] = file_checksum(config.regions_path);

  nlohmann::json correlations = nlohmann::json::array();
  if (!config.covariates_path.empty()) {
    const CovariateTable covariates = load_covariates(config.covariates_path);
    checksums["covariates"] = file_checksum(config.covariates_path);
    result.correlations = correlation_table(indicators, covariates);
    for (const auto& row : result.correlations) {
      correlations.push_back(nlohmann::json{{"factor", row.factor},
                                            {"recognized", row.recognized},
                                            {"rai", correlation_json(row.rai)},
                                            {"nsrp", correlation_json(row.nsrp)}});
    }
  }

  const nlohmann::json doc{
      {"schema_version", kSchemaVersion},
      {"n_regions", indicators.size()},
      {"moran", {{"rai", moran_json(result.moran_rai)}, {"nsrp", moran_json(result.moran_nsrp)}}},
      {"gini", {{"rai", gini_json(result.gini_rai)}, {"nsrp", gini_json(result.gini_nsrp)}}},
      {"correlations", correlations},
      {"metadata", {{"config", config_echo_json(config)}, {"input_checksums", checksums}}},
  };
  result.stats_json_path = detail::output_path(config, "stats.json");
  write_json_file(doc, result.stats_json_path);
  return result;
}

struct RenderResult {
  std::string svg_path;
  std::vector<std::string> warnings;
};

// SVG choropleth of one indicator field ("rai" or "nsrp").
inline RenderResult cmd_render(const PipelineConfig& config, const std::string& indicators_path,
                               const std::string& field) {
  if (field != "rai" && field != "nsrp") {
    throw ConfigError("render field must be 'rai' or 'nsrp', got '" + field + "'");
  }
  if (config.regions_path.empty()) throw ConfigError("missing required path: regions");
  detail::ensure_output_dir(config);

  const std::vector<RegionIndicators> indicators = read_indicator_csv(indicators_path);
  const RegionSet regions =
      load_regions(config.regions_path, config.region_code_key, config.region_name_key);

  std::vector<std::pair<std::string, std::optional<double>>> values;
  values.reserve(indicators.size());
  for (const auto& row : indicators) {
    if (field == "rai") {
      values.emplace_back(row.code, row.rai_percent);
    } else {
      values.emplace_back(row.code, row.nsrp);
    }
  }
  ChoroplethResult rendered =
      render_choropleth(values, regions, field == "rai" ? "RAI (%)" : "NSRP (persons)");

  RenderResult result;
  result.svg_path = detail::output_path(config, "map_" + field + ".svg");
  result.warnings = std::move(rendered.warnings);
  write_text_file(rendered.svg, result.svg_path);
  return result;
}

struct RunResult {
  ComputeResult compute;
  StatsResult stats;
  RenderResult render_rai;
  RenderResult render_nsrp;
  std::string timings_json_path;
};

// compute -> stats -> render, stopping at the first failing stage with the
// stage name prefixed to the error. Timings go to a separate file so the
// contractual outputs stay byte-deterministic.
inline RunResult cmd_run(const PipelineConfig& config) {
  RunResult result;
  using Clock = std::chrono::steady_clock;
  std::vector<std::pair<std::string, double>> timings;

  auto timed = [&](const std::string& stage, auto&& fn) {
    const auto start = Clock::now();
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(stage + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(stage + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(stage + ": " + e.what());
    }
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    timings.emplace_back(stage, elapsed.count());
  };

  timed("compute", [&] { result.compute = cmd_compute(config); });
  timed("stats", [&] { result.stats = cmd_stats(config, result.compute.regions_csv_path); });
  timed("render", [&] {
    result.render_rai = cmd_render(config, result.compute.regions_csv_path, "rai");
    result.render_nsrp = cmd_render(config, result.compute.regions_csv_path, "nsrp");
  });

  nlohmann::json timing_rows = nlohmann::json::array();
  for (const auto& [stage, seconds] : timings) {
    timing_rows.push_back(nlohmann::json{{"stage", stage}, {"seconds", seconds}});
  }
  result.timings_json_path = detail::output_path(config, "timings.json");
  write_json_file(nlohmann::json{{"schema_version", kSchemaVersion}, {"timings", timing_rows}},
                  result.timings_json_path);
  return result;
}

}  // namespace rai
