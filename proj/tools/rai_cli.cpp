#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rai/config.hpp"
#include "rai/error.hpp"
#include "rai/pipeline.hpp"

namespace {

struct CliOverrides {
  std::optional<std::string> config_path;
  std::optional<std::string> population, urban, roads, regions, dem, covariates;
  std::optional<double> threshold_m;
  std::optional<int> workers;
  std::optional<long long> seed;
  std::optional<std::string> weights, moran, gini_resource, output_dir;
  std::optional<std::string> highway_tags, region_code_key, region_name_key;
  bool clip_roads = false;
  bool allow_empty_roads = false;
  bool no_index = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "Config file (key = value lines); flags override");
  cmd->add_option("--population", o.population, "Population raster (ASCII grid or GeoTIFF)");
  cmd->add_option("--urban", o.urban, "Urban extent raster");
  cmd->add_option("--roads", o.roads, "Road network GeoJSON");
  cmd->add_option("--regions", o.regions, "Region polygons GeoJSON");
  cmd->add_option("--dem", o.dem, "Optional elevation raster");
  cmd->add_option("--covariates", o.covariates, "Optional covariate CSV");
  cmd->add_option("--threshold-m", o.threshold_m, "Served distance threshold in meters");
  cmd->add_option("--workers", o.workers, "Worker thread count");
  cmd->add_option("--seed", o.seed, "Random seed for permutation tests");
  cmd->add_option("--weights", o.weights, "Spatial weights: knn:<k> or queen");
  cmd->add_option("--moran", o.moran, "Moran inference: normality|randomization|perm:<n>");
  cmd->add_option("--gini-resource", o.gini_resource,
                  "Gini resource reading: served_population|indicator_value");
  cmd->add_option("--output-dir", o.output_dir, "Directory for result files");
  cmd->add_option("--highway-tags", o.highway_tags, "Comma-separated accepted highway classes");
  cmd->add_option("--region-code-key", o.region_code_key, "GeoJSON property with region codes");
  cmd->add_option("--region-name-key", o.region_name_key, "GeoJSON property with region names");
  cmd->add_flag("--clip-roads", o.clip_roads, "Clip roads to rural cells before proximity");
  cmd->add_flag("--allow-empty-roads", o.allow_empty_roads,
                "Score all rural cells as not served when no roads remain");
  cmd->add_flag("--no-index", o.no_index, "Use the linear-scan reference path (slow)");
}

rai::PipelineConfig build_config(const CliOverrides& o) {
  rai::PipelineConfig config;
  if (o.config_path) rai::load_config_file(config, *o.config_path);
  if (o.population) config.population_path = *o.population;
  if (o.urban) config.urban_path = *o.urban;
  if (o.roads) config.roads_path = *o.roads;
  if (o.regions) config.regions_path = *o.regions;
  if (o.dem) config.dem_path = *o.dem;
  if (o.covariates) config.covariates_path = *o.covariates;
  if (o.threshold_m) config.threshold_m = *o.threshold_m;
  if (o.workers) config.workers = *o.workers;
  if (o.seed) config.seed = static_cast<std::uint64_t>(*o.seed);
  if (o.weights) config.weights = rai::parse_weights_spec(*o.weights);
  if (o.moran) {
    const auto [mode, perms] = rai::parse_moran_mode(*o.moran);
    config.moran_mode = mode;
    if (perms > 0) config.moran_permutations = perms;
  }
  if (o.gini_resource) config.gini_resource = rai::parse_gini_resource(*o.gini_resource);
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (o.highway_tags) rai::apply_config_entry(config, "highway_tags", *o.highway_tags);
  if (o.region_code_key) config.region_code_key = *o.region_code_key;
  if (o.region_name_key) config.region_name_key = *o.region_name_key;
  if (o.clip_roads) config.clip_roads_to_rural = true;
  if (o.allow_empty_roads) config.allow_empty_roads = true;
  if (o.no_index) config.use_index = false;
  if (config.workers < 1) throw rai::ConfigError("workers must be >= 1");
  return config;
}

void print_error(const std::string& type, const std::string& message) {
  const nlohmann::json j{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
}

void print_notes(const std::vector<std::string>& notes, const char* label) {
  for (const auto& note : notes) std::cerr << label << ": " << note << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rural access indicators: RAI/NSRP computation, spatial statistics, maps"};
  app.require_subcommand(1);

  CliOverrides compute_opts, stats_opts, render_opts, run_opts;
  std::string stats_indicators, render_indicators, render_field = "rai";

  CLI::App* compute = app.add_subcommand("compute", "Compute per-region RAI and NSRP");
  add_common_options(compute, compute_opts);

  CLI::App* stats = app.add_subcommand("stats", "Moran's I, Gini, correlation table");
  add_common_options(stats, stats_opts);
  stats->add_option("--indicators", stats_indicators, "Indicator CSV from compute")->required();

  CLI::App* render = app.add_subcommand("render", "Render an SVG choropleth");
  add_common_options(render, render_opts);
  render->add_option("--indicators", render_indicators, "Indicator CSV from compute")->required();
  render->add_option("--field", render_field, "Field to map: rai or nsrp");

  CLI::App* run = app.add_subcommand("run", "compute, stats, and render in sequence");
  add_common_options(run, run_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (compute->parsed()) {
      const rai::ComputeResult result = rai::cmd_compute(build_config(compute_opts));
      print_notes(result.notes, "note");
      std::cout << result.regions_csv_path << "\n" << result.regions_json_path << "\n";
    } else if (stats->parsed()) {
      const rai::StatsResult result = rai::cmd_stats(build_config(stats_opts), stats_indicators);
      std::cout << result.stats_json_path << "\n";
    } else if (render->parsed()) {
      const rai::RenderResult result =
          rai::cmd_render(build_config(render_opts), render_indicators, render_field);
      print_notes(result.warnings, "warning");
      std::cout << result.svg_path << "\n";
    } else if (run->parsed()) {
      const rai::RunResult result = rai::cmd_run(build_config(run_opts));
      print_notes(result.compute.notes, "note");
      print_notes(result.render_rai.warnings, "warning");
      print_notes(result.render_nsrp.warnings, "warning");
      std::cout << result.compute.regions_csv_path << "\n"
                << result.compute.regions_json_path << "\n"
                << result.stats.stats_json_path << "\n"
                << result.render_rai.svg_path << "\n"
                << result.render_nsrp.svg_path << "\n"
                << result.timings_json_path << "\n";
    }
  } catch (const rai::ConfigError& e) {
    print_error("config", e.what());
    return 3;
  } catch (const rai::InputError& e) {
    print_error("input", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
