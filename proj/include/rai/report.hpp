#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rai/config.hpp"
#include "rai/csv.hpp"
#include "rai/error.hpp"
#include "rai/indicators.hpp"
#include "rai/regions.hpp"
#include "rai/stats_tables.hpp"

namespace rai {

inline constexpr const char* kSchemaVersion = "1";

// FNV-1a 64-bit over file bytes, hex encoded; used to cross-reference the
// exact inputs a report was produced from.
inline std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file for checksum");
  std::uint64_t hash = 1469598103934665603ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + out;
}

// 6 significant digits; reports stay diffable while JSON keeps full precision.
inline std::string format_sig6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline void write_regions_csv(const std::vector<RegionIndicators>& indicators,
                              const RegionSet& regions, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << "region_code,name,pop_rural,pop_served,rai_percent,nsrp\n";
  for (const auto& row : indicators) {
    const Region* region = regions.find(row.code);
    out << csv_escape(row.code) << ',' << csv_escape(region ? region->name : "") << ','
        << format_sig6(row.pop_rural) << ',' << format_sig6(row.pop_served) << ','
        << (row.rai_percent ? format_sig6(*row.rai_percent) : "NA") << ','
        << format_sig6(row.nsrp) << "\n";
  }
  if (!out) throw InputError(path + ": write failed");
}

inline nlohmann::json config_echo_json(const PipelineConfig& config) {
  nlohmann::json tags = nlohmann::json::array();
  for (const auto& t : config.highway_tags) tags.push_back(t);
  nlohmann::json weights;
  if (config.weights.kind == WeightsSpec::Kind::kQueen) {
    weights = "queen";
  } else {
    weights = "knn:" + std::to_string(config.weights.k);
  }
  return nlohmann::json{
      {"threshold_m", config.threshold_m},
      {"highway_tags", tags},
      {"clip_roads_to_rural", config.clip_roads_to_rural},
      {"allow_empty_roads", config.allow_empty_roads},
      {"use_index", config.use_index},
      {"weights", weights},
      {"moran",
       config.moran_mode == MoranMode::kPermutation
           ? "perm:" + std::to_string(config.moran_permutations)
           : moran_mode_name(config.moran_mode)},
      {"gini_resource", config.gini_resource == GiniResourceMode::kServedPopulation
                            ? "served_population"
                            : "indicator_value"},
      {"seed", config.seed},
      {"region_code_key", config.region_code_key},
      {"region_name_key", config.region_name_key},
  };
}

inline void write_json_file(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw InputError(path + ": write failed");
}

inline nlohmann::json regions_json(const std::vector<RegionIndicators>& indicators,
                                   const RegionSet& regions, const IndicatorRun& run,
                                   const PipelineConfig& config,
                                   const std::map<std::string, std::string>& checksums) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : indicators) {
    const Region* region = regions.find(row.code);
    nlohmann::json j{
        {"region_code", row.code},
        {"name", region ? region->name : ""},
        {"pop_rural", row.pop_rural},
        {"pop_served", row.pop_served},
        {"nsrp", row.nsrp},
        {"rural_cells", row.rural_cells},
        {"served_cells", row.served_cells},
    };
    if (row.rai_percent) {
      j["rai_percent"] = *row.rai_percent;
    } else {
      j["rai_percent"] = nullptr;
    }
    rows.push_back(std::move(j));
  }
  return nlohmann::json{
      {"schema_version", kSchemaVersion},
      {"regions", rows},
      {"summary",
       {{"rural_cells", run.rural_cells},
        {"served_cells", run.served_cells},
        {"dem_skipped_cells", run.dem_skipped_cells}}},
      {"metadata", {{"config", config_echo_json(config)}, {"input_checksums", checksums}}},
  };
}

inline nlohmann::json moran_json(const MoranSummary& summary) {
  if (!summary.defined) {
    return nlohmann::json{{"defined", false}, {"reason", summary.undefined_reason}};
  }
  const MoranResult& r = summary.result;
  nlohmann::json j{
      {"defined", true},
      {"I", r.i},
      {"expectation", r.expectation},
      {"variance", r.variance},
      {"z_score", r.z_score},
      {"p_value", r.p_value},
      {"assumption", moran_mode_name(r.mode)},
      {"n", r.n},
  };
  if (r.mode == MoranMode::kPermutation) j["n_permutations"] = r.n_permutations;
  if (summary.knn_k_used > 0) j["knn_k"] = summary.knn_k_used;
  return j;
}

inline nlohmann::json gini_json(const GiniSummary& summary) {
  if (!summary.defined) {
    return nlohmann::json{{"defined", false}, {"reason", summary.undefined_reason}};
  }
  return nlohmann::json{{"defined", true}, {"g", summary.g}, {"category", summary.category}};
}

inline nlohmann::json correlation_json(const CorrelationResult& r) {
  if (!r.defined) {
    return nlohmann::json{{"defined", false}, {"n", r.n}, {"reason", r.undefined_reason}};
  }
  return nlohmann::json{
      {"defined", true}, {"r", r.r}, {"n", r.n}, {"p_value", r.p_value}, {"stars", r.stars}};
}

// Reads an indicator CSV produced by the compute step (or hand-made to the
// same schema); validates the NSRP identity per row.
inline std::vector<RegionIndicators> read_indicator_csv(const std::string& path) {
  const auto cells = load_csv(path);
  if (cells.empty()) throw InputError(path + ": empty indicator file");
  const std::vector<std::string> expected = {"region_code", "name",        "pop_rural",
                                             "pop_served",  "rai_percent", "nsrp"};
  if (cells[0] != expected) {
    throw InputError(path +
                     ": header must be region_code,name,pop_rural,pop_served,rai_percent,nsrp");
  }
  auto parse_num = [&](const std::string& s, std::size_t row, const char* col) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw InputError(path + ": row " + std::to_string(row + 1) + " column " + col +
                       ": cannot parse number '" + s + "'");
    }
    return v;
  };
  std::vector<RegionIndicators> out;
  std::map<std::string, bool> seen;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const auto& row = cells[i];
    if (row.size() != expected.size()) {
      throw InputError(path + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(row.size()) + " cells, want 6");
    }
    RegionIndicators ind;
    ind.code = row[0];
    if (ind.code.empty()) throw InputError(path + ": row " + std::to_string(i + 1) + ": empty region code");
    if (seen[ind.code]) throw InputError(path + ": duplicate region code '" + ind.code + "'");
    seen[ind.code] = true;
    ind.pop_rural = parse_num(row[2], i, "pop_rural");
    ind.pop_served = parse_num(row[3], i, "pop_served");
    if (row[4] != "NA") ind.rai_percent = parse_num(row[4], i, "rai_percent");
    ind.nsrp = parse_num(row[5], i, "nsrp");
    const double expected_nsrp = ind.pop_rural - ind.pop_served;
    const double tol = 1e-6 * std::max(1.0, std::abs(expected_nsrp));
    if (std::abs(ind.nsrp - expected_nsrp) > tol) {
      throw InputError(path + ": row " + std::to_string(i + 1) +
                       ": nsrp does not equal pop_rural - pop_served");
    }
    out.push_back(std::move(ind));
  }
  std::sort(out.begin(), out.end(),
            [](const RegionIndicators& a, const RegionIndicators& b) { return a.code < b.code; });
  return out;
}

}  // namespace rai
