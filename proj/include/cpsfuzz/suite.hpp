#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpsfuzz/fuzz.hpp"

namespace cpsfuzz {

/// Campaign config document:
///
///   { "plant": "miniswat.plant.json", "strategy": "universal.strategy"?,
///     "goals": ["FIT201-Low", ...] | "all", "class": "causal-set",
///     "walks": 200, "walk_len": 3, "budget_secs": 60, "max_iterations": 0,
///     "seed": 1, "dt": {"FIT201-Low": 15}?, "prune_strong": false, "threads": 1 }
///
/// Relative paths are resolved against the config file's directory.
struct CampaignFile {
  std::filesystem::path plant;
  std::optional<std::filesystem::path> strategy;
  std::vector<std::string> goals;  // empty = all
  CampaignConfig config;
  std::vector<std::pair<std::string, double>> dt_overrides;
};

CampaignFile campaign_file_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const CampaignFile& file);
CampaignFile load_campaign_file(const std::filesystem::path& path);

nlohmann::json to_json(const CampaignConfig& config);

/// FNV-1a over the canonical JSON of the config, as 16 hex digits.
std::string config_digest(const nlohmann::json& config);

/// One campaign's emitted tests with everything cmd_prune needs to replay them.
nlohmann::json suite_to_json(const Plant& plant, const CampaignResult& result);

/// A reloaded suite entry plus the goal it was recorded against.
struct RecordedTest {
  SuiteEntry entry;
  SensorCondition goal;
  std::string goal_name;
  double dt = 0.0;
};

/// Throws ModelValidationError naming the missing field.
std::vector<RecordedTest> suite_from_json(const nlohmann::json& doc);
RecordedTest recorded_test_from_json(const nlohmann::json& entry, const SensorCondition& goal,
                                     const std::string& goal_name, double dt);

nlohmann::json ledger_to_json(const std::vector<CausalRecord>& ledger);

/// Per-goal counts and causal sets of a set of campaigns.
nlohmann::json report_to_json(const std::vector<CampaignResult>& results, std::uint64_t seed, const std::string& digest);

}  // namespace cpsfuzz
