#include "cpsfuzz/suite.hpp"

#include <cstdio>
#include <map>

#include "cpsfuzz/errors.hpp"
#include "cpsfuzz/plant_io.hpp"

namespace cpsfuzz {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key, const char* what) {
  if (!doc.is_object() || !doc.contains(key))
    throw ModelValidationError(std::string(what) + ": missing field '" + key + "'");
  return doc.at(key);
}

json readings_json(const Readings& r) {
  json out = json::object();
  for (const auto& [k, v] : r.entries()) out[k] = v;
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

nlohmann::json to_json(const CampaignConfig& c) {
  return {{"class", std::string(to_string(c.kind))},
          {"prune_strong", c.prune_strong},
          {"walks", c.walks},
          {"walk_len", c.walk_len},
          {"budget_secs", c.budget_secs},
          {"max_iterations", c.max_iterations},
          {"seed", c.seed}};
}

CampaignFile campaign_file_from_json(const json& doc, const std::filesystem::path& base_dir) {
  try {
    CampaignFile f;
    f.plant = resolve(base_dir, require(doc, "plant", "campaign").get<std::string>());
    if (doc.contains("strategy")) f.strategy = resolve(base_dir, doc.at("strategy").get<std::string>());
    if (doc.contains("goals")) {
      const auto& g = doc.at("goals");
      if (g.is_string()) {
        if (g.get<std::string>() != "all") f.goals.push_back(g.get<std::string>());
      } else {
        f.goals = g.get<std::vector<std::string>>();
      }
    }
    if (doc.contains("class")) {
      auto k = parse_class_kind(doc.at("class").get<std::string>());
      if (!k) throw ModelValidationError("campaign: unknown class '" + doc.at("class").get<std::string>() + "'");
      f.config.kind = *k;
    }
    f.config.walks = doc.value("walks", f.config.walks);
    f.config.walk_len = doc.value("walk_len", f.config.walk_len);
    f.config.budget_secs = doc.value("budget_secs", f.config.budget_secs);
    f.config.max_iterations = doc.value("max_iterations", f.config.max_iterations);
    f.config.seed = doc.value("seed", f.config.seed);
    f.config.prune_strong = doc.value("prune_strong", f.config.prune_strong);
    f.config.threads = doc.value("threads", f.config.threads);
    if (doc.contains("dt")) {
      for (const auto& [goal, dt] : doc.at("dt").items()) f.dt_overrides.emplace_back(goal, dt.get<double>());
    }
    if (f.config.walks == 0) throw ModelValidationError("campaign: walks must be positive");
    if (f.config.walk_len == 0) throw ModelValidationError("campaign: walk_len must be positive");
    if (f.config.budget_secs < 0) throw ModelValidationError("campaign: budget_secs must not be negative");
    return f;
  } catch (const json::exception& e) {
    throw ModelValidationError(std::string("campaign: ") + e.what());
  }
}

json to_json(const CampaignFile& f) {
  json doc = to_json(f.config);
  doc["plant"] = f.plant.string();
  if (f.strategy) doc["strategy"] = f.strategy->string();
  if (f.goals.empty()) {
    doc["goals"] = "all";
  } else {
    doc["goals"] = f.goals;
  }
  if (!f.dt_overrides.empty()) {
    json dt = json::object();
    for (const auto& [g, v] : f.dt_overrides) dt[g] = v;
    doc["dt"] = dt;
  }
  return doc;
}

CampaignFile load_campaign_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ModelValidationError(path.string() + ": " + e.what());
  }
  return campaign_file_from_json(doc, path.parent_path());
}

std::string config_digest(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

json ledger_to_json(const std::vector<CausalRecord>& ledger) {
  json out = json::array();
  for (const auto& r : ledger) {
    json rec = {{"capability", to_string(r.capability)},
                {"k", r.k},
                {"l", r.l},
                {"verdict", r.verdict == CausalRecord::Verdict::Causal ? "causal" : "pruned"}};
    if (r.counterexample) {
      rec["counterexample"] = to_string(r.counterexample->history);
      rec["counterexample_successful"] = r.counterexample->successful;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

json suite_to_json(const Plant& plant, const CampaignResult& result) {
  json tests = json::array();
  for (const auto& e : result.tests) {
    tests.push_back({{"iteration", e.iteration},
                     {"origin", {{"q0", to_json(e.q0)}, {"x0", to_json(e.x0)}}},
                     {"executed", to_string(e.executed)},
                     {"history", to_string(e.history)},
                     {"causal_set", to_string(e.causal_set)},
                     {"ledger", ledger_to_json(e.ledger)},
                     {"probes", e.probes},
                     {"success_step", e.success_step},
                     {"final_readings", readings_json(e.final_readings)}});
  }
  json log = result.stats.log;
  return {{"plant", plant.model().name},
          {"goal", result.goal.name},
          {"condition", to_string(result.goal.condition)},
          {"dt", result.goal.dt},
          {"config", to_json(result.config)},
          {"tests", std::move(tests)},
          {"stats",
           {{"iterations", result.stats.iterations},
            {"successes", result.stats.successes},
            {"dropped_equivalent", result.stats.dropped_equivalent},
            {"errors", result.stats.errors},
            {"log", std::move(log)}}},
          {"pairwise_distinct", result.pairwise_distinct}};
}

RecordedTest recorded_test_from_json(const json& entry, const SensorCondition& goal, const std::string& goal_name,
                                     double dt) {
  try {
    RecordedTest t;
    t.goal = goal;
    t.goal_name = goal_name;
    t.dt = dt;
    const auto& origin = require(entry, "origin", "suite entry");
    t.entry.q0 = control_state_from_json(require(origin, "q0", "suite entry origin"));
    t.entry.x0 = physical_state_from_json(require(origin, "x0", "suite entry origin"));
    t.entry.history = parse_history(require(entry, "history", "suite entry").get<std::string>());
    t.entry.executed = entry.contains("executed") ? parse_history(entry.at("executed").get<std::string>())
                                                  : t.entry.history;
    t.entry.causal_set = cset(t.entry.history);
    t.entry.iteration = entry.value("iteration", std::size_t{0});
    t.entry.success_step = entry.value("success_step", std::size_t{0});
    return t;
  } catch (const json::exception& e) {
    throw ModelValidationError(std::string("suite entry: ") + e.what());
  }
}

std::vector<RecordedTest> suite_from_json(const json& doc) {
  try {
    auto goal = parse_sensor_condition(require(doc, "condition", "suite").get<std::string>());
    auto name = doc.value("goal", std::string{});
    double dt = require(doc, "dt", "suite").get<double>();
    std::vector<RecordedTest> out;
    for (const auto& e : require(doc, "tests", "suite")) out.push_back(recorded_test_from_json(e, goal, name, dt));
    return out;
  } catch (const json::exception& e) {
    throw ModelValidationError(std::string("suite: ") + e.what());
  }
}

json report_to_json(const std::vector<CampaignResult>& results, std::uint64_t seed, const std::string& digest) {
  json goals = json::array();
  std::size_t total = 0;
  double wall = 0.0;
  for (const auto& r : results) {
    json sets = json::array();
    for (const auto& t : r.tests) sets.push_back(to_string(t.causal_set));
    goals.push_back({{"goal", r.goal.name},
                     {"class", std::string(to_string(r.config.kind))},
                     {"count", r.tests.size()},
                     {"causal_sets", std::move(sets)},
                     {"iterations", r.stats.iterations},
                     {"successes", r.stats.successes},
                     {"dropped_equivalent", r.stats.dropped_equivalent},
                     {"errors", r.stats.errors},
                     {"pairwise_distinct", r.pairwise_distinct},
                     {"wall_secs", r.stats.wall_secs}});
    total += r.tests.size();
    wall += r.stats.wall_secs;
  }
  return {{"seed", seed}, {"config_digest", digest}, {"goals", std::move(goals)}, {"total", total}, {"wall_secs", wall}};
}

}  // namespace cpsfuzz
