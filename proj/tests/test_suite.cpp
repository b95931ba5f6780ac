#include <doctest.h>

#include "cpsfuzz/errors.hpp"
#include "cpsfuzz/plant_io.hpp"
#include "cpsfuzz/suite.hpp"

using namespace cpsfuzz;
using nlohmann::json;

namespace {

CampaignResult small_campaign(const Plant& p) {
  CampaignConfig cfg;
  cfg.walks = 40;
  cfg.max_iterations = 12;
  cfg.seed = 3;
  return Campaign(p, universal_strategy(), make_goal(p, "FIT201-Low"), cfg).run();
}

}  // namespace

TEST_CASE("campaign files") {
  auto f = load_campaign_file(std::string(CPSFUZZ_DATA_DIR) + "/campaigns/causal.json");
  CHECK(f.plant.filename() == "miniswat.plant.json");
  CHECK(f.plant.is_absolute() == std::filesystem::path(CPSFUZZ_DATA_DIR).is_absolute());
  REQUIRE(f.strategy);
  CHECK(f.goals.size() == 4);
  CHECK(f.config.kind == ClassKind::CapabilitySet);
  CHECK(f.config.max_iterations == 40);

  auto back = campaign_file_from_json(to_json(f));
  CHECK(back.plant == f.plant);
  CHECK(back.goals == f.goals);
  CHECK(to_json(back.config) == to_json(f.config));

  auto all = campaign_file_from_json({{"plant", "p.json"}, {"goals", "all"}, {"dt", {{"FIT201-Low", 30}}}}, "/tmp");
  CHECK(all.goals.empty());
  CHECK(all.plant == std::filesystem::path("/tmp/p.json"));
  REQUIRE(all.dt_overrides.size() == 1);
  CHECK(all.dt_overrides[0].second == 30);

  CHECK_THROWS_AS(campaign_file_from_json(json::object()), ModelValidationError);
  CHECK_THROWS_AS(campaign_file_from_json({{"plant", "p"}, {"class", "weak"}}), ModelValidationError);
}

TEST_CASE("config digest") {
  CampaignConfig a;
  auto d = config_digest(to_json(a));
  CHECK(d.size() == 16);
  CHECK(d.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(config_digest(to_json(a)) == d);
  a.seed = 2;
  CHECK(config_digest(to_json(a)) != d);
}

TEST_CASE("suites reload with origins that replay exactly") {
  Plant p(miniswat());
  auto result = small_campaign(p);
  REQUIRE_FALSE(result.tests.empty());
  auto doc = suite_to_json(p, result);
  CHECK(doc.at("goal") == "FIT201-Low");
  CHECK(doc.at("stats").at("iterations") == 12);
  auto reparsed = json::parse(doc.dump());
  auto tests = suite_from_json(reparsed);
  REQUIRE(tests.size() == result.tests.size());
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto& a = result.tests[i];
    const auto& b = tests[i].entry;
    CHECK(b.x0 == a.x0);
    CHECK(b.q0 == a.q0);
    CHECK(b.history == a.history);
    CHECK(b.executed == a.executed);
    CHECK(b.causal_set == a.causal_set);
    CHECK(tests[i].dt == result.goal.dt);
    auto pr = prune(p, {b.history, b.q0, b.x0, tests[i].goal, tests[i].dt});
    CHECK(pr.minimized.history == a.history);
  }
  CHECK(reparsed.at("tests")[0].at("ledger").is_array());
}

TEST_CASE("missing suite fields are named") {
  Plant p(miniswat());
  auto doc = suite_to_json(p, small_campaign(p));
  REQUIRE_FALSE(doc.at("tests").empty());
  doc["tests"][0].erase("origin");
  try {
    suite_from_json(doc);
    FAIL("expected ModelValidationError");
  } catch (const ModelValidationError& e) {
    CHECK(std::string(e.what()).find("origin") != std::string::npos);
  }
  CHECK_THROWS_AS(suite_from_json(json::object()), ModelValidationError);
}

TEST_CASE("report") {
  Plant p(miniswat());
  auto r = small_campaign(p);
  auto rep = report_to_json({r, r}, 3, "0123456789abcdef");
  CHECK(rep.at("total") == 2 * r.tests.size());
  CHECK(rep.at("goals").size() == 2);
  CHECK(rep.at("goals")[0].at("causal_sets").size() == r.tests.size());
  CHECK(rep.at("config_digest") == "0123456789abcdef");
}

TEST_CASE("bundled plant file matches the built-in model") {
  CHECK(load_plant(std::string(CPSFUZZ_DATA_DIR) + "/miniswat.plant.json") == miniswat());
}
