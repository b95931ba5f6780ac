#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cpsfuzz/errors.hpp"
#include "cpsfuzz/plant.hpp"
#include "cpsfuzz/plant_io.hpp"

using namespace cpsfuzz;

namespace {

// source -(MV1, FIT1)-> T1 -(P1, FIT2)-> drain, 1 m^2, 1 m^3/h each way.
PlantModel one_tank() {
  PlantModel m;
  m.name = "one";
  m.tick = 1.0;
  m.tanks.push_back({"T1", 1.0, 2000.0, "LIT1", 400.0, 600.0, 500.0});
  m.pipes.push_back({"in", "source", "T1", "MV1", {}, 1.0, "FIT1"});
  m.pipes.push_back({"out", "T1", "drain", std::nullopt, {"P1"}, 1.0, "FIT2"});
  m.sensors.push_back({"LIT1", {0, 2000, 100, 1900}, std::nullopt, 0.0});
  m.sensors.push_back({"FIT1", {0, 5, 0, 3}, std::nullopt, 0.0});
  m.sensors.push_back({"FIT2", {0, 5, 0, 3}, std::nullopt, 0.0});
  m.actuators.push_back({"MV1", {{"open", "close"}}, "close"});
  m.actuators.push_back({"P1", {{"on", "off"}}, "off"});
  return m;
}

double reading(const Plant& p, const PhysicalState& x, const std::string& s) { return *p.observe(x).get(s); }

std::size_t act(const Plant& p, const std::string& id) { return *p.actuator_index(id); }

Injector always(CapabilitySet caps) {
  return [caps](std::size_t, const PhysicalState&) { return caps; };
}

}  // namespace

TEST_CASE("component kinds follow prefixes") {
  CHECK(kind_of("MV101") == ComponentKind::Valve);
  CHECK(kind_of("P101") == ComponentKind::Pump);
  CHECK(kind_of("LIT101") == ComponentKind::LevelSensor);
  CHECK(kind_of("FIT201") == ComponentKind::FlowSensor);
  CHECK(kind_of("DPIT301") == ComponentKind::PressureSensor);
  CHECK_FALSE(kind_of("XYZ1"));
}

TEST_CASE("miniswat validates and its data file matches") {
  CHECK(validate_model(miniswat()).empty());
  CHECK(load_plant(CPSFUZZ_DATA_DIR "/miniswat.plant.json") == miniswat());
}

TEST_CASE("plant json round trip") {
  auto m = miniswat();
  CHECK(plant_from_json(plant_to_json(m)) == m);
  auto o = one_tank();
  CHECK(plant_from_json(plant_to_json(o)) == o);
}

TEST_CASE("model validation catches structural problems") {
  auto dup = one_tank();
  dup.sensors.push_back(dup.sensors[1]);
  CHECK_THROWS_AS(Plant{dup}, ModelValidationError);

  auto prefix = one_tank();
  prefix.actuators[0].id = "V1";
  CHECK_FALSE(validate_model(prefix).empty());

  auto domain = one_tank();
  domain.sensors[0].domain.safe_lo = 1950;
  CHECK_FALSE(validate_model(domain).empty());

  auto cycle = miniswat();
  cycle.pipes.push_back({"back", "T401", "T101", std::nullopt, {}, 1.0, std::nullopt});
  bool found = false;
  for (const auto& msg : validate_model(cycle)) found |= msg.find("cycle") != std::string::npos;
  CHECK(found);

  auto rule = one_tank();
  rule.controller.push_back({"r", parse_sensor_condition("LIT9 < 3"), {{"MV1", "open"}}, 1});
  CHECK_FALSE(validate_model(rule).empty());

  CHECK_THROWS_AS(plant_from_json(nlohmann::json::parse(R"({"name": "x"})")), ModelValidationError);
}

TEST_CASE("observe") {
  Plant p(miniswat());
  auto x = p.state_with_levels({500, 650, 650});
  CHECK(reading(p, x, "LIT101") == 500);

  PhysicalState closed = x;
  for (auto& f : closed.flows) f = 0.0;
  for (const char* s : {"FIT101", "FIT201", "FIT301", "FIT401"}) CHECK(reading(p, closed, s) == 0.0);

  PhysicalState running = x;
  running.flows[*p.pipe_index("uf")] = 2.0;
  CHECK(reading(p, running, "DPIT301") == doctest::Approx(2.0 * 0.2));
  running.flows[*p.pipe_index("uf")] = 9.0;
  CHECK(reading(p, running, "DPIT301") == 1.0);  // clamped to hi
}

TEST_CASE("control step: rule firing, hold, priority and conflicts") {
  auto m = one_tank();
  m.controller.push_back({"low", parse_sensor_condition("LIT1 < 500"), {{"MV1", "open"}}, 1});
  m.controller.push_back({"very_low", parse_sensor_condition("LIT1 < 200"), {{"MV1", "close"}}, 2});
  Plant p(m);
  auto q0 = p.initial_control();
  auto at = [&](double level) {
    Readings r;
    r.set("LIT1", level);
    r.set("FIT1", 0);
    r.set("FIT2", 0);
    return r;
  };
  auto [q1, a1] = p.control_step(q0, at(400));
  CHECK(a1.get("MV1") == "open");
  auto [q2, a2] = p.control_step(q1, at(800));
  CHECK(a2.get("MV1") == "open");  // held
  CHECK(q2 == q1);
  auto [q3, a3] = p.control_step(q0, at(100));
  CHECK(a3.get("MV1") == "close");  // priority 2 wins

  auto clash = one_tank();
  clash.controller.push_back({"a", parse_sensor_condition("LIT1 < 500"), {{"MV1", "open"}}, 1});
  clash.controller.push_back({"b", parse_sensor_condition("LIT1 < 300"), {{"MV1", "close"}}, 1});
  Plant pc(clash);
  CHECK_NOTHROW(pc.control_step(pc.initial_control(), at(400)));
  CHECK_THROWS_AS(pc.control_step(pc.initial_control(), at(250)), ModelValidationError);
}

TEST_CASE("physics step") {
  Plant p(one_tank());
  auto x = p.state_with_levels({500});
  Configurations off;
  off.set("MV1", "close");
  off.set("P1", "off");
  auto y = p.physics_step(x, off, 600);
  CHECK(y.levels == x.levels);
  CHECK(y.clock == x.clock + 600);

  Configurations fill;
  fill.set("MV1", "open");
  fill.set("P1", "off");
  auto z = p.physics_step(x, fill, 3600);
  CHECK(z.levels[0] == doctest::Approx(1500.0).epsilon(1e-12));  // 1 m^3/h into 1 m^2 for an hour

  Configurations drain;
  drain.set("MV1", "close");
  drain.set("P1", "on");
  auto empty = p.state_with_levels({0});
  auto e = p.physics_step(empty, drain, 60);
  CHECK(e.levels[0] == 0.0);
  CHECK(e.flows[*p.pipe_index("out")] == 0.0);
}

TEST_CASE("monotone level with only an inflow") {
  Plant p(one_tank());
  PhysicsAudit audit;
  auto states = run_plant(p, p.initial_control(), p.state_with_levels({100}), 7200,
                          always({{"MV1", "open"}, {"P1", "off"}}), &audit);
  for (std::size_t i = 1; i < states.size(); ++i) CHECK(states[i].second.levels[0] >= states[i - 1].second.levels[0]);
  CHECK(states.back().second.levels[0] == 2000.0);  // clamped at max, inflow cut
  CHECK_FALSE(audit.clamps.empty());
}

TEST_CASE("spoofed readings steer the controller, never the physics") {
  Plant p(miniswat());
  auto x = p.state_with_levels({250, 650, 650});
  auto q = p.initial_control();
  auto q_true = q, q_spoof = q;
  auto x_true = x, x_spoof = x;
  p.advance(q_true, x_true, CapabilitySet{}, 1);
  p.advance(q_spoof, x_spoof, CapabilitySet{{"LIT101", "800"}}, 1);
  std::size_t mv101 = act(p, "MV101");
  CHECK(miniswat().actuators[mv101].domain.values[q_true.commanded[mv101]] == "open");
  CHECK(miniswat().actuators[mv101].domain.values[q_spoof.commanded[mv101]] == "close");
  CHECK(reading(p, x_spoof, "LIT101") < 300);  // the recorded state is the true one

  // With no controller rules a spoof cannot change anything.
  Plant inert(one_tank());
  auto a = run_plant(inert, inert.initial_control(), inert.initial_state(), 900, always({}));
  auto b = run_plant(inert, inert.initial_control(), inert.initial_state(), 900, always({{"LIT1", "10"}}));
  CHECK(a == b);
}

TEST_CASE("actuator override holds against the controller") {
  Plant p(miniswat());
  auto states = run_plant(p, p.initial_control(), p.state_with_levels({250, 650, 650}), 600,
                          always({{"MV101", "close"}}));
  for (const auto& [q, x] : states) CHECK(reading(p, x, "FIT101") == 0.0);
}

TEST_CASE("null injection equals an uninjected run") {
  Plant p(miniswat());
  auto a = run_plant(p, p.initial_control(), p.initial_state(), 3600, always({}));
  auto q = p.initial_control();
  auto x = p.initial_state();
  p.advance(q, x, CapabilitySet{}, 3600);
  CHECK(a.back().second == x);
  CHECK(a.back().first == q);
}

TEST_CASE("capability domain errors") {
  Plant p(miniswat());
  CHECK_THROWS_AS(p.resolve({{"MV101", "sideways"}}), CapabilityDomainError);
  CHECK_THROWS_AS(p.resolve({{"XX1", "on"}}), CapabilityDomainError);
  CHECK_THROWS_AS(p.resolve({{"LIT101", "5000"}}), CapabilityDomainError);
  CHECK_NOTHROW(p.resolve({{"LIT101", "800"}, {"P101", "off"}}));
}

TEST_CASE("goal evaluation on true readings") {
  Plant p(miniswat());
  CHECK(p.goal_satisfied(parse_sensor_condition("LIT101 < 250"), p.state_with_levels({200, 650, 650})));
  CHECK(p.goal_satisfied(parse_sensor_condition("LIT101 >= 250 and LIT101 <= 1100"), p.state_with_levels({500, 650, 650})));
  auto x = p.initial_state();
  x.flows[*p.pipe_index("uf")] = 0.25;  // 0.05 bar
  CHECK(p.goal_satisfied(parse_sensor_condition("DPIT301 < 0.1"), x));
  CHECK_THROWS_AS(p.goal_satisfied(parse_sensor_condition("LIT999 < 1"), x), UnknownSensorError);
}

TEST_CASE("sustained MV101 open overflows T101 within three level intervals") {
  Plant p(miniswat());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto q = p.initial_control();
    auto x = p.random_nominal_state(rng);
    for (int k = 0; k < 3; ++k) p.advance(q, x, CapabilitySet{{"MV101", "open"}}, 600);
    CHECK(reading(p, x, "LIT101") > 1100);
  }
}

TEST_CASE("random nominal states lie in the nominal band") {
  Plant p(miniswat());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto x = p.random_nominal_state(rng);
    for (double l : x.levels) CHECK((l >= 500 && l <= 800));
    CHECK(p.unsafe_sensors(x).empty());
  }
}

TEST_CASE("conservation per sub-step, computed independently") {
  Plant p(miniswat());
  const auto& m = p.model();
  auto states = run_plant(p, p.initial_control(), p.initial_state(), 6 * 3600,
                          always({{"MV101", "open"}, {"P401", "off"}}));
  double worst = 0.0;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const auto& a = states[i - 1].second;
    const auto& b = states[i].second;
    bool clamp = false;
    double dv = 0.0;
    for (std::size_t t = 0; t < m.tanks.size(); ++t) {
      clamp |= b.levels[t] <= 0.0 || b.levels[t] >= m.tanks[t].max_level;
      dv += (b.levels[t] - a.levels[t]) / 1000.0 * m.tanks[t].area;
    }
    if (clamp) continue;
    double external = 0.0;
    for (std::size_t k = 0; k < m.pipes.size(); ++k) {
      if (m.pipes[k].from == "source") external += b.flows[k] * m.tick / 3600.0;
      if (m.pipes[k].to == "drain") external -= b.flows[k] * m.tick / 3600.0;
    }
    worst = std::max(worst, std::abs(dv - external));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("trajectories are deterministic and logged once per interval") {
  Plant p(miniswat());
  auto run = [&] {
    std::vector<TrajectoryRecord> log;
    run_plant(p, p.initial_control(), p.initial_state(), 1800, always({{"P101", "off"}}), nullptr, &log);
    std::ostringstream os;
    write_trajectory(os, log);
    return std::make_pair(log.size(), os.str());
  };
  auto [n1, a] = run();
  auto [n2, b] = run();
  CHECK(n1 == 1800);
  CHECK(a == b);
  CHECK(a.find("\"injected\"") != std::string::npos);
}

TEST_CASE("state json round trip") {
  Plant p(miniswat());
  std::mt19937_64 rng(2);
  auto x = p.random_nominal_state(rng);
  CHECK(physical_state_from_json(to_json(x)) == x);
  auto q = p.initial_control();
  CHECK(control_state_from_json(to_json(q)) == q);
}
