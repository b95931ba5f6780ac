#include "cpsfuzz/plant_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ModelValidationError(where + ": missing key '" + key + "'");
  return obj.at(key);
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return field(obj, key, where).get<T>();
  } catch (const json::exception& e) {
    throw ModelValidationError(where + ": bad value for '" + key + "': " + e.what());
  }
}

std::pair<double, double> pair_of(const json& obj, const char* key, const std::string& where) {
  auto v = get<std::vector<double>>(obj, key, where);
  if (v.size() != 2) throw ModelValidationError(where + ": '" + key + "' must be [lo, hi]");
  return {v[0], v[1]};
}

std::optional<std::string> opt_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return get<std::string>(obj, key, where);
}

}  // namespace

PlantModel plant_from_json(const json& doc) {
  PlantModel m;
  if (!doc.is_object()) throw ModelValidationError("plant document must be a JSON object");
  m.name = get<std::string>(doc, "name", "plant");
  m.tick = get<double>(doc, "tick", "plant");
  for (const auto& t : field(doc, "tanks", "plant")) {
    std::string where = "tank";
    TankSpec spec;
    spec.id = get<std::string>(t, "id", where);
    where = "tank '" + spec.id + "'";
    spec.area = get<double>(t, "area", where);
    spec.max_level = get<double>(t, "max_level", where);
    spec.level_sensor = get<std::string>(t, "level_sensor", where);
    std::tie(spec.nominal_lo, spec.nominal_hi) = pair_of(t, "nominal", where);
    spec.initial = t.contains("initial") ? get<double>(t, "initial", where) : (spec.nominal_lo + spec.nominal_hi) / 2;
    m.tanks.push_back(std::move(spec));
  }
  for (const auto& p : field(doc, "pipes", "plant")) {
    std::string where = "pipe";
    PipeSpec spec;
    spec.id = get<std::string>(p, "id", where);
    where = "pipe '" + spec.id + "'";
    spec.from = get<std::string>(p, "from", where);
    spec.to = get<std::string>(p, "to", where);
    spec.valve = opt_string(p, "valve", where);
    if (p.contains("pumps")) spec.pumps = get<std::vector<std::string>>(p, "pumps", where);
    spec.nominal_flow = get<double>(p, "nominal_flow", where);
    spec.flow_sensor = opt_string(p, "flow_sensor", where);
    m.pipes.push_back(std::move(spec));
  }
  for (const auto& s : field(doc, "sensors", "plant")) {
    std::string where = "sensor";
    SensorSpec spec;
    spec.id = get<std::string>(s, "id", where);
    where = "sensor '" + spec.id + "'";
    std::tie(spec.domain.lo, spec.domain.hi) = pair_of(s, "range", where);
    std::tie(spec.domain.safe_lo, spec.domain.safe_hi) = pair_of(s, "safe", where);
    spec.pipe = opt_string(s, "pipe", where);
    if (s.contains("gain")) spec.gain = get<double>(s, "gain", where);
    m.sensors.push_back(std::move(spec));
  }
  for (const auto& a : field(doc, "actuators", "plant")) {
    std::string where = "actuator";
    ActuatorSpec spec;
    spec.id = get<std::string>(a, "id", where);
    where = "actuator '" + spec.id + "'";
    spec.domain.values = get<std::vector<std::string>>(a, "values", where);
    spec.initial = get<std::string>(a, "initial", where);
    m.actuators.push_back(std::move(spec));
  }
  if (doc.contains("controller")) {
    for (const auto& r : doc.at("controller")) {
      std::string where = "rule";
      ControlRule rule;
      rule.name = get<std::string>(r, "name", where);
      where = "rule '" + rule.name + "'";
      try {
        rule.guard = parse_sensor_condition(get<std::string>(r, "guard", where));
      } catch (const ParseError& e) {
        throw ModelValidationError(where + ": guard: " + e.what());
      }
      const json& cmds = field(r, "commands", where);
      if (!cmds.is_object()) throw ModelValidationError(where + ": 'commands' must be an object");
      for (const auto& [act, val] : cmds.items()) {
        if (!val.is_string()) throw ModelValidationError(where + ": command for '" + act + "' must be a string");
        rule.commands.emplace_back(act, val.get<std::string>());
      }
      std::sort(rule.commands.begin(), rule.commands.end());
      rule.priority = get<int>(r, "priority", where);
      m.controller.push_back(std::move(rule));
    }
  }
  return m;
}

json plant_to_json(const PlantModel& m) {
  json doc;
  doc["name"] = m.name;
  doc["tick"] = m.tick;
  doc["tanks"] = json::array();
  for (const auto& t : m.tanks) {
    doc["tanks"].push_back({{"id", t.id},
                            {"area", t.area},
                            {"max_level", t.max_level},
                            {"level_sensor", t.level_sensor},
                            {"nominal", {t.nominal_lo, t.nominal_hi}},
                            {"initial", t.initial}});
  }
  doc["pipes"] = json::array();
  for (const auto& p : m.pipes) {
    json j = {{"id", p.id}, {"from", p.from}, {"to", p.to}, {"nominal_flow", p.nominal_flow}};
    if (p.valve) j["valve"] = *p.valve;
    if (!p.pumps.empty()) j["pumps"] = p.pumps;
    if (p.flow_sensor) j["flow_sensor"] = *p.flow_sensor;
    doc["pipes"].push_back(std::move(j));
  }
  doc["sensors"] = json::array();
  for (const auto& s : m.sensors) {
    json j = {{"id", s.id},
              {"range", {s.domain.lo, s.domain.hi}},
              {"safe", {s.domain.safe_lo, s.domain.safe_hi}}};
    if (s.pipe) j["pipe"] = *s.pipe;
    if (s.gain != 0.0) j["gain"] = s.gain;
    doc["sensors"].push_back(std::move(j));
  }
  doc["actuators"] = json::array();
  for (const auto& a : m.actuators)
    doc["actuators"].push_back({{"id", a.id}, {"values", a.domain.values}, {"initial", a.initial}});
  doc["controller"] = json::array();
  for (const auto& r : m.controller) {
    json cmds = json::object();
    for (const auto& [act, val] : r.commands) cmds[act] = val;
    doc["controller"].push_back(
        {{"name", r.name}, {"guard", to_string(r.guard)}, {"commands", cmds}, {"priority", r.priority}});
  }
  return doc;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

PlantModel load_plant(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ModelValidationError(path.string() + ": " + e.what());
  }
  return plant_from_json(doc);
}

void save_plant(const PlantModel& model, const std::filesystem::path& path) {
  write_text_file(path, plant_to_json(model).dump(2) + "\n");
}

json to_json(const PhysicalState& x) { return {{"levels", x.levels}, {"flows", x.flows}, {"clock", x.clock}}; }

PhysicalState physical_state_from_json(const json& doc) {
  PhysicalState x;
  x.levels = get<std::vector<double>>(doc, "levels", "physical state");
  x.flows = get<std::vector<double>>(doc, "flows", "physical state");
  x.clock = get<double>(doc, "clock", "physical state");
  return x;
}

json to_json(const ControlState& q) { return {{"commanded", q.commanded}}; }

ControlState control_state_from_json(const json& doc) {
  ControlState q;
  q.commanded = get<std::vector<std::size_t>>(doc, "commanded", "control state");
  return q;
}

void write_trajectory(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  for (const auto& r : records) {
    json readings = json::object();
    for (const auto& [s, v] : r.readings.entries()) readings[s] = v;
    json configs = json::object();
    for (const auto& [a, v] : r.configurations.entries()) configs[a] = v;
    json injected = json::array();
    for (const auto& cap : r.injected) injected.push_back(to_string(cap));
    out << json{{"clock", r.clock}, {"readings", readings}, {"configurations", configs}, {"injected", injected}}.dump()
        << "\n";
  }
}

}  // namespace cpsfuzz
