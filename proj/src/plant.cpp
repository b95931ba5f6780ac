#include "cpsfuzz/plant.hpp"

#include <algorithm>
#include <charconv>
#include <climits>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

namespace {

template <typename T>
std::optional<std::size_t> find_id(const std::vector<T>& items, std::string_view id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return i;
  }
  return std::nullopt;
}

std::string enabling_value(ComponentKind kind) { return kind == ComponentKind::Valve ? "open" : "on"; }

std::size_t tick_count(double dt, double tick) {
  double n = dt / tick;
  double r = std::round(n);
  if (!(dt > 0) || std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
    std::ostringstream msg;
    msg << "interval " << dt << " s is not a positive multiple of the tick " << tick << " s";
    throw Error(msg.str());
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

std::vector<std::string> validate_model(const PlantModel& m) {
  std::vector<std::string> out;
  auto bad = [&](std::string msg) { out.push_back(std::move(msg)); };

  if (!(m.tick > 0)) bad("tick must be positive");

  std::set<std::string> ids;
  auto claim = [&](const std::string& id, std::string_view what) {
    if (id.empty()) bad(std::string(what) + " with empty id");
    else if (!ids.insert(id).second) bad("duplicate id '" + id + "'");
  };
  for (const auto& t : m.tanks) claim(t.id, "tank");
  for (const auto& p : m.pipes) claim(p.id, "pipe");
  for (const auto& s : m.sensors) claim(s.id, "sensor");
  for (const auto& a : m.actuators) claim(a.id, "actuator");
  if (ids.count(std::string(kSource)) || ids.count(std::string(kDrain))) bad("'source' and 'drain' are reserved");

  for (const auto& s : m.sensors) {
    auto kind = kind_of(s.id);
    if (!kind || !is_sensor(*kind)) {
      bad("sensor '" + s.id + "' does not have a sensor prefix (LIT, FIT, DPIT)");
      continue;
    }
    const auto& d = s.domain;
    if (!(d.lo <= d.safe_lo && d.safe_lo < d.safe_hi && d.safe_hi <= d.hi))
      bad("sensor '" + s.id + "' needs lo <= safe_lo < safe_hi <= hi");
    if (*kind == ComponentKind::PressureSensor) {
      if (!s.pipe || !find_id(m.pipes, *s.pipe)) bad("pressure sensor '" + s.id + "' needs an existing upstream pipe");
      if (!(s.gain > 0)) bad("pressure sensor '" + s.id + "' needs a positive gain");
    }
  }

  std::map<std::string, int> actuator_uses;
  for (const auto& a : m.actuators) {
    auto kind = kind_of(a.id);
    if (!kind || !is_actuator(*kind)) {
      bad("actuator '" + a.id + "' does not have an actuator prefix (MV, P)");
      continue;
    }
    std::set<std::string> vals(a.domain.values.begin(), a.domain.values.end());
    if (a.domain.values.size() < 2) bad("actuator '" + a.id + "' needs at least two values");
    if (vals.size() != a.domain.values.size()) bad("actuator '" + a.id + "' has duplicate values");
    if (!vals.count(enabling_value(*kind)))
      bad("actuator '" + a.id + "' domain lacks '" + enabling_value(*kind) + "'");
    if (!vals.count(a.initial)) bad("actuator '" + a.id + "' initial value '" + a.initial + "' not in domain");
    actuator_uses[a.id] = 0;
  }

  std::map<std::string, int> sensor_uses;
  for (const auto& s : m.sensors) {
    if (s.id.rfind("DPIT", 0) != 0) sensor_uses[s.id] = 0;
  }
  auto use_sensor = [&](const std::string& id, ComponentKind want, const std::string& owner) {
    auto idx = find_id(m.sensors, id);
    if (!idx || kind_of(id) != want) {
      bad(owner + " references missing " + std::string(to_string(want)) + " '" + id + "'");
      return;
    }
    ++sensor_uses[id];
  };

  for (const auto& t : m.tanks) {
    if (!(t.area > 0)) bad("tank '" + t.id + "' needs a positive area");
    if (!(t.max_level > 0)) bad("tank '" + t.id + "' needs a positive max level");
    if (!(0 <= t.nominal_lo && t.nominal_lo <= t.nominal_hi && t.nominal_hi <= t.max_level))
      bad("tank '" + t.id + "' nominal range must lie within [0, max_level]");
    if (!(0 <= t.initial && t.initial <= t.max_level)) bad("tank '" + t.id + "' initial level out of range");
    use_sensor(t.level_sensor, ComponentKind::LevelSensor, "tank '" + t.id + "'");
  }

  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& p : m.pipes) {
    bool from_ok = p.from == kSource || find_id(m.tanks, p.from);
    bool to_ok = p.to == kDrain || find_id(m.tanks, p.to);
    if (!from_ok) bad("pipe '" + p.id + "' starts at unknown tank '" + p.from + "'");
    if (!to_ok) bad("pipe '" + p.id + "' ends at unknown tank '" + p.to + "'");
    if (p.from == p.to) bad("pipe '" + p.id + "' loops onto itself");
    if (from_ok && to_ok && p.from != kSource && p.to != kDrain) edges[p.from].push_back(p.to);
    if (!(p.nominal_flow >= 0)) bad("pipe '" + p.id + "' needs a non-negative nominal flow");
    auto use_actuator = [&](const std::string& id, ComponentKind want) {
      if (!find_id(m.actuators, id) || kind_of(id) != want) {
        bad("pipe '" + p.id + "' references missing " + std::string(to_string(want)) + " '" + id + "'");
        return;
      }
      ++actuator_uses[id];
    };
    if (p.valve) use_actuator(*p.valve, ComponentKind::Valve);
    for (const auto& pump : p.pumps) use_actuator(pump, ComponentKind::Pump);
    if (p.flow_sensor) use_sensor(*p.flow_sensor, ComponentKind::FlowSensor, "pipe '" + p.id + "'");
  }
  for (const auto& [id, n] : actuator_uses) {
    if (n != 1) bad("actuator '" + id + "' must be attached to exactly one pipe (found " + std::to_string(n) + ")");
  }
  for (const auto& [id, n] : sensor_uses) {
    if (n != 1) bad("sensor '" + id + "' must be attached exactly once (found " + std::to_string(n) + ")");
  }

  // Tank graph must be acyclic.
  std::map<std::string, int> color;
  std::function<bool(const std::string&)> cyclic = [&](const std::string& v) {
    color[v] = 1;
    for (const auto& w : edges[v]) {
      if (color[w] == 1) return true;
      if (color[w] == 0 && cyclic(w)) return true;
    }
    color[v] = 2;
    return false;
  };
  for (const auto& t : m.tanks) {
    if (color[t.id] == 0 && cyclic(t.id)) {
      bad("pipe network contains a cycle through tank '" + t.id + "'");
      break;
    }
  }

  for (const auto& r : m.controller) {
    for (const auto& s : r.guard.sensors()) {
      if (!find_id(m.sensors, s)) bad("rule '" + r.name + "' guard references unknown sensor '" + s + "'");
    }
    std::set<std::string> seen;
    for (const auto& [act, val] : r.commands) {
      auto idx = find_id(m.actuators, act);
      if (!idx) {
        bad("rule '" + r.name + "' commands unknown actuator '" + act + "'");
        continue;
      }
      if (!m.actuators[*idx].domain.index_of(val))
        bad("rule '" + r.name + "' commands " + act + " := '" + val + "' outside its domain");
      if (!seen.insert(act).second) bad("rule '" + r.name + "' commands '" + act + "' twice");
    }
  }
  return out;
}

Plant::Plant(PlantModel model) : model_(std::move(model)) {
  auto problems = validate_model(model_);
  if (!problems.empty()) {
    std::string msg = "invalid plant model '" + model_.name + "':";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ModelValidationError(msg);
  }
  auto slot = [this](std::string_view id) { return sensor_index(id); };
  for (const auto& r : model_.controller) {
    Rule rule{CompiledSensorCondition(r.guard, slot), {}, r.priority, r.name};
    for (const auto& [act, val] : r.commands) {
      std::size_t a = *actuator_index(act);
      rule.commands.emplace_back(a, *model_.actuators[a].domain.index_of(val));
    }
    rules_.push_back(std::move(rule));
  }
  for (const auto& p : model_.pipes) {
    Link link;
    link.from = p.from == kSource ? -1 : static_cast<int>(*tank_index(p.from));
    link.to = p.to == kDrain ? -1 : static_cast<int>(*tank_index(p.to));
    if (p.valve) link.valve = static_cast<int>(*actuator_index(*p.valve));
    for (const auto& pump : p.pumps) link.pumps.push_back(*actuator_index(pump));
    link.nominal = p.nominal_flow;
    links_.push_back(std::move(link));
  }
  for (const auto& s : model_.sensors) {
    Probe probe{Reads::Level, 0, 0.0};
    switch (*kind_of(s.id)) {
      case ComponentKind::LevelSensor:
        for (std::size_t t = 0; t < model_.tanks.size(); ++t) {
          if (model_.tanks[t].level_sensor == s.id) probe = {Reads::Level, t, 0.0};
        }
        break;
      case ComponentKind::FlowSensor:
        for (std::size_t p = 0; p < model_.pipes.size(); ++p) {
          if (model_.pipes[p].flow_sensor == s.id) probe = {Reads::Flow, p, 0.0};
        }
        break;
      default: probe = {Reads::Pressure, *pipe_index(*s.pipe), s.gain}; break;
    }
    probes_.push_back(probe);
  }
  for (const auto& a : model_.actuators) enabling_.push_back(*a.domain.index_of(enabling_value(*kind_of(a.id))));
}

std::optional<std::size_t> Plant::sensor_index(std::string_view id) const { return find_id(model_.sensors, id); }
std::optional<std::size_t> Plant::actuator_index(std::string_view id) const { return find_id(model_.actuators, id); }
std::optional<std::size_t> Plant::tank_index(std::string_view id) const { return find_id(model_.tanks, id); }
std::optional<std::size_t> Plant::pipe_index(std::string_view id) const { return find_id(model_.pipes, id); }

ControlState Plant::initial_control() const {
  ControlState q;
  for (const auto& a : model_.actuators) q.commanded.push_back(*a.domain.index_of(a.initial));
  return q;
}

PhysicalState Plant::state_with_levels(std::vector<double> levels) const {
  PhysicalState x;
  x.levels = std::move(levels);
  x.levels.resize(model_.tanks.size(), 0.0);
  x.flows.assign(model_.pipes.size(), 0.0);
  settle_flows(x, initial_control().commanded);
  return x;
}

PhysicalState Plant::initial_state() const {
  std::vector<double> levels;
  for (const auto& t : model_.tanks) levels.push_back(t.initial);
  return state_with_levels(std::move(levels));
}

PhysicalState Plant::random_nominal_state(std::mt19937_64& rng) const {
  std::vector<double> levels;
  for (const auto& t : model_.tanks) {
    std::uniform_real_distribution<double> dist(t.nominal_lo, t.nominal_hi);
    levels.push_back(dist(rng));
  }
  return state_with_levels(std::move(levels));
}

void Plant::observe_into(const PhysicalState& x, std::vector<double>& out) const {
  out.resize(probes_.size());
  for (std::size_t i = 0; i < probes_.size(); ++i) {
    const Probe& p = probes_[i];
    double v = 0.0;
    switch (p.reads) {
      case Reads::Level: v = x.levels[p.target]; break;
      case Reads::Flow: v = x.flows[p.target]; break;
      case Reads::Pressure: v = p.gain * x.flows[p.target]; break;
    }
    const auto& d = model_.sensors[i].domain;
    out[i] = std::clamp(v, d.lo, d.hi);
  }
}

Readings Plant::observe(const PhysicalState& x) const {
  std::vector<double> values;
  observe_into(x, values);
  Readings r;
  for (std::size_t i = 0; i < values.size(); ++i) r.set(model_.sensors[i].id, values[i]);
  return r;
}

void Plant::control_into(std::span<const double> readings, std::vector<std::size_t>& commanded) const {
  thread_local std::vector<int> best;
  thread_local std::vector<int> owner;
  best.assign(commanded.size(), INT_MIN);
  owner.assign(commanded.size(), -1);
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const Rule& rule = rules_[r];
    if (!rule.guard.evaluate(readings)) continue;
    for (const auto& [a, v] : rule.commands) {
      if (rule.priority > best[a]) {
        best[a] = rule.priority;
        owner[a] = static_cast<int>(r);
        commanded[a] = v;
      } else if (rule.priority == best[a] && commanded[a] != v) {
        throw ModelValidationError("rules '" + rules_[static_cast<std::size_t>(owner[a])].name + "' and '" +
                                   rule.name + "' command " + model_.actuators[a].id +
                                   " differently at priority " + std::to_string(rule.priority));
      }
    }
  }
}

Configurations Plant::configurations(const ControlState& q) const {
  Configurations c;
  for (std::size_t a = 0; a < model_.actuators.size(); ++a)
    c.set(model_.actuators[a].id, model_.actuators[a].domain.values[q.commanded[a]]);
  return c;
}

std::pair<ControlState, Configurations> Plant::control_step(const ControlState& q, const Readings& s) const {
  std::vector<double> values(model_.sensors.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto v = s.get(model_.sensors[i].id);
    if (!v) throw UnknownSensorError("readings lack sensor '" + model_.sensors[i].id + "'");
    values[i] = *v;
  }
  ControlState next = q;
  control_into(values, next.commanded);
  return {next, configurations(next)};
}

void Plant::settle_flows(PhysicalState& x, const std::vector<std::size_t>& applied) const {
  for (std::size_t p = 0; p < links_.size(); ++p) {
    const Link& l = links_[p];
    bool enabled = l.valve < 0 || applied[static_cast<std::size_t>(l.valve)] == enabling_[static_cast<std::size_t>(l.valve)];
    if (enabled && !l.pumps.empty()) {
      enabled = std::any_of(l.pumps.begin(), l.pumps.end(),
                            [&](std::size_t a) { return applied[a] == enabling_[a]; });
    }
    double f = enabled ? l.nominal : 0.0;
    if (l.from >= 0 && x.levels[static_cast<std::size_t>(l.from)] <= 0.0) f = 0.0;
    if (l.to >= 0 && x.levels[static_cast<std::size_t>(l.to)] >= model_.tanks[static_cast<std::size_t>(l.to)].max_level)
      f = 0.0;
    x.flows[p] = f;
  }
}

double Plant::total_volume(const PhysicalState& x) const {
  double v = 0.0;
  for (std::size_t t = 0; t < model_.tanks.size(); ++t) v += x.levels[t] / 1000.0 * model_.tanks[t].area;
  return v;
}

void Plant::physics_tick(PhysicalState& x, const std::vector<std::size_t>& applied, PhysicsAudit* audit) const {
  settle_flows(x, applied);
  const double tick = model_.tick;
  double before = audit ? total_volume(x) : 0.0;
  double external = 0.0;  // m^3 entering minus leaving the tank network
  for (std::size_t p = 0; p < links_.size(); ++p) {
    const Link& l = links_[p];
    double volume = x.flows[p] * tick / 3600.0;
    if (volume == 0.0) continue;
    if (l.from >= 0) {
      auto t = static_cast<std::size_t>(l.from);
      x.levels[t] -= volume / model_.tanks[t].area * 1000.0;
    } else {
      external += volume;
    }
    if (l.to >= 0) {
      auto t = static_cast<std::size_t>(l.to);
      x.levels[t] += volume / model_.tanks[t].area * 1000.0;
    } else {
      external -= volume;
    }
  }
  x.clock += tick;
  bool clamped = false;
  for (std::size_t t = 0; t < model_.tanks.size(); ++t) {
    double level = x.levels[t];
    double capped = std::clamp(level, 0.0, model_.tanks[t].max_level);
    if (capped != level) {
      clamped = true;
      x.levels[t] = capped;
      if (audit) audit->clamps.push_back({x.clock, model_.tanks[t].id, level});
    }
  }
  if (audit) {
    ++audit->substeps;
    if (!clamped) {
      double residual = std::abs(total_volume(x) - before - external);
      audit->max_residual = std::max(audit->max_residual, residual);
    }
  }
}

PhysicalState Plant::physics_step(const PhysicalState& x, const Configurations& a, double dt,
                                  PhysicsAudit* audit) const {
  std::vector<std::size_t> applied = initial_control().commanded;
  for (const auto& [id, value] : a.entries()) {
    auto idx = actuator_index(id);
    if (!idx) throw CapabilityDomainError("unknown actuator '" + id + "'");
    auto v = model_.actuators[*idx].domain.index_of(value);
    if (!v) throw CapabilityDomainError("value '" + value + "' outside the domain of " + id);
    applied[*idx] = *v;
  }
  PhysicalState next = x;
  std::size_t n = tick_count(dt, model_.tick);
  for (std::size_t i = 0; i < n; ++i) physics_tick(next, applied, audit);
  return next;
}

void Plant::check_capability(const Capability& cap) const {
  if (auto a = actuator_index(cap.component)) {
    if (!model_.actuators[*a].domain.index_of(cap.value))
      throw CapabilityDomainError("capability " + to_string(cap) + ": value outside the domain of " + cap.component);
    return;
  }
  if (auto s = sensor_index(cap.component)) {
    double v = 0.0;
    const std::string& text = cap.value;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw CapabilityDomainError("capability " + to_string(cap) + ": sensor value is not a number");
    if (!model_.sensors[*s].domain.contains(v))
      throw CapabilityDomainError("capability " + to_string(cap) + ": value outside the domain of " + cap.component);
    return;
  }
  throw CapabilityDomainError("capability " + to_string(cap) + ": unknown component '" + cap.component + "'");
}

Injection Plant::resolve(const CapabilitySet& caps) const {
  Injection inj;
  for (const auto& cap : caps) {
    check_capability(cap);
    if (auto a = actuator_index(cap.component)) {
      inj.actuators.emplace_back(*a, *model_.actuators[*a].domain.index_of(cap.value));
    } else {
      auto s = *sensor_index(cap.component);
      double v = 0.0;
      std::from_chars(cap.value.data(), cap.value.data() + cap.value.size(), v);
      inj.sensors.emplace_back(s, v);
    }
  }
  return inj;
}

void Plant::advance(ControlState& q, PhysicalState& x, const Injection& inj, double dt, PhysicsAudit* audit,
                    std::vector<TrajectoryRecord>* log, const CapabilitySet* caps) const {
  std::size_t n = tick_count(dt, model_.tick);
  std::vector<double> readings;
  std::vector<std::size_t> applied;
  for (std::size_t i = 0; i < n; ++i) {
    observe_into(x, readings);
    std::vector<double> true_readings;
    if (log) true_readings = readings;
    for (const auto& [s, v] : inj.sensors) readings[s] = v;
    control_into(readings, q.commanded);
    applied = q.commanded;
    for (const auto& [a, v] : inj.actuators) applied[a] = v;
    if (log) {
      TrajectoryRecord rec;
      rec.clock = x.clock;
      for (std::size_t s = 0; s < true_readings.size(); ++s) rec.readings.set(model_.sensors[s].id, true_readings[s]);
      for (std::size_t a = 0; a < applied.size(); ++a)
        rec.configurations.set(model_.actuators[a].id, model_.actuators[a].domain.values[applied[a]]);
      if (caps) rec.injected = *caps;
      log->push_back(std::move(rec));
    }
    physics_tick(x, applied, audit);
  }
}

void Plant::advance(ControlState& q, PhysicalState& x, const CapabilitySet& caps, double dt, PhysicsAudit* audit,
                    std::vector<TrajectoryRecord>* log) const {
  advance(q, x, resolve(caps), dt, audit, log, &caps);
}

CompiledSensorCondition Plant::compile(const SensorCondition& cond) const {
  return CompiledSensorCondition(cond, [this](std::string_view id) { return sensor_index(id); });
}

bool Plant::goal_satisfied(const SensorCondition& goal, const PhysicalState& x) const {
  std::vector<double> values;
  observe_into(x, values);
  return compile(goal).evaluate(values);
}

std::vector<std::string> Plant::unsafe_sensors(const PhysicalState& x) const {
  std::vector<double> values;
  observe_into(x, values);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!model_.sensors[i].domain.safe(values[i])) out.push_back(model_.sensors[i].id);
  }
  return out;
}

std::vector<std::pair<ControlState, PhysicalState>> run_plant(const Plant& plant, ControlState q0, PhysicalState x0,
                                                               double horizon, const Injector& injector,
                                                               PhysicsAudit* audit,
                                                               std::vector<TrajectoryRecord>* log) {
  std::size_t n = tick_count(horizon, plant.tick());
  std::vector<std::pair<ControlState, PhysicalState>> out;
  out.reserve(n + 1);
  out.emplace_back(q0, x0);
  for (std::size_t i = 0; i < n; ++i) {
    CapabilitySet caps = injector ? injector(i, x0) : CapabilitySet{};
    plant.advance(q0, x0, caps, plant.tick(), audit, log);
    out.emplace_back(q0, x0);
  }
  return out;
}

// ---------------------------------------------------------------------------

PlantModel miniswat() {
  PlantModel m;
  m.name = "MiniSWaT";
  m.tick = 1.0;
  for (const char* t : {"T101", "T301", "T401"}) {
    std::string id = t;
    m.tanks.push_back({id, 1.5, 1200.0, "LIT" + id.substr(1), 500.0, 800.0, 650.0});
  }
  m.pipes = {
      {"raw", "source", "T101", std::nullopt, {}, 2.0, std::nullopt},
      {"fill", "source", "T101", "MV101", {}, 2.0, "FIT101"},
      {"transfer", "T101", "T301", "MV201", {"P101", "P102"}, 2.0, "FIT201"},
      {"uf", "T301", "T401", "MV302", {"P301", "P302"}, 2.0, "FIT301"},
      {"out", "T401", "drain", std::nullopt, {"P401", "P402"}, 2.0, "FIT401"},
  };
  const SensorDomain level{0.0, 1200.0, 250.0, 1100.0};
  const SensorDomain flow{0.0, 5.0, 1.0, 3.0};
  m.sensors = {
      {"LIT101", level, std::nullopt, 0.0},
      {"LIT301", level, std::nullopt, 0.0},
      {"LIT401", level, std::nullopt, 0.0},
      {"FIT101", {0.0, 5.0, 0.0, 1.5}, std::nullopt, 0.0},
      {"FIT201", flow, std::nullopt, 0.0},
      {"FIT301", flow, std::nullopt, 0.0},
      {"FIT401", flow, std::nullopt, 0.0},
      {"DPIT301", {0.0, 1.0, 0.1, 0.8}, "uf", 0.2},
  };
  const ActuatorDomain valve{{"open", "close"}};
  const ActuatorDomain pump{{"on", "off"}};
  m.actuators = {
      {"MV101", valve, "close"}, {"MV201", valve, "open"}, {"MV302", valve, "open"},
      {"P101", pump, "on"},      {"P102", pump, "on"},     {"P301", pump, "on"},
      {"P302", pump, "on"},      {"P401", pump, "on"},     {"P402", pump, "on"},
  };
  auto rule = [&](std::string name, std::string_view guard, std::vector<std::pair<std::string, std::string>> cmds,
                  int prio) { m.controller.push_back({std::move(name), parse_sensor_condition(guard), std::move(cmds), prio}); };
  rule("t101_high", "LIT101 > 1000", {{"MV101", "close"}}, 2);
  rule("t101_low", "LIT101 < 280", {{"MV101", "open"}}, 1);
  rule("transfer_stop", "LIT101 < 300 or LIT301 > 1000", {{"MV201", "close"}, {"P101", "off"}, {"P102", "off"}}, 2);
  rule("transfer_run", "LIT101 > 400 and LIT301 < 900", {{"MV201", "open"}, {"P101", "on"}, {"P102", "on"}}, 1);
  rule("uf_stop", "LIT301 < 300 or LIT401 > 1000", {{"MV302", "close"}, {"P301", "off"}, {"P302", "off"}}, 2);
  rule("uf_run", "LIT301 > 400 and LIT401 < 900", {{"MV302", "open"}, {"P301", "on"}, {"P302", "on"}}, 1);
  rule("out_stop", "LIT401 < 300", {{"P401", "off"}, {"P402", "off"}}, 2);
  rule("out_run", "LIT401 > 400", {{"P401", "on"}, {"P402", "on"}}, 1);
  return m;
}

}  // namespace cpsfuzz
