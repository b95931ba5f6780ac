#include "cpsfuzz/strategy.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

std::size_t Strategy::add_state(const std::string& state) {
  if (auto i = state_index(state)) return *i;
  states_.push_back(state);
  outgoing_.emplace_back();
  return states_.size() - 1;
}

std::optional<std::size_t> Strategy::state_index(std::string_view state) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == state) return i;
  }
  return std::nullopt;
}

void Strategy::add_variable(const std::string& var) {
  if (std::find(variables_.begin(), variables_.end(), var) == variables_.end()) variables_.push_back(var);
}

std::size_t Strategy::add_transition(std::size_t from, std::size_t to, SensorCondition gamma,
                                     CapabilityCondition phi) {
  if (from >= states_.size() || to >= states_.size()) throw IndexError("transition endpoint out of range");
  transitions_.push_back({from, to, std::move(gamma), std::move(phi)});
  outgoing_[from].push_back(transitions_.size() - 1);
  return transitions_.size() - 1;
}

std::size_t Strategy::add_transition(const std::string& from, const std::string& to, SensorCondition gamma,
                                     CapabilityCondition phi) {
  std::size_t f = add_state(from);
  std::size_t t = add_state(to);
  return add_transition(f, t, std::move(gamma), std::move(phi));
}

const std::vector<std::size_t>& Strategy::outgoing(std::size_t state) const { return outgoing_.at(state); }

std::optional<std::size_t> Strategy::find_transition(std::size_t from, std::size_t to) const {
  for (std::size_t t : outgoing_.at(from)) {
    if (transitions_[t].to == to) return t;
  }
  return std::nullopt;
}

bool Strategy::operator==(const Strategy& other) const {
  return name_ == other.name_ && states_ == other.states_ && initial_ == other.initial_ &&
         variables_ == other.variables_ && capabilities_ == other.capabilities_ &&
         transitions_ == other.transitions_;
}

Strategy null_strategy() {
  Strategy s("null");
  s.set_initial("a");
  s.add_transition("a", "a", SensorCondition::truth(), CapabilityCondition::exactly({}));
  return s;
}

Strategy universal_strategy(std::vector<Capability> universe) {
  Strategy s("universal");
  s.set_initial("u");
  s.set_capabilities(std::move(universe));
  s.add_transition("u", "u", SensorCondition::truth(), CapabilityCondition::truth());
  return s;
}

bool admit(const CapabilityCondition& phi, const CapabilitySet& y, Assignment& alpha) {
  auto vars = phi.variables();
  bool fresh = false;
  for (const auto& v : vars) {
    if (!alpha.count(v)) {
      fresh = true;
      break;
    }
  }
  if (!fresh) return phi.evaluate(y, alpha);
  Assignment trial = alpha;
  for (const auto& v : vars) trial.emplace(v, y);
  if (!phi.evaluate(y, trial)) return false;
  alpha = std::move(trial);
  return true;
}

bool capability_condition_satisfiable(const CapabilityCondition& phi, const Assignment& alpha,
                                      const std::vector<Capability>& extra) {
  std::vector<CapabilitySet> candidates{CapabilitySet{}};
  CapabilitySet all;
  for (const auto& s : phi.literal_sets()) {
    candidates.push_back(s);
    all = all.united(s);
  }
  candidates.push_back(all);
  for (const auto& cap : extra) {
    candidates.push_back(CapabilitySet{cap});
    candidates.push_back(all.united(CapabilitySet{cap}));
  }
  for (const auto& y : candidates) {
    Assignment a = alpha;
    if (admit(phi, y, a)) return true;
  }
  return false;
}

namespace {

void collect_constants(const SensorCondition& c, std::map<std::string, std::set<double>>& out) {
  switch (c.kind()) {
    case SensorCondition::Kind::True: return;
    case SensorCondition::Kind::Compare: out[c.sensor()].insert(c.constant()); return;
    case SensorCondition::Kind::Not: collect_constants(c.lhs(), out); return;
    default:
      collect_constants(c.lhs(), out);
      collect_constants(c.rhs(), out);
  }
}

void check_sensor_condition(const SensorCondition& c, const Plant& plant, const std::string& where,
                            std::vector<std::string>& out) {
  std::map<std::string, std::set<double>> constants;
  collect_constants(c, constants);
  for (const auto& [sensor, values] : constants) {
    auto idx = plant.sensor_index(sensor);
    if (!idx) {
      out.push_back("unknown sensor: " + where + " references '" + sensor + "'");
      continue;
    }
    const auto& d = plant.sensor_domain(*idx);
    for (double v : values) {
      if (!d.contains(v))
        out.push_back("sensor constant: " + where + " compares " + sensor + " with " + canonical_number(v) +
                      " outside [" + canonical_number(d.lo) + ", " + canonical_number(d.hi) + "]");
    }
  }
}

// Grid points on which the disjunction of guards is checked: every
// constant plus the midpoints between and points just outside.
std::vector<double> probe_values(const std::set<double>& constants, const SensorDomain* domain) {
  std::vector<double> cs(constants.begin(), constants.end());
  std::vector<double> out;
  double below = cs.front() - 1.0;
  double above = cs.back() + 1.0;
  if (domain) {
    below = std::min(below, domain->lo);
    above = std::max(above, domain->hi);
  }
  out.push_back(below);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    out.push_back(cs[i]);
    if (i + 1 < cs.size()) out.push_back((cs[i] + cs[i + 1]) / 2);
  }
  out.push_back(above);
  if (domain) {
    std::erase_if(out, [&](double v) { return v < domain->lo || v > domain->hi; });
    out.push_back(domain->lo);
    out.push_back(domain->hi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

}  // namespace

std::vector<std::string> validate_strategy(const Strategy& strategy, const Plant* plant) {
  std::vector<std::string> out;
  const auto& states = strategy.states();
  if (states.empty()) {
    out.push_back("structure: strategy has no states");
    return out;
  }
  if (strategy.initial() >= states.size()) out.push_back("structure: initial state out of range");
  {
    std::set<std::string> seen;
    for (const auto& s : states) {
      if (!seen.insert(s).second) out.push_back("structure: state '" + s + "' declared twice");
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& t : strategy.transitions()) {
    if (!edges.insert({t.from, t.to}).second)
      out.push_back("duplicate edge: more than one transition " + states[t.from] + " -> " + states[t.to]);
  }

  const auto& declared = strategy.variables();
  for (std::size_t i = 0; i < strategy.transitions().size(); ++i) {
    const auto& t = strategy.transitions()[i];
    std::string where = "transition " + states[t.from] + " -> " + states[t.to];
    for (const auto& v : t.phi.variables()) {
      if (std::find(declared.begin(), declared.end(), v) == declared.end())
        out.push_back("variable: " + where + " uses undeclared variable '" + v + "'");
    }
    for (const auto& set : t.phi.literal_sets()) {
      if (!set.has_one_per_component())
        out.push_back("capability: " + where + " uses " + to_string(set) + " with two values for one component");
      if (plant) {
        for (const auto& cap : set) {
          try {
            plant->check_capability(cap);
          } catch (const CapabilityDomainError& e) {
            out.push_back("capability: " + where + ": " + e.what());
          }
        }
      }
    }
    if (plant) check_sensor_condition(t.gamma, *plant, where, out);
  }
  if (plant) {
    for (const auto& cap : strategy.capabilities()) {
      try {
        plant->check_capability(cap);
      } catch (const CapabilityDomainError& e) {
        out.push_back(std::string("capability: declared universe: ") + e.what());
      }
    }
  }

  // Liveness: in every state, some transition with a satisfiable φ is
  // enabled whatever the readings are.
  for (std::size_t s = 0; s < states.size(); ++s) {
    std::vector<const SensorCondition*> guards;
    for (std::size_t t : strategy.outgoing(s)) {
      const auto& tr = strategy.transitions()[t];
      if (capability_condition_satisfiable(tr.phi, {}, strategy.capabilities())) guards.push_back(&tr.gamma);
    }
    if (guards.empty()) {
      out.push_back("liveness: state '" + states[s] + "' has no fireable outgoing transition");
      continue;
    }
    if (std::any_of(guards.begin(), guards.end(), [](const SensorCondition* g) { return g->is_true(); })) continue;

    std::map<std::string, std::set<double>> constants;
    for (const auto* g : guards) collect_constants(*g, constants);
    std::vector<std::string> sensors;
    std::vector<std::vector<double>> axes;
    std::size_t points = 1;
    for (const auto& [sensor, values] : constants) {
      const SensorDomain* domain = nullptr;
      if (plant) {
        if (auto idx = plant->sensor_index(sensor)) domain = &plant->sensor_domain(*idx);
      }
      sensors.push_back(sensor);
      axes.push_back(probe_values(values, domain));
      points *= axes.back().size();
    }
    if (points > 200000) continue;  // too many combinations to check exhaustively
    std::vector<std::size_t> at(axes.size(), 0);
    for (std::size_t n = 0; n < points; ++n) {
      Readings r;
      for (std::size_t k = 0; k < axes.size(); ++k) r.set(sensors[k], axes[k][at[k]]);
      bool enabled = std::any_of(guards.begin(), guards.end(), [&](const SensorCondition* g) { return g->evaluate(r); });
      if (!enabled) {
        std::string where;
        for (const auto& [name, v] : r.entries()) where += (where.empty() ? "" : ", ") + name + "=" + canonical_number(v);
        out.push_back("liveness: state '" + states[s] + "' has no enabled transition when " + where);
        break;
      }
      for (std::size_t k = 0; k < at.size(); ++k) {
        if (++at[k] < axes[k].size()) break;
        at[k] = 0;
      }
    }
  }
  return out;
}

std::optional<TestStep> fire_step(const Plant& plant, const Strategy& strategy, const TestStep& current,
                                  std::size_t transition, const CapabilitySet& y, Assignment& alpha, double dt) {
  const Transition& tr = strategy.transitions().at(transition);
  if (tr.from != current.r) throw Error("transition does not leave the current strategy state");
  if (!tr.gamma.is_true() && !plant.goal_satisfied(tr.gamma, current.x)) return std::nullopt;
  if (!admit(tr.phi, y, alpha)) return std::nullopt;
  TestStep next = current;
  plant.advance(next.q, next.x, y, dt);
  next.r = tr.to;
  return next;
}

std::vector<std::string> verify_derivation(const Plant& plant, const Strategy& strategy, const TestTrace& trace) {
  std::vector<std::string> out;
  if (trace.steps.size() != trace.history.size() + 1) {
    out.push_back("trace has " + std::to_string(trace.steps.size()) + " steps for a history of length " +
                  std::to_string(trace.history.size()));
    return out;
  }
  if (trace.steps.front().r != strategy.initial()) out.push_back("trace does not start in the initial state");
  for (std::size_t i = 1; i < trace.steps.size(); ++i) {
    const TestStep& prev = trace.steps[i - 1];
    const TestStep& cur = trace.steps[i];
    std::string at = "step " + std::to_string(i) + ": ";
    auto t = strategy.find_transition(prev.r, cur.r);
    if (!t) {
      out.push_back(at + "no transition " + strategy.state_name(prev.r) + " -> " + strategy.state_name(cur.r));
      continue;
    }
    const Transition& tr = strategy.transitions()[*t];
    if (!plant.goal_satisfied(tr.gamma, prev.x)) out.push_back(at + "sensor condition false");
    try {
      if (!tr.phi.evaluate(trace.history[i - 1], trace.assignment)) out.push_back(at + "capability condition false");
    } catch (const UnboundVariableError& e) {
      out.push_back(at + e.what());
    }
    TestStep replay = prev;
    plant.advance(replay.q, replay.x, trace.history[i - 1], trace.dt);
    if (!(replay.q == cur.q) || !(replay.x == cur.x)) out.push_back(at + "re-simulation diverges");
  }
  bool reached = plant.goal_satisfied(trace.goal, trace.steps.back().x);
  if (reached != trace.successful) out.push_back("success flag disagrees with the final state");
  return out;
}

}  // namespace cpsfuzz
