#include "cpsfuzz/fuzz.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <thread>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t goal_seed(std::uint64_t seed, std::string_view goal_name) { return seed ^ fnv1a(goal_name); }

Goal make_goal(const Plant& plant, std::string_view name, std::optional<double> dt) {
  auto dash = name.rfind('-');
  if (dash == std::string_view::npos) throw Error("goal '" + std::string(name) + "' is not of the form SENSOR-High|Low");
  std::string sensor(name.substr(0, dash));
  std::string_view side = name.substr(dash + 1);
  auto idx = plant.sensor_index(sensor);
  if (!idx) throw UnknownSensorError("goal '" + std::string(name) + "' names unknown sensor '" + sensor + "'");
  const auto& d = plant.sensor_domain(*idx);
  Goal g;
  g.name = std::string(name);
  g.objective.sensor = sensor;
  g.objective.safe_lo = d.safe_lo;
  g.objective.safe_hi = d.safe_hi;
  if (side == "High") {
    g.condition = SensorCondition::compare(sensor, Comparison::Greater, d.safe_hi);
    g.objective.direction = Direction::Maximize;
    g.objective.threshold = d.safe_hi;
  } else if (side == "Low") {
    g.condition = SensorCondition::compare(sensor, Comparison::Less, d.safe_lo);
    g.objective.direction = Direction::Minimize;
    g.objective.threshold = d.safe_lo;
  } else {
    throw Error("goal '" + std::string(name) + "' must end in -High or -Low");
  }
  g.dt = dt ? *dt : (kind_of(sensor) == ComponentKind::LevelSensor ? kLevelInterval : kFastInterval);
  return g;
}

std::vector<Goal> all_goals(const Plant& plant) {
  std::vector<Goal> out;
  for (const auto& s : plant.model().sensors) {
    if (s.domain.safe_hi < s.domain.hi) out.push_back(make_goal(plant, s.id + "-High"));
    if (s.domain.safe_lo > s.domain.lo) out.push_back(make_goal(plant, s.id + "-Low"));
  }
  return out;
}

double objective_value(const ObjectiveSpec& spec, double reading) {
  double span = spec.safe_hi - spec.safe_lo;
  if (spec.direction == Direction::Maximize) return (reading - spec.safe_lo) / span;
  return (spec.safe_hi - reading) / span;
}

double objective_value(const ObjectiveSpec& spec, const Readings& readings) {
  auto v = readings.get(spec.sensor);
  if (!v) throw UnknownSensorError("objective sensor '" + spec.sensor + "' missing from readings");
  return objective_value(spec, *v);
}

std::vector<Capability> actuator_universe(const Plant& plant) {
  std::vector<Capability> out;
  for (const auto& a : plant.model().actuators) {
    for (const auto& v : a.domain.values) out.push_back({a.id, v});
  }
  return out;
}

namespace {

struct Components {
  std::vector<std::vector<Capability>> options;  // per component, its values
};

Components group(const std::vector<Capability>& universe) {
  Components c;
  std::map<std::string, std::size_t> index;
  for (const auto& cap : universe) {
    auto [it, fresh] = index.emplace(cap.component, c.options.size());
    if (fresh) c.options.emplace_back();
    auto& opts = c.options[it->second];
    if (std::find(opts.begin(), opts.end(), cap) == opts.end()) opts.push_back(cap);
  }
  return c;
}

CapabilitySet uniform_subset(const Components& comps, std::mt19937_64& rng) {
  std::vector<Capability> caps;
  for (const auto& opts : comps.options) {
    std::uniform_int_distribution<std::size_t> pick(0, opts.size());
    std::size_t i = pick(rng);
    if (i < opts.size()) caps.push_back(opts[i]);
  }
  return CapabilitySet(std::move(caps));
}

bool satisfies(const CapabilityCondition& phi, const CapabilitySet& y, const Assignment& alpha) {
  Assignment a = alpha;
  return admit(phi, y, a);
}

// Literal constraints on `_` gathered from a top-level conjunction.
struct Constraints {
  std::optional<CapabilitySet> exact;
  CapabilitySet required;
  std::optional<CapabilitySet> upper;
  CapabilitySet excluded;
};

Constraints gather(const CapabilityCondition& phi, const Assignment& alpha) {
  using K = CapabilityCondition::Kind;
  Constraints c;
  auto lit = [&](const SetExpr& e) -> std::optional<CapabilitySet> {
    if (e.kind == SetExpr::Kind::Literal) return e.literal;
    if (e.kind == SetExpr::Kind::Variable) {
      auto it = alpha.find(e.variable);
      if (it != alpha.end()) return it->second;
    }
    return std::nullopt;
  };
  auto any = [](const SetExpr& e) { return e.kind == SetExpr::Kind::Placeholder; };
  std::function<void(const CapabilityCondition&)> walk = [&](const CapabilityCondition& f) {
    switch (f.kind()) {
      case K::And: walk(f.lhs()); walk(f.rhs()); break;
      case K::Equal:
        if (any(f.left_expr()) && lit(f.right_expr())) c.exact = lit(f.right_expr());
        if (any(f.right_expr()) && lit(f.left_expr())) c.exact = lit(f.left_expr());
        break;
      case K::Subset:
        if (any(f.right_expr()) && lit(f.left_expr())) c.required = c.required.united(*lit(f.left_expr()));
        if (any(f.left_expr()) && lit(f.right_expr())) {
          auto u = *lit(f.right_expr());
          c.upper = c.upper ? c.upper->intersected(u) : u;
        }
        break;
      case K::Not: {
        const auto& in = f.lhs();
        if (in.kind() == K::Subset && any(in.right_expr())) {
          auto l = lit(in.left_expr());
          if (l && l->size() == 1) c.excluded = c.excluded.united(*l);
        }
        break;
      }
      default: break;
    }
  };
  walk(phi);
  return c;
}

}  // namespace

CapabilitySet sample_capability_set(const CapabilityCondition& phi, const Assignment& alpha,
                                    const std::vector<Capability>& universe, std::mt19937_64& rng) {
  const Components comps = group(universe);
  for (std::size_t i = 0; i < kSampleAttempts; ++i) {
    CapabilitySet y = uniform_subset(comps, rng);
    if (satisfies(phi, y, alpha)) return y;
  }
  // Constructive pass: start from what is required and fill the remaining
  // components at random within the allowed values.
  Constraints c = gather(phi, alpha);
  if (c.exact) {
    if (satisfies(phi, *c.exact, alpha)) return *c.exact;
  } else {
    for (std::size_t attempt = 0; attempt <= 100; ++attempt) {
      std::vector<Capability> caps(c.required.begin(), c.required.end());
      if (attempt < 100) {
        for (const auto& opts : comps.options) {
          if (c.required.find_component(opts.front().component)) continue;
          std::vector<Capability> allowed;
          for (const auto& cap : opts) {
            if (c.excluded.contains(cap)) continue;
            if (c.upper && !c.upper->contains(cap)) continue;
            allowed.push_back(cap);
          }
          std::uniform_int_distribution<std::size_t> pick(0, allowed.size());
          std::size_t k = pick(rng);
          if (k < allowed.size()) caps.push_back(allowed[k]);
        }
      }
      CapabilitySet y(std::move(caps));
      if (y.has_one_per_component() && satisfies(phi, y, alpha)) return y;
    }
  }
  throw UnsatisfiableInBudget("no capability set satisfying " + to_string(phi) + " found");
}

std::size_t roulette_select(const std::vector<double>& scores, std::mt19937_64& rng) {
  if (scores.empty()) throw NoWalksGenerated("nothing to select from");
  double lo = *std::min_element(scores.begin(), scores.end());
  std::vector<double> fitness;
  double total = 0.0;
  for (double s : scores) {
    fitness.push_back(s - lo + kRouletteEpsilon);
    total += fitness.back();
  }
  std::uniform_real_distribution<double> spin(0.0, total);
  double at = spin(rng);
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    if (at < fitness[i]) return i;
    at -= fitness[i];
  }
  return fitness.size() - 1;
}

EquivalenceClassSpec class_of(ClassKind kind, const SuiteEntry& e) { return {kind, e.causal_set, e.history}; }

std::vector<std::pair<std::size_t, std::size_t>> equivalent_pairs(ClassKind kind, const std::vector<SuiteEntry>& tests) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    auto spec = class_of(kind, tests[i]);
    for (std::size_t j = i + 1; j < tests.size(); ++j) {
      if (equivalent(spec, tests[i].history, tests[j].history)) out.emplace_back(i, j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Campaign::Campaign(const Plant& plant, Strategy base, Goal goal, CampaignConfig config)
    : plant_(plant), base_(std::move(base)), goal_(std::move(goal)), config_(config) {
  auto problems = validate_strategy(base_, &plant_);
  if (!problems.empty()) {
    std::string msg = "strategy '" + base_.name() + "' is invalid:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ModelValidationError(msg);
  }
  universe_ = base_.capabilities().empty() ? actuator_universe(plant_) : base_.capabilities();
}

void Campaign::exclude(const EquivalenceClassSpec& spec) { monitors_.push_back(ExclusionMonitor::for_class(spec)); }

std::optional<Walk> Campaign::random_walk(std::mt19937_64& rng) const {
  Walk walk;
  std::size_t r = base_.initial();
  std::vector<ExclusionMonitor::State> ms;
  for (const auto& m : monitors_) ms.push_back(m.initial());
  Assignment alpha;
  for (std::size_t step = 0; step < config_.walk_len; ++step) {
    std::vector<std::size_t> outs = base_.outgoing(r);
    std::shuffle(outs.begin(), outs.end(), rng);
    CapabilityCondition admitted;
    for (std::size_t i = 0; i < monitors_.size(); ++i) {
      auto a = monitors_[i].admission(ms[i]);
      if (!a.is_true()) admitted = admitted.is_true() ? a : CapabilityCondition::conjunction(admitted, a);
    }
    bool moved = false;
    for (std::size_t t : outs) {
      const auto& tr = base_.transitions()[t];
      CapabilityCondition phi = admitted.is_true() ? tr.phi
                                : tr.phi.is_true() ? admitted
                                                   : CapabilityCondition::conjunction(tr.phi, admitted);
      CapabilitySet y;
      try {
        y = sample_capability_set(phi, alpha, universe_, rng);
      } catch (const UnsatisfiableInBudget&) {
        continue;
      }
      admit(tr.phi, y, alpha);
      for (std::size_t i = 0; i < monitors_.size(); ++i) ms[i] = *monitors_[i].step(ms[i], y);
      walk.steps.push_back({t, std::move(y)});
      r = tr.to;
      moved = true;
      break;
    }
    if (!moved) break;
  }
  if (walk.steps.empty()) return std::nullopt;
  return walk;
}

double Campaign::predict(const Walk& walk, const ControlState& q0, const PhysicalState& x0) const {
  ControlState q = q0;
  PhysicalState x = x0;
  for (const auto& step : walk.steps) {
    const auto& tr = base_.transitions()[step.transition];
    if (!tr.gamma.is_true() && !plant_.goal_satisfied(tr.gamma, x)) break;
    plant_.advance(q, x, step.y, goal_.dt);
  }
  return objective_value(goal_.objective, plant_.observe(x));
}

std::vector<Walk> Campaign::candidate_walks(const ControlState& q, const PhysicalState& x,
                                            std::mt19937_64& rng) const {
  std::vector<std::uint64_t> seeds(config_.walks);
  for (auto& s : seeds) s = rng();
  std::vector<std::optional<Walk>> walks(seeds.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < seeds.size(); i += stride) {
      std::mt19937_64 walk_rng(seeds[i]);
      walks[i] = random_walk(walk_rng);
      if (walks[i]) walks[i]->score = predict(*walks[i], q, x);
    }
  };
  std::size_t threads = std::max<std::size_t>(1, std::min(config_.threads, seeds.size()));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  std::vector<Walk> out;
  for (auto& w : walks) {
    if (w) out.push_back(std::move(*w));
  }
  if (out.empty()) throw NoWalksGenerated("no walk of the current strategy could be concretised");
  return out;
}

Walk Campaign::plan_walk(const ControlState& q, const PhysicalState& x, std::mt19937_64& rng) const {
  auto walks = candidate_walks(q, x, rng);
  std::vector<double> scores;
  for (const auto& w : walks) scores.push_back(w.score);
  return walks[roulette_select(scores, rng)];
}

TestTrace Campaign::execute_plan(const Walk& walk, const ControlState& q, const PhysicalState& x) const {
  TestTrace trace;
  trace.goal = goal_.condition;
  trace.dt = goal_.dt;
  trace.steps.push_back({q, x, base_.initial()});
  Assignment alpha;
  for (const auto& step : walk.steps) {
    auto next = fire_step(plant_, base_, trace.steps.back(), step.transition, step.y, alpha, goal_.dt);
    if (!next) break;
    trace.steps.push_back(std::move(*next));
    trace.history.push_back(step.y);
  }
  trace.assignment = alpha;
  trace.successful = plant_.goal_satisfied(goal_.condition, trace.steps.back().x);
  return trace;
}

CampaignResult Campaign::run() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  CampaignResult result;
  result.goal = goal_;
  result.config = config_;
  auto& stats = result.stats;
  const bool bounded = config_.max_iterations > 0 || config_.budget_secs > 0;
  const bool minimise = config_.kind == ClassKind::CapabilitySet || config_.prune_strong;
  std::mt19937_64 rng(config_.seed);

  while (bounded) {
    if (config_.max_iterations > 0 && stats.iterations >= config_.max_iterations) break;
    if (config_.budget_secs > 0 && elapsed() >= config_.budget_secs) break;
    const std::size_t iteration = stats.iterations++;
    PhysicalState x0 = plant_.random_nominal_state(rng);
    ControlState q0 = plant_.initial_control();
    std::mt19937_64 plan_rng(rng());
    try {
      Walk walk = plan_walk(q0, x0, plan_rng);
      TestTrace trace = execute_plan(walk, q0, x0);
      if (!trace.successful) continue;
      ++stats.successes;

      SuiteEntry e;
      e.iteration = iteration;
      e.q0 = q0;
      e.x0 = x0;
      e.executed = trace.history;
      const TestTrace* final_trace = &trace;
      PruneResult pr;
      if (minimise) {
        pr = prune(plant_, {trace.history, q0, x0, goal_.condition, goal_.dt});
        e.history = pr.minimized.history;
        e.ledger = std::move(pr.ledger);
        e.probes = pr.probes;
        final_trace = &pr.minimized;
      } else {
        e.history = trace.history;
      }
      e.causal_set = cset(e.history);
      auto goal = plant_.compile(goal_.condition);
      std::vector<double> readings;
      for (std::size_t i = 1; i < final_trace->steps.size(); ++i) {
        plant_.observe_into(final_trace->steps[i].x, readings);
        if (goal.evaluate(readings)) {
          e.success_step = i;
          break;
        }
      }
      e.final_readings = plant_.observe(final_trace->steps.back().x);
      if (e.causal_set.empty()) {
        stats.log.push_back("iteration " + std::to_string(iteration) + ": goal reached without capabilities; skipped");
        continue;
      }
      bool duplicate = false;
      for (const auto& prev : result.tests) {
        if (equivalent(class_of(config_.kind, prev), prev.history, e.history)) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) {
        ++stats.dropped_equivalent;
        stats.log.push_back("iteration " + std::to_string(iteration) + ": " + to_string(e.history) +
                            " is equivalent to an earlier test; dropped");
        continue;
      }
      exclude(class_of(config_.kind, e));
      result.tests.push_back(std::move(e));
    } catch (const Error& err) {
      ++stats.errors;
      stats.log.push_back("iteration " + std::to_string(iteration) + ": " + err.what());
    }
  }
  stats.wall_secs = elapsed();
  result.pairwise_distinct = equivalent_pairs(config_.kind, result.tests).empty();
  return result;
}

Strategy Campaign::current_strategy(std::size_t state_cap) const {
  Strategy s = base_;
  for (const auto& m : monitors_) {
    Strategy e = m.strategy();
    if (s.states().size() * e.states().size() > state_cap * 16)
      throw SizeCapExceeded("composed strategy would exceed " + std::to_string(state_cap) + " states");
    s = simplify(compose(s, e));
    if (s.states().size() > state_cap)
      throw SizeCapExceeded("composed strategy has " + std::to_string(s.states().size()) + " states (cap " +
                            std::to_string(state_cap) + ")");
  }
  return s;
}

}  // namespace cpsfuzz
