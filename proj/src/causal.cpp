#include "cpsfuzz/causal.hpp"

#include <set>
#include <tuple>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

Strategy replay_strategy(const CapabilityHistory& history) {
  Strategy s("replay");
  auto name = [](std::size_t i) { return "s" + std::to_string(i); };
  for (std::size_t i = 0; i <= history.size(); ++i) s.add_state(name(i));
  s.set_initial(name(0));
  for (std::size_t i = 0; i < history.size(); ++i)
    s.add_transition(name(i), name(i + 1), SensorCondition::truth(), CapabilityCondition::exactly(history[i]));
  s.add_transition(name(history.size()), name(history.size()), SensorCondition::truth(),
                   CapabilityCondition::exactly({}));
  return s;
}

CapabilityHistory remove_capability(const CapabilityHistory& history, const Capability& y, std::size_t k,
                                    std::size_t l) {
  slice(history, k, l);  // bounds check
  CapabilityHistory out = history;
  for (std::size_t i = k; i <= l; ++i) out[i - 1].erase(y);
  return out;
}

std::vector<Slice> maximal_slices(const CapabilityHistory& history) {
  std::vector<Slice> out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (!out.empty() && out.back().set == history[i]) {
      out.back().l = i + 1;
    } else {
      out.push_back({i + 1, i + 1, history[i]});
    }
  }
  return out;
}

TestTrace replay(const Plant& plant, const ReplaySpec& spec, const CapabilityHistory& history) {
  TestTrace trace;
  trace.goal = spec.goal;
  trace.dt = spec.dt;
  trace.steps.push_back({spec.q0, spec.x0, 0});
  auto goal = plant.compile(spec.goal);
  std::vector<double> readings;
  TestStep cur = trace.steps.back();
  const std::size_t n = history.size();
  for (std::size_t i = 0; i < n + kGraceIntervals; ++i) {
    const CapabilitySet y = i < n ? history[i] : CapabilitySet{};
    plant.advance(cur.q, cur.x, y, spec.dt);
    cur.r = std::min(i + 1, n);
    trace.steps.push_back(cur);
    trace.history.push_back(y);
    plant.observe_into(cur.x, readings);
    if (goal.evaluate(readings)) {
      trace.successful = true;
      return trace;
    }
  }
  // Failed: report the manipulated part only.
  trace.steps.resize(n + 1);
  trace.history.resize(n);
  return trace;
}

CausalVerdict is_causal(const Plant& plant, const ReplaySpec& spec, const Capability& y, std::size_t k,
                        std::size_t l) {
  TestTrace t = replay(plant, spec, remove_capability(spec.history, y, k, l));
  if (t.successful) return {false, std::move(t)};
  return {true, std::nullopt};
}

PruneResult prune(const Plant& plant, const ReplaySpec& spec) {
  PruneResult result;
  TestTrace original = replay(plant, spec, spec.history);
  if (!original.successful)
    throw NotReproducibleError("replaying " + to_string(spec.history) + " from the recorded origin does not reach " +
                               to_string(spec.goal));
  ReplaySpec work = spec;
  work.history = original.history;

  std::set<std::tuple<Capability, std::size_t, std::size_t>> causal;
  while (true) {
    bool probed = false;
    for (const auto& s : maximal_slices(work.history)) {
      for (const auto& y : s.set) {
        if (causal.count({y, s.k, s.l})) continue;
        ++result.probes;
        CausalVerdict v = is_causal(plant, work, y, s.k, s.l);
        if (v.causal) {
          causal.insert({y, s.k, s.l});
          result.ledger.push_back({y, s.k, s.l, CausalRecord::Verdict::Causal, std::nullopt});
        } else {
          work.history = v.counterexample->history;
          result.ledger.push_back({y, s.k, s.l, CausalRecord::Verdict::Pruned, std::move(v.counterexample)});
        }
        probed = true;
        break;
      }
      if (probed) break;
    }
    if (!probed) break;
  }
  result.minimized = replay(plant, spec, work.history);
  if (!result.minimized.successful)
    throw NotReproducibleError("minimised history " + to_string(work.history) + " no longer reaches the goal");
  return result;
}

}  // namespace cpsfuzz
