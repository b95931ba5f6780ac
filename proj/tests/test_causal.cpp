#include <doctest.h>

#include <random>

#include "cpsfuzz/causal.hpp"
#include "cpsfuzz/equivalence.hpp"
#include "cpsfuzz/errors.hpp"

using namespace cpsfuzz;

namespace {

const Capability mv101open{"MV101", "open"}, p101off{"P101", "off"}, p102off{"P102", "off"}, p401on{"P401", "on"};

ReplaySpec overflow_fixture(const Plant& p) {
  CapabilitySet y{mv101open, p101off, p102off, p401on};
  return {{y, y, y}, p.initial_control(), p.state_with_levels({300, 650, 650}), parse_sensor_condition("LIT101 > 1100"),
          600};
}

std::size_t events(const CapabilityHistory& h) {
  std::size_t n = 0;
  for (const auto& y : h) n += y.size();
  return n;
}

}  // namespace

TEST_CASE("replay strategy is a chain with a trailing empty loop") {
  CapabilitySet a{mv101open}, b{p101off};
  auto s = replay_strategy({a, b});
  CHECK(s.states().size() == 3);
  CHECK(s.transitions().size() == 3);
  CHECK(language_contains(s, {a, b}));
  CHECK(language_contains(s, {a, b, {}, {}}));
  CHECK_FALSE(language_contains(s, {b}));
  CHECK_FALSE(language_contains(s, {a, b, a}));
  CHECK(enumerate_language(replay_strategy({}), {{}, a}, 2) == std::set<CapabilityHistory>{
                                                                    CapabilityHistory{}, {CapabilitySet{}}, {{}, {}}});
}

TEST_CASE("remove_capability and maximal slices") {
  CapabilitySet y{mv101open, p101off};
  CapabilityHistory h{y, y, {p101off}, y};
  auto r = remove_capability(h, mv101open, 1, 2);
  CHECK(r == CapabilityHistory{{p101off}, {p101off}, {p101off}, y});
  CHECK(remove_capability(h, p401on, 1, 4) == h);
  CHECK_THROWS_AS(remove_capability(h, mv101open, 0, 1), IndexError);
  CHECK_THROWS_AS(remove_capability(h, mv101open, 3, 5), IndexError);
  CHECK_THROWS_AS(remove_capability(h, mv101open, 3, 2), IndexError);

  auto slices = maximal_slices(h);
  REQUIRE(slices.size() == 3);
  CHECK(slices[0] == Slice{1, 2, y});
  CHECK(slices[1] == Slice{3, 3, {p101off}});
  CHECK(slices[2] == Slice{4, 4, y});
  CHECK(maximal_slices({}).empty());
  // slices tile the history
  CHECK(maximal_slices(r).front().l == 3);
}

TEST_CASE("overflow fixture prunes the irrelevant drain pump") {
  Plant p(miniswat());
  auto spec = overflow_fixture(p);
  auto result = prune(p, spec);
  CHECK(result.minimized.successful);
  CHECK(cset(result.minimized.history) == CapabilitySet{mv101open, p101off, p102off});
  CHECK(result.probes == result.ledger.size());
  bool pruned_p401 = false;
  for (const auto& rec : result.ledger) {
    if (rec.verdict == CausalRecord::Verdict::Pruned) {
      REQUIRE(rec.counterexample);
      CHECK(rec.counterexample->successful);
      pruned_p401 |= rec.capability == p401on;
    } else {
      CHECK_FALSE(rec.counterexample);
    }
  }
  CHECK(pruned_p401);

  // pruning a minimised test changes nothing
  auto again_spec = spec;
  again_spec.history = result.minimized.history;
  auto again = prune(p, again_spec);
  CHECK(again.minimized.history == result.minimized.history);
  for (const auto& rec : again.ledger) CHECK(rec.verdict == CausalRecord::Verdict::Causal);
}

TEST_CASE("replay truncates at the first success") {
  Plant p(miniswat());
  auto spec = overflow_fixture(p);
  CapabilitySet y = spec.history.front();
  CapabilityHistory longer(8, y);
  auto t = replay(p, spec, longer);
  REQUIRE(t.successful);
  CHECK(t.history.size() < longer.size());
  CHECK(t.steps.size() == t.history.size() + 1);
  CHECK(p.goal_satisfied(spec.goal, t.steps.back().x));
  for (std::size_t i = 0; i + 1 < t.steps.size(); ++i) CHECK_FALSE(p.goal_satisfied(spec.goal, t.steps[i].x));
}

TEST_CASE("is_causal on the fixture") {
  Plant p(miniswat());
  auto spec = overflow_fixture(p);
  auto drop_valve = is_causal(p, spec, mv101open, 1, 3);
  CHECK(drop_valve.causal);
  CHECK_FALSE(drop_valve.counterexample);
  auto drop_drain = is_causal(p, spec, p401on, 1, 3);
  CHECK_FALSE(drop_drain.causal);
  REQUIRE(drop_drain.counterexample);
  CHECK_FALSE(cset(drop_drain.counterexample->history).contains(p401on));
}

TEST_CASE("flow goal keeps only the valve") {
  Plant p(miniswat());
  CapabilitySet y{mv101open, {"P402", "on"}};
  ReplaySpec spec{{y, y}, p.initial_control(), p.state_with_levels({1050, 650, 650}),
                  parse_sensor_condition("FIT101 > 1.5"), 15};
  auto result = prune(p, spec);
  CHECK(cset(result.minimized.history) == CapabilitySet{mv101open});
}

TEST_CASE("unreproducible tests are rejected") {
  Plant p(miniswat());
  ReplaySpec spec{{{}, {}}, p.initial_control(), p.initial_state(), parse_sensor_condition("LIT101 > 1100"), 600};
  CHECK_THROWS_AS(prune(p, spec), NotReproducibleError);
}

TEST_CASE("random irrelevant capabilities never survive pruning") {
  Plant p(miniswat());
  std::mt19937_64 rng(5);
  std::vector<Capability> noise{{"P401", "on"}, {"P402", "on"}, {"P401", "off"}, {"LIT401", "500"}};
  for (int i = 0; i < 12; ++i) {
    auto spec = overflow_fixture(p);
    CapabilityHistory h;
    for (int k = 0; k < 3; ++k) {
      CapabilitySet y{mv101open, p101off, p102off};
      const auto& extra = noise[rng() % noise.size()];
      if (rng() % 3) y.insert(extra);
      h.push_back(y);
    }
    spec.history = h;
    auto result = prune(p, spec);
    CHECK(result.minimized.successful);
    auto kept = cset(result.minimized.history);
    for (const auto& n : noise) CHECK_FALSE(kept.contains(n));
    CHECK(result.probes <= 2 * events(h));
  }
}
