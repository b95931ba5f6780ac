#include <doctest.h>

#include <random>

#include "cpsfuzz/condition.hpp"
#include "cpsfuzz/errors.hpp"

using namespace cpsfuzz;

namespace {

Readings lit101(double v) {
  Readings r;
  r.set("LIT101", v);
  return r;
}

std::vector<CapabilitySet> all_subsets(const std::vector<Capability>& caps) {
  std::vector<CapabilitySet> out;
  for (std::size_t m = 0; m < (1u << caps.size()); ++m) {
    CapabilitySet s;
    for (std::size_t i = 0; i < caps.size(); ++i)
      if (m >> i & 1) s.insert(caps[i]);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("sensor condition evaluation") {
  auto band = parse_sensor_condition("LIT101 >= 250 and LIT101 <= 1100");
  CHECK(band.evaluate(lit101(500)));
  CHECK_FALSE(band.evaluate(lit101(200)));
  CHECK(parse_sensor_condition("true").evaluate(lit101(0)));
  CHECK_FALSE(parse_sensor_condition("LIT101 < 1000").evaluate(lit101(1000)));
  CHECK(parse_sensor_condition("LIT101 < 250").evaluate(lit101(200)));
  CHECK(parse_sensor_condition("not (LIT101 > 3)").evaluate(lit101(3)));
  CHECK(parse_sensor_condition("LIT101 = 3 or LIT101 > 9").evaluate(lit101(3)));
  CHECK(parse_sensor_condition("").is_true());
}

TEST_CASE("unicode operators and reversed comparisons") {
  CHECK(parse_sensor_condition("LIT101 ≥ 250 ∧ LIT101 ≤ 1100") == parse_sensor_condition("LIT101 >= 250 and LIT101 <= 1100"));
  CHECK(parse_sensor_condition("250 <= LIT101").evaluate(lit101(300)));
  CHECK_FALSE(parse_sensor_condition("250 <= LIT101").evaluate(lit101(200)));
}

TEST_CASE("missing sensor") {
  CHECK_THROWS_AS(parse_sensor_condition("FIT101 > 1").evaluate(lit101(1)), UnknownSensorError);
}

TEST_CASE("sensor condition print/parse round trip") {
  for (const char* text : {"LIT101 < 1000", "LIT101 >= 250 and LIT101 <= 1100", "not (LIT101 > 3 or FIT101 < 0.5)",
                           "(LIT101 < 1 or LIT101 > 2) and FIT101 = 0", "true"}) {
    auto c = parse_sensor_condition(text);
    CHECK(parse_sensor_condition(to_string(c)) == c);
  }
}

TEST_CASE("capability condition evaluation") {
  Capability p101on{"P101", "on"}, mv101close{"MV101", "close"}, mv101open{"MV101", "open"};
  CHECK(parse_capability_condition("[P101,on] notin _").evaluate({mv101close}, {}));
  CHECK_FALSE(parse_capability_condition("[P101,on] ∉ _").evaluate({p101on}, {}));
  CHECK(parse_capability_condition("_ == {}").evaluate({}, {}));
  CHECK(parse_capability_condition("_ == ∅").evaluate({}, {}));
  Assignment alpha{{"X", {mv101open}}};
  CHECK(parse_capability_condition("[MV101,open] in _ and X == _").evaluate({mv101open}, alpha));
  CHECK_FALSE(parse_capability_condition("[MV101,open] in _ and X == _").evaluate({mv101open, p101on}, alpha));
  CHECK_THROWS_AS(parse_capability_condition("X == _").evaluate({}, {}), UnboundVariableError);
}

TEST_CASE("closed is an alias for close") {
  CHECK(parse_capability("[MV101,closed]") == Capability{"MV101", "close"});
  CHECK(parse_capability("[LIT101,800.0]") == Capability{"LIT101", "800"});
}

TEST_CASE("shorthands agree with their core forms on every subset") {
  std::vector<Capability> caps{{"a", "1"}, {"b", "1"}, {"c", "1"}};
  auto subsets = all_subsets(caps);
  struct Pair {
    const char* shorthand;
    const char* core;
  };
  for (auto [s, c] : {Pair{"[a,1] in _", "{[a,1]} subset _"}, Pair{"[a,1] notin _", "not ({[a,1]} subset _)"},
                      Pair{"_ != {[a,1]}", "not (_ == {[a,1]})"},
                      Pair{"_ notsubset {[a,1],[b,1]}", "not (_ subset {[a,1],[b,1]})"},
                      Pair{"{[b,1]}", "_ == {[b,1]}"}, Pair{"[a,1] ∈ _ ∨ [c,1] ∉ _", "{[a,1]} ⊆ _ or not ({[c,1]} ⊆ _)"}}) {
    auto short_form = parse_capability_condition(s);
    auto core_form = parse_capability_condition(c);
    for (const auto& y : subsets) {
      for (const auto& x : subsets) {
        Assignment alpha{{"X", x}};
        CHECK_MESSAGE(short_form.evaluate(y, alpha) == core_form.evaluate(y, alpha), s);
      }
    }
  }
}

TEST_CASE("capability condition print/parse round trip") {
  for (const char* text : {"true", "_ == {}", "[P101,on] notin _", "[MV101,open] in _ and X == _",
                           "{[a,1]} subset _ and _ subset {[a,1],[b,1]}", "not (_ == {[a,1]} or X != _)",
                           "_ notsubset {[a,1]}"}) {
    auto c = parse_capability_condition(text);
    CHECK_MESSAGE(parse_capability_condition(to_string(c)) == c, text);
  }
}

TEST_CASE("variables and mentioned capabilities") {
  auto c = parse_capability_condition("[a,1] in _ and (X == _ or Y subset {[b,1]})");
  CHECK(c.variables() == std::vector<std::string>{"X", "Y"});
  CHECK(c.mentioned_capabilities() == CapabilitySet{{"a", "1"}, {"b", "1"}});
  auto r = c.rename_variables([](const std::string& v) { return v + "_2"; });
  CHECK(r.variables() == std::vector<std::string>{"X_2", "Y_2"});
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_capability_condition("[a,1] in _ and (");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 17);
  }
  try {
    parse_sensor_condition("LIT101 << 3", {4, 10});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() >= 17);
  }
  CHECK_THROWS_AS(parse_capability("[MV101]"), ParseError);
  CHECK_THROWS_AS(parse_history("{[a,1]"), ParseError);
}

TEST_CASE("compiled conditions agree with the tree evaluator") {
  auto cond = parse_sensor_condition("(LIT101 < 300 or FIT101 >= 1.5) and not (LIT101 = 100)");
  auto index = [](std::string_view s) -> std::optional<std::size_t> {
    if (s == "LIT101") return 0;
    if (s == "FIT101") return 1;
    return std::nullopt;
  };
  CompiledSensorCondition compiled(cond, index);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> lvl(0, 6), flow(0, 4);
  for (int i = 0; i < 300; ++i) {
    double l = lvl(rng) * 50.0, f = flow(rng) * 0.5;
    Readings r;
    r.set("LIT101", l);
    r.set("FIT101", f);
    std::vector<double> v{l, f};
    CHECK(compiled.evaluate(v) == cond.evaluate(r));
  }
}

TEST_CASE("histories") {
  CHECK(parse_history("").empty());
  CHECK(parse_history(" eps ").empty());
  CHECK(parse_history("ε").empty());
  auto h = parse_history("{} {[p1,on]} {[p1,on],[p2,on]}");
  REQUIRE(h.size() == 3);
  CHECK(parse_history(to_string(h)) == h);
}
