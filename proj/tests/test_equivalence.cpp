#include <doctest.h>

#include <random>

#include "cpsfuzz/equivalence.hpp"
#include "cpsfuzz/errors.hpp"
#include "cpsfuzz/strategy_io.hpp"
#include "oracle.hpp"

using namespace cpsfuzz;

namespace {

const Capability p1{"p1", "on"}, p2{"p2", "on"}, p3{"p3", "on"};
const CapabilitySet E{}, P{p1}, Q{p1, p2}, R{p3};

CapabilityHistory h(std::initializer_list<CapabilitySet> sets) { return CapabilityHistory(sets); }

std::vector<CapabilitySet> u2() { return {E, {p1}, {p2}, {p1, p2}}; }

Strategy p3_guard() { return load_strategy(std::string(CPSFUZZ_DATA_DIR) + "/strategies/p3_guard.strategy"); }

CapabilityHistory random_history(std::mt19937_64& rng, const std::vector<CapabilitySet>& u, std::size_t max_len) {
  CapabilityHistory out(rng() % (max_len + 1));
  for (auto& y : out) y = u[rng() % u.size()];
  return out;
}

}  // namespace

TEST_CASE("class kind names") {
  CHECK(parse_class_kind("causal-set") == ClassKind::CapabilitySet);
  CHECK(parse_class_kind("capability-set") == ClassKind::CapabilitySet);
  CHECK(parse_class_kind("strong-set") == ClassKind::StrongSet);
  CHECK(parse_class_kind("strong-order") == ClassKind::StrongOrder);
  CHECK_FALSE(parse_class_kind("weak"));
  for (auto k : {ClassKind::CapabilitySet, ClassKind::StrongSet, ClassKind::StrongOrder})
    CHECK(parse_class_kind(to_string(k)) == k);
}

TEST_CASE("worked equivalence examples") {
  EquivalenceClassSpec ys{ClassKind::CapabilitySet, {p1, p2}, {}};
  CHECK(equivalent(ys, h({P, P, P, Q, Q, Q, P, P, P}), h({Q, Q})));
  CHECK_FALSE(equivalent(ys, h({P, P}), h({Q})));
  CHECK(equivalent(ys, h({P}), h({P})));  // identical histories

  const CapabilitySet S{p2}, U{p1, p3};
  EquivalenceClassSpec order{ClassKind::StrongOrder, {}, {}};
  // P Q R P with R = {p3}
  CHECK(equivalent(order, h({P, Q, Q, R, P, P}), h({P, P, Q, R, R, P})));
  CHECK(equivalent(order, h({P, Q, R, P}), h({P, Q, R, P, U})));
  CHECK_FALSE(equivalent(order, h({P, Q}), h({P, R})));

  EquivalenceClassSpec strong{ClassKind::StrongSet, {}, {}};
  CHECK(equivalent(strong, h({P, S}), h({Q})));
  CHECK_FALSE(equivalent(strong, h({P}), h({Q})));
}

TEST_CASE("relations agree with the reference, are reflexive and symmetric") {
  std::mt19937_64 rng(21);
  auto u = oracle::universe();
  for (int i = 0; i < 3000; ++i) {
    auto a = random_history(rng, u, 5), b = random_history(rng, u, 5);
    auto kind = static_cast<ClassKind>(rng() % 3);
    CapabilitySet y = u[1 + rng() % 7];
    EquivalenceClassSpec spec{kind, y, a};
    bool ref = oracle::equivalent(kind, oracle::raw(y), oracle::raw(a), oracle::raw(b));
    CHECK(equivalent(spec, a, b) == ref);
    CHECK(equivalent(spec, b, a) == equivalent(spec, a, b));
    CHECK(equivalent(spec, a, a));
  }
}

TEST_CASE("strong order is not transitive") {
  EquivalenceClassSpec order{ClassKind::StrongOrder, {}, {}};
  CHECK(equivalent(order, h({P, Q}), h({P})));
  CHECK(equivalent(order, h({P}), h({P, R})));
  CHECK_FALSE(equivalent(order, h({P, Q}), h({P, R})));
}

TEST_CASE("capability-set exclusion shape and language") {
  auto s = excl_capability_set({p1, p2});
  CHECK(s.states().size() == 3);
  CHECK(s.transitions().size() == 5);
  CHECK_FALSE(language_contains(s, h({P, P, Q})));
  CHECK(language_contains(s, h({P, P, P})));

  auto one = excl_capability_set({p1});
  for (const auto& hist : enumerate_language(one, u2(), 3)) CHECK_FALSE(cset(hist).contains(p1));
  CHECK(enumerate_language(one, u2(), 3).size() == 1 + 2 + 4 + 8);

  CHECK_THROWS_AS(excl_capability_set({}), EmptySetError);
}

TEST_CASE("strong-set exclusion shape and language") {
  auto s = excl_strong_set({p1, p2});
  CHECK(s.states().size() == 4);
  CHECK(language_contains(s, h({P, P})));  // strictly fewer
  CHECK(language_contains(s, h({R, Q})));  // strictly more, and never exactly C on the way
  for (const auto& hist : all_histories(u2(), 4)) {
    bool exact = cset(hist) == CapabilitySet{p1, p2};
    if (exact) CHECK_FALSE(language_contains(s, hist));
  }
  CHECK_THROWS_AS(excl_strong_set(CapabilitySet(std::vector<Capability>{
                      {"a", "1"}, {"b", "1"}, {"c", "1"}, {"d", "1"}, {"e", "1"}, {"f", "1"}, {"g", "1"},
                      {"h", "1"}, {"i", "1"}, {"j", "1"}, {"k", "1"}, {"l", "1"}, {"m", "1"}})),
                  SizeCapExceeded);
}

TEST_CASE("strong-order exclusion shape and language") {
  auto s = excl_strong_order(h({P, Q, P}));
  CHECK(s.states().size() == 4);
  const CapabilitySet Rr{p2};
  CHECK(language_contains(s, h({P, Rr})));
  CHECK_FALSE(language_contains(s, h({P, Q, Q, P})));
  CHECK_FALSE(language_contains(s, h({P, Q, P, Rr})));
  // proper prefixes of the order stay in the language
  CHECK(language_contains(s, h({P, Q})));
  CHECK_THROWS_AS(excl_strong_order(h({P, P})), NotDeduplicatedError);
  CHECK_THROWS_AS(excl_strong_order({}), EmptySetError);
}

TEST_CASE("constructions equal their prefix-closed characterisation (random anchors)") {
  std::mt19937_64 rng(8);
  auto u = oracle::universe();
  auto all = all_histories(u, 4);
  for (int i = 0; i < 30; ++i) {
    auto kind = static_cast<ClassKind>(i % 3);
    CapabilityHistory anchor;
    while (cset(anchor).empty()) anchor = random_history(rng, u, 4);
    CapabilitySet y;
    for (const auto& c : cset(anchor))
      if (rng() % 2) y.insert(c);
    if (y.empty()) y.insert(cset(anchor)[0]);
    auto s = excl({kind, y, anchor});
    auto lang = enumerate_language(s, u, 4);
    for (const auto& hist : all) {
      bool expected = !oracle::excluded_prefix_closed(kind, oracle::raw(y), oracle::raw(anchor), oracle::raw(hist));
      CHECK(lang.count(hist) == expected);
    }
  }
}

TEST_CASE("monitors recognise the same languages as the explicit constructions") {
  std::mt19937_64 rng(4);
  auto u = oracle::universe();
  auto all = all_histories(u, 4);
  for (int i = 0; i < 30; ++i) {
    auto kind = static_cast<ClassKind>(i % 3);
    CapabilityHistory anchor;
    while (cset(anchor).empty()) anchor = random_history(rng, u, 4);
    CapabilitySet y = cset(anchor);
    EquivalenceClassSpec spec{kind, y, anchor};
    auto m = ExclusionMonitor::for_class(spec);
    auto explicit_lang = enumerate_language(excl(spec), u, 4);
    auto monitor_lang = enumerate_language(m.strategy(), u, 4);
    CHECK(explicit_lang == monitor_lang);
    for (const auto& hist : all) {
      CHECK(m.accepts(hist) == (explicit_lang.count(hist) == 1));
      // admission(s) holds for exactly the sets step() accepts
      ExclusionMonitor::State st = m.initial();
      for (const auto& yy : hist) {
        for (const auto& cand : u) CHECK(m.admission(st).evaluate(cand, {}) == m.step(st, cand).has_value());
        auto nx = m.step(st, yy);
        if (!nx) break;
        st = *nx;
      }
    }
  }
}

TEST_CASE("composition is language intersection") {
  std::mt19937_64 rng(12);
  auto u = oracle::universe();
  for (int i = 0; i < 25; ++i) {
    auto a = oracle::random_strategy(rng), b = oracle::random_strategy(rng);
    auto la = oracle::language(a, u, 3), lb = oracle::language(b, u, 3);
    std::set<CapabilityHistory> both;
    for (const auto& x : la)
      if (lb.count(x)) both.insert(x);
    CHECK(enumerate_language(compose(a, b), u, 3) == both);
    CHECK(enumerate_language(simplify(compose(a, b)), u, 3) == both);
  }
}

TEST_CASE("composition is associative and universal is its identity (language level)") {
  std::mt19937_64 rng(13);
  auto u = oracle::universe();
  for (int i = 0; i < 15; ++i) {
    auto a = oracle::random_strategy(rng), b = oracle::random_strategy(rng), c = oracle::random_strategy(rng);
    CHECK(enumerate_language(compose(compose(a, b), c), u, 3) == enumerate_language(compose(a, compose(b, c)), u, 3));
    CHECK(enumerate_language(compose(a, universal_strategy()), u, 3) == enumerate_language(a, u, 3));
  }
}

TEST_CASE("enumerate_language agrees with a reference subset construction") {
  std::mt19937_64 rng(14);
  auto u = oracle::universe();
  for (int i = 0; i < 40; ++i) {
    auto s = oracle::random_strategy(rng);
    CHECK(enumerate_language(s, u, 4) == oracle::language(s, u, 4));
  }
}

TEST_CASE("small languages") {
  CHECK(enumerate_language(null_strategy(), {E, P}, 2) == std::set<CapabilityHistory>{{}, {E}, {E, E}});
  CHECK(enumerate_language(universal_strategy(), u2(), 3).size() == 1 + 4 + 16 + 64);
  CHECK(language_contains(null_strategy(), h({E, E, E})));
  CHECK(language_contains(excl_strong_order(h({P})), {}));
  CHECK_THROWS_AS(enumerate_language(universal_strategy(), oracle::universe(), 7, 1000), BudgetExceeded);
}

TEST_CASE("variables are searched over the history's sets") {
  auto s = load_strategy(std::string(CPSFUZZ_DATA_DIR) + "/strategies/conditional.strategy");
  CapabilitySet y{{"MV101", "open"}, {"P101", "off"}};
  CHECK(language_contains(s, h({E, E, y, y, y})));
  CHECK_FALSE(language_contains(s, h({E, y, {{"MV101", "open"}}})));
}

TEST_CASE("composing the example strategy with the capability-set exclusion") {
  auto t = p3_guard();
  auto composed = simplify(compose(t, excl_capability_set({p1, p2})));
  CHECK_FALSE(language_contains(composed, h({E, E, E, P, P, Q, Q, Q, Q})));
  CHECK(language_contains(composed, h({E, E, P, P, P, P, P})));
  // p3 stays forbidden after the update
  CHECK_FALSE(language_contains(composed, h({E, R})));
  CHECK_FALSE(language_contains(t, h({E, R})));

  auto u = u2();
  std::set<CapabilityHistory> expected;
  for (const auto& x : enumerate_language(t, u, 4))
    if (!CapabilitySet{p1, p2}.subset_of(cset(x))) expected.insert(x);
  CHECK(enumerate_language(composed, u, 4) == expected);
}

TEST_CASE("exclusions and compositions survive the text format") {
  for (const auto& s : {excl_capability_set({p1, p2}), excl_strong_set({p1, p2}), excl_strong_order(h({P, Q, P})),
                        compose(p3_guard(), excl_capability_set({p1, p2}))}) {
    auto back = parse_strategy(print_strategy(s));
    CHECK(back == s);
  }
}

TEST_CASE("simplify drops obviously unsatisfiable transitions") {
  CHECK(obviously_unsatisfiable(parse_capability_condition("_ == {[p1,on]} and _ == {}")));
  CHECK(obviously_unsatisfiable(parse_capability_condition("_ == {[p1,on]} and [p1,on] notin _")));
  CHECK_FALSE(obviously_unsatisfiable(parse_capability_condition("_ == {[p1,on]} and [p2,on] notin _")));
  auto composed = compose(null_strategy(), excl_capability_set({p1}));
  auto simple = simplify(composed);
  CHECK(simple.transitions().size() <= composed.transitions().size());
  CHECK(enumerate_language(simple, u2(), 3) == enumerate_language(composed, u2(), 3));
}
