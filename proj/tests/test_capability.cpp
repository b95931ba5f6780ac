#include <doctest.h>

#include <random>

#include "cpsfuzz/capability.hpp"
#include "cpsfuzz/condition.hpp"
#include "cpsfuzz/equivalence.hpp"
#include "cpsfuzz/errors.hpp"

using namespace cpsfuzz;

namespace {

const Capability p1{"p1", "on"};
const Capability p2{"p2", "on"};
const Capability p3{"p3", "on"};

}  // namespace

TEST_CASE("capability sets are sorted and unique") {
  CapabilitySet s{p2, p1, p2};
  CHECK(s.size() == 2);
  CHECK(s[0] == p1);
  CHECK(to_string(s) == "{[p1,on],[p2,on]}");
  CHECK(to_string(CapabilitySet{}) == "{}");
}

TEST_CASE("one capability per component") {
  CHECK(CapabilitySet{{"MV101", "open"}, {"P101", "on"}}.has_one_per_component());
  CHECK_FALSE(CapabilitySet{{"MV101", "open"}, {"MV101", "close"}}.has_one_per_component());
  CapabilitySet s{{"MV101", "open"}};
  REQUIRE(s.find_component("MV101"));
  CHECK(s.find_component("MV101")->value == "open");
  CHECK(s.find_component("P101") == nullptr);
}

TEST_CASE("set algebra") {
  CapabilitySet a{p1, p2}, b{p2, p3};
  CHECK(a.united(b) == CapabilitySet{p1, p2, p3});
  CHECK(a.intersected(b) == CapabilitySet{p2});
  CHECK(a.minus(b) == CapabilitySet{p1});
  CHECK(CapabilitySet{p2}.subset_of(a));
  CHECK(CapabilitySet{}.subset_of(a));
  CHECK_FALSE(b.subset_of(a));
}

TEST_CASE("cset of the worked example") {
  CapabilitySet P{p1}, Q{p1, p2};
  CapabilityHistory h{P, P, P, Q, Q, Q, P, P, P};
  CHECK(cset(h) == CapabilitySet{p1, p2});
  CHECK(cset({}).empty());
  CHECK(cset({{}, {}, {}}).empty());
}

TEST_CASE("slices are 1-based and inclusive") {
  CapabilitySet P{p1}, Q{p2}, R{p3};
  CapabilityHistory h{P, Q, R};
  CHECK(slice(h, 2, 3) == CapabilityHistory{Q, R});
  CHECK(slice(h, 1, 3) == h);
  CHECK(slice({P, P, Q}, 1, 2) == CapabilityHistory{P, P});
  CHECK_THROWS_AS(slice(h, 0, 1), IndexError);
  CHECK_THROWS_AS(slice(h, 2, 1), IndexError);
  CHECK_THROWS_AS(slice(h, 1, 4), IndexError);
}

TEST_CASE("event count sums set sizes") {
  CHECK(event_count({{p1}, {}, {p1, p2}}) == 3);
  CHECK(event_count({}) == 0);
}

TEST_CASE("canonical numbers") {
  CHECK(canonical_number(800) == "800");
  CHECK(canonical_number(0.25) == "0.25");
  CHECK(canonical_number(-3.5) == "-3.5");
}

TEST_CASE("cord collapses consecutive duplicates") {
  CapabilitySet P{p1}, Q{p2}, R{p3};
  CHECK(cord({P, Q, Q, R, P, P}) == CapabilityHistory{P, Q, R, P});
  CHECK(cord({P, P, Q, R, R, P}) == CapabilityHistory{P, Q, R, P});
  CHECK(cord({P, P, P, P}) == CapabilityHistory{P});
  CHECK(cord({}).empty());
}

TEST_CASE("cord is idempotent and cset-preserving (random histories)") {
  std::mt19937_64 rng(11);
  std::vector<CapabilitySet> pool{{}, {p1}, {p2}, {p1, p2}};
  for (int i = 0; i < 500; ++i) {
    CapabilityHistory h(rng() % 9);
    for (auto& y : h) y = pool[rng() % pool.size()];
    auto c = cord(h);
    CHECK(cord(c) == c);
    CHECK(cset(c) == cset(h));
    for (std::size_t j = 1; j < c.size(); ++j) CHECK(c[j] != c[j - 1]);
  }
}

TEST_CASE("history text round trip") {
  CapabilityHistory h{{}, {p1}, {p1, p2}};
  CHECK(parse_history(to_string(h)) == h);
  CHECK(parse_history("").empty());
}
