#pragma once

// Test-side reference implementations over plain std::set and bitmasks,
// sharing no code with the library's relations.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cpsfuzz/capability.hpp"
#include "cpsfuzz/condition.hpp"
#include "cpsfuzz/equivalence.hpp"
#include "cpsfuzz/strategy.hpp"

namespace oracle {

using namespace cpsfuzz;

using Raw = std::set<std::string>;
using RawHistory = std::vector<Raw>;

inline Raw raw(const CapabilitySet& y) {
  Raw r;
  for (const auto& c : y) r.insert(c.component + "=" + c.value);
  return r;
}

inline RawHistory raw(const CapabilityHistory& h) {
  RawHistory out;
  for (const auto& y : h) out.push_back(raw(y));
  return out;
}

inline Raw union_of(const RawHistory& h) {
  Raw u;
  for (const auto& y : h) u.insert(y.begin(), y.end());
  return u;
}

inline RawHistory collapse(const RawHistory& h) {
  RawHistory out;
  for (const auto& y : h)
    if (out.empty() || out.back() != y) out.push_back(y);
  return out;
}

inline bool is_prefix(const RawHistory& a, const RawHistory& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

inline bool includes(const Raw& big, const Raw& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// A history with its union, collapse and prefix unions computed once, as
// bitmasks over capability names interned on first sight.
using Bits = std::uint32_t;

inline Bits bits(const Raw& r) {
  static std::map<std::string, int> names;
  Bits b = 0;
  for (const auto& n : r) {
    auto it = names.emplace(n, static_cast<int>(names.size())).first;
    b |= Bits{1} << it->second;
  }
  return b;
}

struct Profile {
  std::vector<Bits> h;
  Bits uni = 0;
  std::vector<Bits> ord;
  std::vector<Bits> prefix_unions;  // including ε
};

inline Profile profile(const RawHistory& raw_history) {
  Profile p;
  p.prefix_unions.push_back(0);
  for (const auto& y : raw_history) {
    Bits b = bits(y);
    p.h.push_back(b);
    if (p.ord.empty() || p.ord.back() != b) p.ord.push_back(b);
    p.uni |= b;
    p.prefix_unions.push_back(p.uni);
  }
  return p;
}

inline bool is_prefix(const std::vector<Bits>& a, const std::vector<Bits>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// The three relations exactly as defined.
inline bool equivalent(ClassKind kind, Bits yb, const Profile& a, const Profile& b) {
  switch (kind) {
    case ClassKind::CapabilitySet: return a.h == b.h || ((a.uni & yb) == yb && (b.uni & yb) == yb);
    case ClassKind::StrongSet: return a.uni == b.uni;
    case ClassKind::StrongOrder: return is_prefix(a.ord, b.ord) || is_prefix(b.ord, a.ord);
  }
  return false;
}

inline bool equivalent(ClassKind kind, const Raw& y, const RawHistory& a, const RawHistory& b) {
  return equivalent(kind, bits(y), profile(a), profile(b));
}

// What a prefix-closed exclusion can express: π is dropped as soon as some
// prefix of it commits to the anchor's class.
inline bool excluded_prefix_closed(ClassKind kind, Bits y, const Profile& anchor, const Profile& h) {
  switch (kind) {
    case ClassKind::CapabilitySet: return (h.uni & y) == y;
    case ClassKind::StrongSet:
      return std::find(h.prefix_unions.begin(), h.prefix_unions.end(), anchor.uni) != h.prefix_unions.end();
    case ClassKind::StrongOrder: return is_prefix(anchor.ord, h.ord);
  }
  return false;
}

inline bool excluded_prefix_closed(ClassKind kind, const Raw& y, const RawHistory& anchor, const RawHistory& h) {
  return excluded_prefix_closed(kind, bits(y), profile(anchor), profile(h));
}

inline const std::vector<Capability>& pool() {
  static const std::vector<Capability> caps{{"p1", "on"}, {"p2", "on"}, {"p3", "on"}};
  return caps;
}

/// All 8 subsets of the pool.
inline std::vector<CapabilitySet> universe() {
  std::vector<CapabilitySet> out;
  for (unsigned m = 0; m < 8; ++m) {
    CapabilitySet s;
    for (unsigned i = 0; i < 3; ++i)
      if (m >> i & 1) s.insert(pool()[i]);
    out.push_back(s);
  }
  return out;
}

/// ≤ 4 states, γ ≡ true, φ one of: a literal set, a conjunction of
/// non-memberships, or true. At most one transition per ordered pair.
inline Strategy random_strategy(std::mt19937_64& rng) {
  auto u = universe();
  Strategy s("random");
  std::size_t n = 1 + rng() % 4;
  for (std::size_t i = 0; i < n; ++i) s.add_state("s" + std::to_string(i));
  s.set_initial(std::size_t{0});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (rng() % 100 >= 45 && !(a == 0 && b == 0)) continue;
      CapabilityCondition phi;
      switch (rng() % 3) {
        case 0: phi = CapabilityCondition::exactly(u[rng() % u.size()]); break;
        case 1: {
          for (const auto& c : pool()) {
            if (rng() % 2) continue;
            auto atom = CapabilityCondition::non_member(c, SetExpr::placeholder());
            phi = phi.is_true() ? atom : CapabilityCondition::conjunction(phi, atom);
          }
          break;
        }
        default: break;
      }
      s.add_transition(a, b, SensorCondition::truth(), phi);
    }
  }
  return s;
}

/// Reference language: breadth-first subset construction over the universe.
inline std::set<CapabilityHistory> language(const Strategy& s, const std::vector<CapabilitySet>& u, std::size_t max_len) {
  std::set<CapabilityHistory> out;
  std::vector<std::pair<CapabilityHistory, std::set<std::size_t>>> frontier{{{}, {s.initial()}}};
  out.insert(CapabilityHistory{});
  for (std::size_t len = 0; len < max_len; ++len) {
    std::vector<std::pair<CapabilityHistory, std::set<std::size_t>>> next;
    for (const auto& [h, states] : frontier) {
      for (const auto& y : u) {
        std::set<std::size_t> to;
        for (std::size_t q : states)
          for (std::size_t t : s.outgoing(q))
            if (s.transitions()[t].phi.evaluate(y, {})) to.insert(s.transitions()[t].to);
        if (to.empty()) continue;
        auto h2 = h;
        h2.push_back(y);
        out.insert(h2);
        next.emplace_back(std::move(h2), std::move(to));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace oracle
