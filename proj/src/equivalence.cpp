#include "cpsfuzz/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

std::string_view to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::CapabilitySet: return "causal-set";
    case ClassKind::StrongSet: return "strong-set";
    case ClassKind::StrongOrder: return "strong-order";
  }
  return "?";
}

std::optional<ClassKind> parse_class_kind(std::string_view text) {
  if (text == "causal-set" || text == "capability-set") return ClassKind::CapabilitySet;
  if (text == "strong-set") return ClassKind::StrongSet;
  if (text == "strong-order") return ClassKind::StrongOrder;
  return std::nullopt;
}

CapabilityHistory cord(const CapabilityHistory& history) {
  CapabilityHistory out;
  for (const auto& y : history) {
    if (out.empty() || out.back() != y) out.push_back(y);
  }
  return out;
}

bool equivalent(const EquivalenceClassSpec& spec, const CapabilityHistory& a, const CapabilityHistory& b) {
  switch (spec.kind) {
    case ClassKind::CapabilitySet:
      return a == b || (spec.y.subset_of(cset(a)) && spec.y.subset_of(cset(b)));
    case ClassKind::StrongSet: return cset(a) == cset(b);
    case ClassKind::StrongOrder: {
      auto ca = cord(a);
      auto cb = cord(b);
      if (ca.size() > cb.size()) std::swap(ca, cb);
      return std::equal(ca.begin(), ca.end(), cb.begin());
    }
  }
  return false;
}

namespace {

CapabilityCondition conj(CapabilityCondition a, CapabilityCondition b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  return CapabilityCondition::conjunction(std::move(a), std::move(b));
}

SensorCondition conj(SensorCondition a, SensorCondition b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  return SensorCondition::conjunction(std::move(a), std::move(b));
}

const SetExpr kAny = SetExpr::placeholder();

}  // namespace

Strategy excl_capability_set(const CapabilitySet& y) {
  if (y.empty()) throw EmptySetError("excluding the class of Y = {} would exclude every test");
  Strategy s("excl_set");
  s.set_initial("q0");
  CapabilityCondition none;
  for (const auto& cap : y) none = conj(none, CapabilityCondition::non_member(cap, kAny));
  s.add_transition("q0", "q0", SensorCondition::truth(), none);
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::string qi = "q" + std::to_string(i + 1);
    auto without = CapabilityCondition::non_member(y[i], kAny);
    s.add_transition("q0", qi, SensorCondition::truth(), without);
    s.add_transition(qi, qi, SensorCondition::truth(), without);
  }
  return s;
}

Strategy excl_strong_set(const CapabilitySet& c, std::size_t cap) {
  if (c.empty()) throw EmptySetError("excluding the strong-set class of {} would exclude the empty test");
  if (c.size() > cap)
    throw SizeCapExceeded("strong-set exclusion needs 2^" + std::to_string(c.size()) + " states; cap is |C| <= " +
                          std::to_string(cap));
  const std::size_t n = c.size();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  auto subset = [&](std::uint64_t m) {
    std::vector<Capability> caps;
    for (std::size_t i = 0; i < n; ++i) {
      if (m >> i & 1) caps.push_back(c[i]);
    }
    return CapabilitySet(std::move(caps));
  };
  auto name = [&](std::uint64_t m) { return "q" + to_string(subset(m)); };

  Strategy s("excl_strong_set");
  s.set_initial(name(0));
  for (std::uint64_t m = 0; m < full; ++m) s.add_state(name(m));
  s.add_state("q*");
  const auto escape = CapabilityCondition::not_subset(kAny, SetExpr::set(c));
  for (std::uint64_t m = 0; m < full; ++m) {
    for (std::uint64_t m2 = m;; m2 = (m2 + 1) | m) {
      if (m2 == full) break;
      auto phi = CapabilityCondition::conjunction(CapabilityCondition::subset(SetExpr::set(subset(m2 & ~m)), kAny),
                                                  CapabilityCondition::subset(kAny, SetExpr::set(subset(m2))));
      s.add_transition(name(m), name(m2), SensorCondition::truth(), phi);
    }
    s.add_transition(name(m), "q*", SensorCondition::truth(), escape);
  }
  s.add_transition("q*", "q*", SensorCondition::truth(), CapabilityCondition::truth());
  return s;
}

Strategy excl_strong_order(const CapabilityHistory& ord) {
  if (ord.empty()) throw EmptySetError("excluding the order class of the empty history would exclude every test");
  if (cord(ord) != ord) throw NotDeduplicatedError("order " + to_string(ord) + " has consecutive duplicates");
  const std::size_t k = ord.size();
  auto q = [](std::size_t i) { return "q" + std::to_string(i); };
  auto is = [](const CapabilitySet& y) { return CapabilityCondition::equal(kAny, SetExpr::set(y)); };
  auto isnt = [](const CapabilitySet& y) { return CapabilityCondition::not_equal(kAny, SetExpr::set(y)); };

  Strategy s("excl_strong_order");
  for (std::size_t i = 0; i <= k; ++i) s.add_state(q(i));
  s.set_initial(q(0));
  if (k >= 2) s.add_transition(q(0), q(1), SensorCondition::truth(), is(ord[0]));
  s.add_transition(q(0), q(k), SensorCondition::truth(), isnt(ord[0]));
  for (std::size_t i = 1; i < k; ++i) {
    s.add_transition(q(i), q(i), SensorCondition::truth(), is(ord[i - 1]));
    if (i + 1 < k) s.add_transition(q(i), q(i + 1), SensorCondition::truth(), is(ord[i]));
    s.add_transition(q(i), q(k), SensorCondition::truth(),
                     CapabilityCondition::conjunction(isnt(ord[i - 1]), isnt(ord[i])));
  }
  s.add_transition(q(k), q(k), SensorCondition::truth(), CapabilityCondition::truth());
  return s;
}

Strategy excl(const EquivalenceClassSpec& spec) {
  switch (spec.kind) {
    case ClassKind::CapabilitySet: return excl_capability_set(spec.y);
    case ClassKind::StrongSet: return excl_strong_set(cset(spec.anchor));
    case ClassKind::StrongOrder: return excl_strong_order(cord(spec.anchor));
  }
  throw Error("unknown class kind");
}

Strategy compose(const Strategy& a, const Strategy& b) {
  std::vector<std::string> taken = a.variables();
  for (const auto& t : a.transitions()) {
    for (const auto& v : t.phi.variables()) taken.push_back(v);
  }
  std::map<std::string, std::string> renamed;
  auto rename = [&](const std::string& v) -> std::string {
    auto it = renamed.find(v);
    if (it != renamed.end()) return it->second;
    std::string fresh = v;
    for (int n = 2; std::find(taken.begin(), taken.end(), fresh) != taken.end(); ++n) fresh = v + "_" + std::to_string(n);
    taken.push_back(fresh);
    renamed[v] = fresh;
    return fresh;
  };

  Strategy out(a.name() + "+" + b.name());
  const std::size_t nb = b.states().size();
  for (const auto& sa : a.states()) {
    for (const auto& sb : b.states()) out.add_state("(" + sa + "," + sb + ")");
  }
  out.set_initial(a.initial() * nb + b.initial());
  for (const auto& v : a.variables()) out.add_variable(v);
  for (const auto& v : b.variables()) out.add_variable(rename(v));
  std::vector<Capability> caps = a.capabilities();
  for (const auto& cap : b.capabilities()) {
    if (std::find(caps.begin(), caps.end(), cap) == caps.end()) caps.push_back(cap);
  }
  out.set_capabilities(std::move(caps));

  std::vector<CapabilityCondition> b_phi;
  for (const auto& t : b.transitions()) b_phi.push_back(t.phi.rename_variables(rename));
  for (const auto& ta : a.transitions()) {
    for (std::size_t j = 0; j < b.transitions().size(); ++j) {
      const auto& tb = b.transitions()[j];
      out.add_transition(ta.from * nb + tb.from, ta.to * nb + tb.to, conj(ta.gamma, tb.gamma), conj(ta.phi, b_phi[j]));
    }
  }
  return out;
}

bool obviously_unsatisfiable(const CapabilityCondition& phi) {
  using K = CapabilityCondition::Kind;
  std::vector<const CapabilityCondition*> atoms;
  std::function<void(const CapabilityCondition&)> flatten = [&](const CapabilityCondition& c) {
    if (c.kind() == K::And) {
      flatten(c.lhs());
      flatten(c.rhs());
    } else {
      atoms.push_back(&c);
    }
  };
  flatten(phi);

  auto placeholder = [](const SetExpr& e) { return e.kind == SetExpr::Kind::Placeholder; };
  auto literal = [](const SetExpr& e) { return e.kind == SetExpr::Kind::Literal; };
  std::optional<CapabilitySet> exact;
  std::optional<CapabilitySet> upper;
  CapabilitySet required;
  CapabilitySet excluded;
  std::vector<CapabilitySet> not_exact;
  std::vector<CapabilitySet> escapes;  // ¬(_ ⊆ C)
  for (const auto* a : atoms) {
    switch (a->kind()) {
      case K::True: break;
      case K::Equal: {
        const auto& l = a->left_expr();
        const auto& r = a->right_expr();
        if (literal(l) && literal(r)) {
          if (l.literal != r.literal) return true;
        } else if (placeholder(l) && literal(r)) {
          if (exact && *exact != r.literal) return true;
          exact = r.literal;
        } else if (literal(l) && placeholder(r)) {
          if (exact && *exact != l.literal) return true;
          exact = l.literal;
        }
        break;
      }
      case K::Subset: {
        const auto& l = a->left_expr();
        const auto& r = a->right_expr();
        if (literal(l) && literal(r) && !l.literal.subset_of(r.literal)) return true;
        if (literal(l) && placeholder(r)) required = required.united(l.literal);
        if (placeholder(l) && literal(r)) upper = upper ? upper->intersected(r.literal) : r.literal;
        break;
      }
      case K::Not: {
        const auto& inner = a->lhs();
        if (inner.kind() == K::True) return true;
        if (inner.kind() == K::Subset) {
          const auto& l = inner.left_expr();
          const auto& r = inner.right_expr();
          if (literal(l) && l.literal.size() == 1 && placeholder(r)) excluded = excluded.united(l.literal);
          if (literal(l) && l.literal.empty()) return true;  // ¬(∅ ⊆ E)
          if (placeholder(l) && literal(r)) escapes.push_back(r.literal);
        } else if (inner.kind() == K::Equal) {
          const auto& l = inner.left_expr();
          const auto& r = inner.right_expr();
          if (placeholder(l) && literal(r)) not_exact.push_back(r.literal);
          if (literal(l) && placeholder(r)) not_exact.push_back(l.literal);
        }
        break;
      }
      default: break;
    }
  }
  if (!required.intersected(excluded).empty()) return true;
  if (upper && !required.subset_of(*upper)) return true;
  for (const auto& c : escapes) {
    if (upper && upper->subset_of(c)) return true;
  }
  if (exact) {
    if (!required.subset_of(*exact)) return true;
    if (!exact->intersected(excluded).empty()) return true;
    if (upper && !exact->subset_of(*upper)) return true;
    for (const auto& c : escapes) {
      if (exact->subset_of(c)) return true;
    }
    for (const auto& ne : not_exact) {
      if (ne == *exact) return true;
    }
  }
  return false;
}

Strategy simplify(const Strategy& strategy) {
  const auto& ts = strategy.transitions();
  std::vector<bool> keep(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) keep[i] = !obviously_unsatisfiable(ts[i].phi);
  std::vector<bool> reached(strategy.states().size(), false);
  std::deque<std::size_t> queue{strategy.initial()};
  reached[strategy.initial()] = true;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t t : strategy.outgoing(s)) {
      if (keep[t] && !reached[ts[t].to]) {
        reached[ts[t].to] = true;
        queue.push_back(ts[t].to);
      }
    }
  }
  Strategy out(strategy.name());
  for (const auto& v : strategy.variables()) out.add_variable(v);
  out.set_capabilities(strategy.capabilities());
  for (std::size_t s = 0; s < reached.size(); ++s) {
    if (reached[s]) out.add_state(strategy.state_name(s));
  }
  out.set_initial(strategy.state_name(strategy.initial()));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (keep[i] && reached[ts[i].from] && reached[ts[i].to])
      out.add_transition(strategy.state_name(ts[i].from), strategy.state_name(ts[i].to), ts[i].gamma, ts[i].phi);
  }
  return out;
}

namespace {

std::vector<std::string> used_variables(const Strategy& s) {
  std::vector<std::string> vars;
  for (const auto& t : s.transitions()) {
    for (const auto& v : t.phi.variables()) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool run_nfa(const Strategy& s, const CapabilityHistory& history, const Assignment& alpha) {
  const auto& ts = s.transitions();
  std::vector<char> cur(s.states().size(), 0);
  std::vector<char> next(cur.size(), 0);
  cur[s.initial()] = 1;
  for (const auto& y : history) {
    std::fill(next.begin(), next.end(), 0);
    bool any = false;
    for (const auto& t : ts) {
      if (cur[t.from] && !next[t.to] && t.phi.evaluate(y, alpha)) {
        next[t.to] = 1;
        any = true;
      }
    }
    if (!any) return false;
    cur.swap(next);
  }
  return true;
}

void check_budget(std::size_t universe, std::size_t max_len, std::size_t budget) {
  std::size_t total = 1;
  std::size_t layer = 1;
  for (std::size_t l = 1; l <= max_len; ++l) {
    if (universe != 0 && layer > budget / universe) throw BudgetExceeded("enumeration exceeds budget");
    layer *= universe;
    total += layer;
    if (total > budget)
      throw BudgetExceeded("enumerating " + std::to_string(universe) + " sets to length " + std::to_string(max_len) +
                           " exceeds the budget of " + std::to_string(budget) + " histories");
  }
}

}  // namespace

bool language_contains(const Strategy& strategy, const CapabilityHistory& history) {
  auto vars = used_variables(strategy);
  if (vars.empty()) return run_nfa(strategy, history, {});
  std::vector<CapabilitySet> candidates{CapabilitySet{}};
  for (const auto& y : history) {
    if (std::find(candidates.begin(), candidates.end(), y) == candidates.end()) candidates.push_back(y);
  }
  std::vector<std::size_t> pick(vars.size(), 0);
  while (true) {
    Assignment alpha;
    for (std::size_t i = 0; i < vars.size(); ++i) alpha[vars[i]] = candidates[pick[i]];
    if (run_nfa(strategy, history, alpha)) return true;
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < candidates.size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) return false;
  }
}

std::vector<CapabilityHistory> all_histories(const std::vector<CapabilitySet>& universe, std::size_t max_len,
                                             std::size_t budget) {
  check_budget(universe.size(), max_len, budget);
  std::vector<CapabilityHistory> out{CapabilityHistory{}};
  std::size_t begin = 0;
  for (std::size_t l = 1; l <= max_len; ++l) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& y : universe) {
        CapabilityHistory h = out[i];
        h.push_back(y);
        out.push_back(std::move(h));
      }
    }
    begin = end;
  }
  return out;
}

std::set<CapabilityHistory> enumerate_language(const Strategy& strategy, const std::vector<CapabilitySet>& universe,
                                               std::size_t max_len, std::size_t budget) {
  check_budget(universe.size(), max_len, budget);
  std::set<CapabilityHistory> out;
  if (!used_variables(strategy).empty()) {
    for (auto& h : all_histories(universe, max_len, budget)) {
      if (language_contains(strategy, h)) out.insert(std::move(h));
    }
    return out;
  }
  // Without variables the NFA state set is a function of the prefix, so
  // rejected prefixes prune their extensions.
  const auto& ts = strategy.transitions();
  CapabilityHistory prefix;
  std::function<void(const std::vector<char>&)> dfs = [&](const std::vector<char>& cur) {
    out.insert(prefix);
    if (prefix.size() == max_len) return;
    std::vector<char> next(cur.size());
    for (const auto& y : universe) {
      std::fill(next.begin(), next.end(), 0);
      bool any = false;
      for (const auto& t : ts) {
        if (cur[t.from] && !next[t.to] && t.phi.evaluate(y, {})) {
          next[t.to] = 1;
          any = true;
        }
      }
      if (!any) continue;
      prefix.push_back(y);
      dfs(next);
      prefix.pop_back();
    }
  };
  std::vector<char> start(strategy.states().size(), 0);
  start[strategy.initial()] = 1;
  dfs(start);
  return out;
}

// ---------------------------------------------------------------------------

ExclusionMonitor::ExclusionMonitor(ClassKind kind, CapabilitySet set, CapabilityHistory ord)
    : kind_(kind), set_(std::move(set)), ord_(std::move(ord)) {
  if (set_.size() >= 64) throw SizeCapExceeded("exclusion monitors track at most 63 capabilities");
  full_ = (std::uint64_t{1} << set_.size()) - 1;
}

ExclusionMonitor ExclusionMonitor::capability_set(const CapabilitySet& y) {
  if (y.empty()) throw EmptySetError("excluding the class of Y = {} would exclude every test");
  return ExclusionMonitor(ClassKind::CapabilitySet, y, {});
}

ExclusionMonitor ExclusionMonitor::strong_set(const CapabilitySet& c) {
  if (c.empty()) throw EmptySetError("excluding the strong-set class of {} would exclude the empty test");
  return ExclusionMonitor(ClassKind::StrongSet, c, {});
}

ExclusionMonitor ExclusionMonitor::strong_order(const CapabilityHistory& ord) {
  if (ord.empty()) throw EmptySetError("excluding the order class of the empty history would exclude every test");
  if (cord(ord) != ord) throw NotDeduplicatedError("order " + to_string(ord) + " has consecutive duplicates");
  return ExclusionMonitor(ClassKind::StrongOrder, {}, ord);
}

ExclusionMonitor ExclusionMonitor::for_class(const EquivalenceClassSpec& spec) {
  switch (spec.kind) {
    case ClassKind::CapabilitySet: return capability_set(spec.y);
    case ClassKind::StrongSet: return strong_set(cset(spec.anchor));
    case ClassKind::StrongOrder: return strong_order(cord(spec.anchor));
  }
  throw Error("unknown class kind");
}

std::uint64_t ExclusionMonitor::mask_of(const CapabilitySet& y) const {
  std::uint64_t m = 0;
  for (const auto& cap : y) {
    auto it = std::lower_bound(set_.begin(), set_.end(), cap);
    if (it != set_.end() && *it == cap) m |= std::uint64_t{1} << (it - set_.begin());
  }
  return m;
}

std::optional<ExclusionMonitor::State> ExclusionMonitor::step(State s, const CapabilitySet& y) const {
  switch (kind_) {
    case ClassKind::CapabilitySet: {
      State m = s | mask_of(y);
      if (m == full_) return std::nullopt;
      return m;
    }
    case ClassKind::StrongSet: {
      if (s == kEscaped || !y.subset_of(set_)) return kEscaped;
      State m = s | mask_of(y);
      if (m == full_) return std::nullopt;
      return m;
    }
    case ClassKind::StrongOrder: {
      const std::size_t k = ord_.size();
      if (s == k) return s;
      if (s >= 1 && y == ord_[s - 1]) return s;
      if (y == ord_[s]) {
        if (s + 1 == k) return std::nullopt;
        return s + 1;
      }
      return k;
    }
  }
  return std::nullopt;
}

CapabilityCondition ExclusionMonitor::admission(State s) const {
  switch (kind_) {
    case ClassKind::CapabilitySet: {
      CapabilitySet used;
      for (std::size_t i = 0; i < set_.size(); ++i) {
        if (s >> i & 1) used.insert(set_[i]);
      }
      return CapabilityCondition::not_subset(SetExpr::set(set_.minus(used)), kAny);
    }
    case ClassKind::StrongSet: {
      if (s == kEscaped) return CapabilityCondition::truth();
      CapabilitySet used;
      for (std::size_t i = 0; i < set_.size(); ++i) {
        if (s >> i & 1) used.insert(set_[i]);
      }
      return CapabilityCondition::disjunction(CapabilityCondition::not_subset(kAny, SetExpr::set(set_)),
                                              CapabilityCondition::not_subset(SetExpr::set(set_.minus(used)), kAny));
    }
    case ClassKind::StrongOrder: {
      const std::size_t k = ord_.size();
      if (s + 1 == k) return CapabilityCondition::not_equal(kAny, SetExpr::set(ord_[k - 1]));
      return CapabilityCondition::truth();
    }
  }
  return CapabilityCondition::truth();
}

bool ExclusionMonitor::accepts(const CapabilityHistory& history) const {
  State s = initial();
  for (const auto& y : history) {
    auto next = step(s, y);
    if (!next) return false;
    s = *next;
  }
  return true;
}

Strategy ExclusionMonitor::strategy() const {
  switch (kind_) {
    case ClassKind::CapabilitySet: return excl_capability_set(set_);
    case ClassKind::StrongSet: return excl_strong_set(set_);
    case ClassKind::StrongOrder: return excl_strong_order(ord_);
  }
  throw Error("unknown class kind");
}

}  // namespace cpsfuzz
