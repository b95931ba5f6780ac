#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cpsfuzz/capability.hpp"
#include "cpsfuzz/strategy.hpp"

namespace cpsfuzz {

enum class ClassKind { CapabilitySet, StrongSet, StrongOrder };

/// "causal-set" (alias "capability-set"), "strong-set", "strong-order".
std::string_view to_string(ClassKind kind);
std::optional<ClassKind> parse_class_kind(std::string_view text);

struct EquivalenceClassSpec {
  ClassKind kind = ClassKind::CapabilitySet;
  CapabilitySet y;             // capability_set only
  CapabilityHistory anchor;    // π_t of the reference test
};

/// Consecutive duplicates collapsed.
CapabilityHistory cord(const CapabilityHistory& history);

/// capability_set: π1 = π2, or Y ⊆ CSet of both;
/// strong set: equal CSets; strong order: one COrd is a prefix of the other.
bool equivalent(const EquivalenceClassSpec& spec, const CapabilityHistory& a, const CapabilityHistory& b);

/// Hub q0 looping while no y_i is used, branches q_i looping under y_i ∉ _.
/// Throws EmptySetError for Y = ∅.
Strategy excl_capability_set(const CapabilitySet& y);

inline constexpr std::size_t kStrongSetCap = 12;

/// Lattice of proper subsets of C plus escape sink q*.
/// Throws SizeCapExceeded when |C| > cap.
Strategy excl_strong_set(const CapabilitySet& c, std::size_t cap = kStrongSetCap);

/// Progress states q0..q(k-1) tracking ord, escape sink qk.
/// Throws NotDeduplicatedError unless ord == cord(ord), EmptySetError when k = 0.
Strategy excl_strong_order(const CapabilityHistory& ord);

/// Excl for the class of `anchor` (Y taken from spec.y for capability_set).
Strategy excl(const EquivalenceClassSpec& spec);

/// Product T1 ∥ T2 with conjoined labels. States are named "(s1,s2)";
/// clashing variables of T2 are renamed with a numeric suffix.
Strategy compose(const Strategy& a, const Strategy& b);

/// Drops transitions whose φ is syntactically unsatisfiable and states
/// unreachable from the initial state.
Strategy simplify(const Strategy& strategy);

/// Conservative syntactic unsatisfiability test used by simplify().
bool obviously_unsatisfiable(const CapabilityCondition& phi);

/// Membership in L(T), ignoring sensor conditions. Variables are searched
/// over the distinct sets of π plus ∅.
bool language_contains(const Strategy& strategy, const CapabilityHistory& history);

inline constexpr std::size_t kEnumerationBudget = 1'000'000;

/// All histories of length ≤ max_len over `universe` in L(T).
/// Throws BudgetExceeded when Σ |universe|^l exceeds the budget.
std::set<CapabilityHistory> enumerate_language(const Strategy& strategy, const std::vector<CapabilitySet>& universe,
                                               std::size_t max_len, std::size_t budget = kEnumerationBudget);

/// Every history of length ≤ max_len over `universe` (same budget rule).
std::vector<CapabilityHistory> all_histories(const std::vector<CapabilitySet>& universe, std::size_t max_len,
                                             std::size_t budget = kEnumerationBudget);

/// Deterministic recogniser equivalent to one Excl construction, used by
/// campaigns instead of materialising ever-growing products.
class ExclusionMonitor {
 public:
  using State = std::uint64_t;

  static ExclusionMonitor capability_set(const CapabilitySet& y);
  static ExclusionMonitor strong_set(const CapabilitySet& c);
  static ExclusionMonitor strong_order(const CapabilityHistory& ord);
  static ExclusionMonitor for_class(const EquivalenceClassSpec& spec);

  ClassKind kind() const { return kind_; }
  State initial() const { return 0; }
  /// nullopt when reading `y` in state `s` leaves the language.
  std::optional<State> step(State s, const CapabilitySet& y) const;
  /// Condition on `_` that holds exactly for the sets step() accepts in `s`.
  CapabilityCondition admission(State s) const;
  bool accepts(const CapabilityHistory& history) const;

  /// The equivalent explicit strategy.
  Strategy strategy() const;

 private:
  ExclusionMonitor(ClassKind kind, CapabilitySet set, CapabilityHistory ord);
  std::uint64_t mask_of(const CapabilitySet& y) const;

  ClassKind kind_;
  CapabilitySet set_;        // Y or C
  CapabilityHistory ord_;    // strong order only
  std::uint64_t full_ = 0;
  static constexpr State kEscaped = ~State{0};
};

}  // namespace cpsfuzz
