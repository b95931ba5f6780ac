#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpsfuzz/capability.hpp"
#include "cpsfuzz/components.hpp"

namespace cpsfuzz {

enum class Comparison { Less, LessEqual, Equal, GreaterEqual, Greater };

std::string_view to_string(Comparison op);

// ---------------------------------------------------------------------------
// Sensor conditions
// ---------------------------------------------------------------------------

/// Boolean formula over `sensor <op> constant` comparisons.
///
/// Immutable value with shared structure; copying is cheap.
class SensorCondition {
 public:
  enum class Kind { True, Compare, Not, And, Or };

  /// Defaults to `true`.
  SensorCondition();

  static SensorCondition truth();
  static SensorCondition compare(std::string sensor, Comparison op, double constant);
  static SensorCondition negation(SensorCondition operand);
  static SensorCondition conjunction(SensorCondition lhs, SensorCondition rhs);
  static SensorCondition disjunction(SensorCondition lhs, SensorCondition rhs);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  const std::string& sensor() const;
  Comparison op() const;
  double constant() const;
  const SensorCondition& lhs() const;
  const SensorCondition& rhs() const;

  /// Throws UnknownSensorError when a referenced sensor is missing.
  bool evaluate(const Readings& readings) const;

  /// Sensors referenced anywhere in the formula, sorted and unique.
  std::vector<std::string> sensors() const;

  bool operator==(const SensorCondition& other) const;

 private:
  struct Node;
  explicit SensorCondition(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

std::string to_string(const SensorCondition& cond);

bool eval_sensor_condition(const SensorCondition& cond, const Readings& readings);

/// Index-resolved form for hot loops (controller guards).
class CompiledSensorCondition {
 public:
  CompiledSensorCondition() = default;
  /// `index_of` maps a sensor name to its slot; throws UnknownSensorError on miss.
  CompiledSensorCondition(const SensorCondition& cond,
                          const std::function<std::optional<std::size_t>(std::string_view)>& index_of);

  bool evaluate(std::span<const double> values) const;

 private:
  struct Op {
    SensorCondition::Kind kind;
    std::size_t slot = 0;
    Comparison cmp = Comparison::Less;
    double constant = 0.0;
    int lhs = -1;
    int rhs = -1;
  };
  int build(const SensorCondition& cond,
            const std::function<std::optional<std::size_t>(std::string_view)>& index_of);
  bool eval(int at, std::span<const double> values) const;

  std::vector<Op> ops_;
  int root_ = -1;
};

// ---------------------------------------------------------------------------
// Capability conditions
// ---------------------------------------------------------------------------

/// Variable bindings fixed for a whole test.
using Assignment = std::map<std::string, CapabilitySet>;

/// Set-valued operand: the placeholder `_`, a variable, or a literal set.
struct SetExpr {
  enum class Kind { Placeholder, Variable, Literal };

  Kind kind = Kind::Placeholder;
  std::string variable;
  CapabilitySet literal;

  static SetExpr placeholder() { return {}; }
  static SetExpr var(std::string name) { return {Kind::Variable, std::move(name), {}}; }
  static SetExpr set(CapabilitySet caps) { return {Kind::Literal, {}, std::move(caps)}; }

  bool operator==(const SetExpr&) const = default;
};

std::string to_string(const SetExpr& expr);

/// Core grammar: true | E1 ⊆ E2 | E1 == E2 | ¬φ | φ ∧ φ | φ ∨ φ.
///
/// Shorthands (`y in E`, `y notin E`, `!=`, `notsubset`, bare set) are
/// normalized into these nodes by the constructors below and the parser.
class CapabilityCondition {
 public:
  enum class Kind { True, Subset, Equal, Not, And, Or };

  /// Defaults to `true`.
  CapabilityCondition();

  static CapabilityCondition truth();
  static CapabilityCondition subset(SetExpr lhs, SetExpr rhs);
  static CapabilityCondition equal(SetExpr lhs, SetExpr rhs);
  static CapabilityCondition negation(CapabilityCondition operand);
  static CapabilityCondition conjunction(CapabilityCondition lhs, CapabilityCondition rhs);
  static CapabilityCondition disjunction(CapabilityCondition lhs, CapabilityCondition rhs);

  // Shorthand builders.
  static CapabilityCondition member(const Capability& cap, SetExpr set);      // {y} ⊆ E
  static CapabilityCondition non_member(const Capability& cap, SetExpr set);  // ¬({y} ⊆ E)
  static CapabilityCondition exactly(CapabilitySet caps);                     // _ == Y
  static CapabilityCondition not_equal(SetExpr lhs, SetExpr rhs);             // ¬(E1 == E2)
  static CapabilityCondition not_subset(SetExpr lhs, SetExpr rhs);            // ¬(E1 ⊆ E2)

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  const SetExpr& left_expr() const;
  const SetExpr& right_expr() const;
  const CapabilityCondition& lhs() const;
  const CapabilityCondition& rhs() const;

  /// Valuation with `_` := y and variables from alpha; throws UnboundVariableError.
  bool evaluate(const CapabilitySet& y, const Assignment& alpha) const;

  /// Variables referenced, sorted and unique.
  std::vector<std::string> variables() const;
  /// Every literal capability mentioned, merged.
  CapabilitySet mentioned_capabilities() const;
  /// All literal sets occurring as operands.
  std::vector<CapabilitySet> literal_sets() const;
  /// Returns a copy with variables renamed through `rename`.
  CapabilityCondition rename_variables(const std::function<std::string(const std::string&)>& rename) const;

  bool operator==(const CapabilityCondition& other) const;

 private:
  struct Node;
  explicit CapabilityCondition(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

std::string to_string(const CapabilityCondition& cond);

bool eval_capability_condition(const CapabilityCondition& cond, const CapabilitySet& y, const Assignment& alpha);

// ---------------------------------------------------------------------------
// Surface syntax
// ---------------------------------------------------------------------------

/// Position of the first character of `text` in its enclosing document,
/// used to report parse errors at precise locations.
struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

SensorCondition parse_sensor_condition(std::string_view text, SourcePos origin = {});
CapabilityCondition parse_capability_condition(std::string_view text, SourcePos origin = {});
Capability parse_capability(std::string_view text, SourcePos origin = {});
CapabilitySet parse_capability_set(std::string_view text, SourcePos origin = {});
/// Whitespace-separated sets, e.g. `{} {[p1,on]} {[p1,on],[p2,on]}`; empty text, `eps` or `ε` is the empty history.
CapabilityHistory parse_history(std::string_view text, SourcePos origin = {});
/// Whitespace-separated capabilities, e.g. `[MV101,open] [P101,off]`.
std::vector<Capability> parse_capability_list(std::string_view text, SourcePos origin = {});

}  // namespace cpsfuzz
