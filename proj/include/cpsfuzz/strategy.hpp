#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpsfuzz/capability.hpp"
#include "cpsfuzz/condition.hpp"
#include "cpsfuzz/plant.hpp"

namespace cpsfuzz {

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  SensorCondition gamma;
  CapabilityCondition phi;

  bool operator==(const Transition&) const = default;
};

/// Test strategy: a labelled transition system over named states.
///
/// `capabilities` optionally declares the universe sampled by the fuzzer
/// (sensor spoof values included); empty means "derive from the plant".
class Strategy {
 public:
  Strategy() = default;
  explicit Strategy(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t add_state(const std::string& state);  // idempotent
  std::optional<std::size_t> state_index(std::string_view state) const;
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(std::size_t i) const { return states_.at(i); }

  std::size_t initial() const { return initial_; }
  void set_initial(std::size_t i) { initial_ = i; }
  void set_initial(const std::string& state) { initial_ = add_state(state); }

  const std::vector<std::string>& variables() const { return variables_; }
  void add_variable(const std::string& var);

  const std::vector<Capability>& capabilities() const { return capabilities_; }
  void set_capabilities(std::vector<Capability> caps) { capabilities_ = std::move(caps); }

  const std::vector<Transition>& transitions() const { return transitions_; }
  std::size_t add_transition(std::size_t from, std::size_t to, SensorCondition gamma, CapabilityCondition phi);
  std::size_t add_transition(const std::string& from, const std::string& to, SensorCondition gamma,
                             CapabilityCondition phi);
  /// Indices of transitions leaving `state`, in insertion order.
  const std::vector<std::size_t>& outgoing(std::size_t state) const;
  /// The transition from `from` to `to`, if any (the first one when duplicated).
  std::optional<std::size_t> find_transition(std::size_t from, std::size_t to) const;

  bool operator==(const Strategy& other) const;

 private:
  std::string name_ = "strategy";
  std::vector<std::string> states_;
  std::size_t initial_ = 0;
  std::vector<std::string> variables_;
  std::vector<Capability> capabilities_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

/// One state, one self-loop: `_ == {}` under `true`.
Strategy null_strategy();
/// One state, one self-loop with both labels `true`.
Strategy universal_strategy(std::vector<Capability> universe = {});

/// Violations of the strategy invariants, optionally against a plant.
/// Each message starts with a short tag: "duplicate edge", "liveness",
/// "unknown sensor", "sensor constant", "capability", "variable", "structure".
std::vector<std::string> validate_strategy(const Strategy& strategy, const Plant* plant = nullptr);

/// Is φ satisfiable by some candidate set (∅, its literal sets, their
/// union, declared capabilities), binding unbound variables to the candidate?
bool capability_condition_satisfiable(const CapabilityCondition& phi, const Assignment& alpha,
                                      const std::vector<Capability>& extra = {});

// ---------------------------------------------------------------------------
// Test derivation

struct TestStep {
  ControlState q;
  PhysicalState x;
  std::size_t r = 0;

  bool operator==(const TestStep&) const = default;
};

struct TestTrace {
  std::vector<TestStep> steps;  // |steps| = |history| + 1
  CapabilityHistory history;
  Assignment assignment;
  SensorCondition goal;
  double dt = 0.0;
  bool successful = false;
};

/// Binds every unbound variable of φ to `y`, then evaluates.
/// On success the new bindings are written back to `alpha`.
bool admit(const CapabilityCondition& phi, const CapabilitySet& y, Assignment& alpha);

/// Fires `transition` with capability set `y` for one interval of `dt`.
/// Returns the successor, or nullopt when γ (on the true readings of x) or φ refuses.
std::optional<TestStep> fire_step(const Plant& plant, const Strategy& strategy, const TestStep& current,
                                  std::size_t transition, const CapabilitySet& y, Assignment& alpha, double dt);

/// Re-checks a trace step by step: a transition joins consecutive strategy
/// states, its γ holds on the previous physical state, its φ holds for Y_i
/// under the trace's α, and re-simulation reproduces every state.
std::vector<std::string> verify_derivation(const Plant& plant, const Strategy& strategy, const TestTrace& trace);

}  // namespace cpsfuzz
