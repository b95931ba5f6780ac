#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cpsfuzz/causal.hpp"
#include "cpsfuzz/equivalence.hpp"
#include "cpsfuzz/plant.hpp"
#include "cpsfuzz/strategy.hpp"

namespace cpsfuzz {

enum class Direction { Maximize, Minimize };

struct ObjectiveSpec {
  std::string sensor;
  Direction direction = Direction::Maximize;
  double threshold = 0.0;  // the unsafe bound: safe_hi when maximising, safe_lo when minimising
  double safe_lo = 0.0;
  double safe_hi = 1.0;
};

struct Goal {
  std::string name;  // e.g. "LIT101-High"
  SensorCondition condition;
  ObjectiveSpec objective;
  double dt = 15.0;
};

inline constexpr double kFastInterval = 15.0;    // flow and pressure goals
inline constexpr double kLevelInterval = 600.0;  // tank level goals

/// "<SENSOR>-High" (reading above safe_hi) or "<SENSOR>-Low" (below safe_lo).
/// Throws UnknownSensorError / Error for malformed names.
Goal make_goal(const Plant& plant, std::string_view name, std::optional<double> dt = std::nullopt);
/// Every goal whose unsafe region lies inside the sensor's domain.
std::vector<Goal> all_goals(const Plant& plant);

double objective_value(const ObjectiveSpec& spec, double reading);
/// Throws UnknownSensorError when the sensor is missing.
double objective_value(const ObjectiveSpec& spec, const Readings& readings);

inline constexpr std::size_t kSampleAttempts = 1000;

/// Uniform over one-per-component subsets of `universe` satisfying φ under α
/// (unbound variables bind to the candidate). Falls back to a constructive
/// pass for conjunctions of literal constraints; throws UnsatisfiableInBudget.
CapabilitySet sample_capability_set(const CapabilityCondition& phi, const Assignment& alpha,
                                    const std::vector<Capability>& universe, std::mt19937_64& rng);

/// Actuator capabilities of the plant: every (actuator, value) pair.
std::vector<Capability> actuator_universe(const Plant& plant);

struct WalkStep {
  std::size_t transition = 0;
  CapabilitySet y;
};

struct Walk {
  std::vector<WalkStep> steps;
  double score = 0.0;
};

inline constexpr double kRouletteEpsilon = 1e-3;

/// Fitness-proportionate choice over score - min(scores) + ε.
std::size_t roulette_select(const std::vector<double>& scores, std::mt19937_64& rng);

struct CampaignConfig {
  ClassKind kind = ClassKind::CapabilitySet;
  bool prune_strong = false;  // also minimise tests of strong-set/strong-order campaigns
  std::size_t walks = 200;
  std::size_t walk_len = 3;
  double budget_secs = 0.0;       // wall clock; 0 = unlimited
  std::size_t max_iterations = 0; // 0 = unlimited
  std::uint64_t seed = 1;
  std::size_t threads = 1;        // walk scoring
};

struct SuiteEntry {
  std::size_t iteration = 0;
  ControlState q0;
  PhysicalState x0;
  CapabilityHistory executed;  // as fired by the fuzzer
  CapabilityHistory history;   // minimised when pruning, else executed
  CapabilitySet causal_set;    // cset(history)
  std::vector<CausalRecord> ledger;
  std::size_t probes = 0;
  std::size_t success_step = 0;  // first step index whose state satisfies the goal
  Readings final_readings;
};

struct CampaignStats {
  std::size_t iterations = 0;
  std::size_t successes = 0;
  std::size_t dropped_equivalent = 0;
  std::size_t errors = 0;
  double wall_secs = 0.0;
  std::vector<std::string> log;
};

struct CampaignResult {
  Goal goal;
  CampaignConfig config;
  std::vector<SuiteEntry> tests;
  CampaignStats stats;
  bool pairwise_distinct = true;
};

/// Class of entry `e` under `kind` (Y = causal set for capability_set).
EquivalenceClassSpec class_of(ClassKind kind, const SuiteEntry& e);

/// For i < j: not equivalent(class_of(t_i), π_i, π_j). Returns violating pairs.
std::vector<std::pair<std::size_t, std::size_t>> equivalent_pairs(ClassKind kind, const std::vector<SuiteEntry>& tests);

/// Guided fuzzing loop over base strategy ∥ Excl(...) ∥ Excl(...) ...
/// The exclusions are kept as deterministic monitors and conjoined with the
/// base transition labels on the fly.
class Campaign {
 public:
  Campaign(const Plant& plant, Strategy base, Goal goal, CampaignConfig config);

  const Goal& goal() const { return goal_; }
  const CampaignConfig& config() const { return config_; }
  const std::vector<Capability>& universe() const { return universe_; }
  const std::vector<ExclusionMonitor>& exclusions() const { return monitors_; }
  void exclude(const EquivalenceClassSpec& spec);

  /// Random walks from the initial strategy state, scored by
  /// simulating from (q, x), one chosen by roulette. Pure w.r.t. (q, x).
  Walk plan_walk(const ControlState& q, const PhysicalState& x, std::mt19937_64& rng) const;
  /// All candidate walks of one planning round, scored.
  std::vector<Walk> candidate_walks(const ControlState& q, const PhysicalState& x, std::mt19937_64& rng) const;
  double predict(const Walk& walk, const ControlState& q, const PhysicalState& x) const;

  /// Fires the walk against the plant; stops at the first refusal.
  TestTrace execute_plan(const Walk& walk, const ControlState& q, const PhysicalState& x) const;

  CampaignResult run();

  /// base ∥ Excl_1 ∥ ... materialised and simplified; throws SizeCapExceeded
  /// beyond `state_cap` states.
  Strategy current_strategy(std::size_t state_cap = 10000) const;

 private:
  std::optional<Walk> random_walk(std::mt19937_64& rng) const;

  const Plant& plant_;
  Strategy base_;
  Goal goal_;
  CampaignConfig config_;
  std::vector<Capability> universe_;
  std::vector<ExclusionMonitor> monitors_;
};

/// Seed for a goal's campaign: seed XOR FNV-1a(goal name).
std::uint64_t goal_seed(std::uint64_t seed, std::string_view goal_name);
std::uint64_t fnv1a(std::string_view text);

}  // namespace cpsfuzz
