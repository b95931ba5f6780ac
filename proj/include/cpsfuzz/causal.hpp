#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cpsfuzz/capability.hpp"
#include "cpsfuzz/plant.hpp"
#include "cpsfuzz/strategy.hpp"

namespace cpsfuzz {

struct ReplaySpec {
  CapabilityHistory history;
  ControlState q0;
  PhysicalState x0;
  SensorCondition goal;
  double dt = 0.0;
};

/// Extra ∅ intervals run after the history before a replay is declared failed.
inline constexpr std::size_t kGraceIntervals = 2;

/// Chain s0 -> ... -> sn labelled `_ == Y_i`, plus an ∅ self-loop on sn.
Strategy replay_strategy(const CapabilityHistory& history);

/// Y_i minus {y} for k <= i <= l (1-based); throws IndexError.
CapabilityHistory remove_capability(const CapabilityHistory& history, const Capability& y, std::size_t k,
                                    std::size_t l);

struct Slice {
  std::size_t k = 0;
  std::size_t l = 0;
  CapabilitySet set;
  bool operator==(const Slice&) const = default;
};

/// Run-length decomposition into maximal runs of equal sets.
std::vector<Slice> maximal_slices(const CapabilityHistory& history);

/// Replays `history` from the spec's origin, stopping at the first interval
/// after which the goal holds (up to kGraceIntervals trailing ∅ intervals).
/// The returned trace is truncated there; `successful` tells whether it got there.
TestTrace replay(const Plant& plant, const ReplaySpec& spec, const CapabilityHistory& history);

struct CausalVerdict {
  bool causal = false;
  std::optional<TestTrace> counterexample;  // set when not causal
};

/// Is y causal in π from k to l? Replays π with y removed over [k, l].
CausalVerdict is_causal(const Plant& plant, const ReplaySpec& spec, const Capability& y, std::size_t k, std::size_t l);

struct CausalRecord {
  enum class Verdict { Causal, Pruned };

  Capability capability;
  std::size_t k = 0;
  std::size_t l = 0;
  Verdict verdict = Verdict::Causal;
  std::optional<TestTrace> counterexample;
};

struct PruneResult {
  TestTrace minimized;
  std::vector<CausalRecord> ledger;
  std::size_t probes = 0;  // is_causal invocations
};

/// Over-approximates the causal capabilities of a successful test by
/// removing, slice by slice, every capability whose removal still lets the
/// replay succeed. Throws NotReproducibleError if the original replay fails.
PruneResult prune(const Plant& plant, const ReplaySpec& spec);

}  // namespace cpsfuzz
