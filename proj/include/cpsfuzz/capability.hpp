#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cpsfuzz {

/// A forced sensor reading or actuator state `[component, value]`.
///
/// Actuator values are domain symbols ("open", "close", "on", "off"); sensor
/// spoof values are canonical decimal text so that capabilities stay totally
/// ordered and hashable.
struct Capability {
  std::string component;
  std::string value;

  auto operator<=>(const Capability&) const = default;
  bool operator==(const Capability&) const = default;
};

std::string to_string(const Capability& cap);

/// Finite set of capabilities kept as a sorted, duplicate-free vector.
///
/// The one-capability-per-component rule is not enforced here because
/// cumulative sets (CSet) may legitimately contain both values of an
/// actuator; see has_one_per_component().
class CapabilitySet {
 public:
  using const_iterator = std::vector<Capability>::const_iterator;

  CapabilitySet() = default;
  CapabilitySet(std::initializer_list<Capability> caps);
  explicit CapabilitySet(std::vector<Capability> caps);

  bool empty() const { return caps_.empty(); }
  std::size_t size() const { return caps_.size(); }
  const_iterator begin() const { return caps_.begin(); }
  const_iterator end() const { return caps_.end(); }
  const Capability& operator[](std::size_t i) const { return caps_[i]; }

  bool contains(const Capability& cap) const;
  bool subset_of(const CapabilitySet& other) const;
  bool has_one_per_component() const;
  /// Value forced on `component`, or nullptr when the set leaves it alone.
  const Capability* find_component(std::string_view component) const;

  void insert(const Capability& cap);
  bool erase(const Capability& cap);

  CapabilitySet united(const CapabilitySet& other) const;
  CapabilitySet minus(const CapabilitySet& other) const;
  CapabilitySet intersected(const CapabilitySet& other) const;

  auto operator<=>(const CapabilitySet&) const = default;
  bool operator==(const CapabilitySet&) const = default;

 private:
  std::vector<Capability> caps_;
};

std::string to_string(const CapabilitySet& set);

/// Per-interval sequence of capability sets Y1..Yn.
using CapabilityHistory = std::vector<CapabilitySet>;

std::string to_string(const CapabilityHistory& history);

/// Union of every set in the history.
CapabilitySet cset(const CapabilityHistory& history);

/// Y_k..Y_l with 1-based inclusive bounds; throws IndexError.
CapabilityHistory slice(const CapabilityHistory& history, std::size_t k, std::size_t l);

/// Total number of capability usages, i.e. the sum of |Y_i|.
std::size_t event_count(const CapabilityHistory& history);

/// Canonical spelling for a numeric sensor value ("800", "0.25").
std::string canonical_number(double value);

}  // namespace cpsfuzz
