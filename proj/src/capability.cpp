#include "cpsfuzz/capability.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <sstream>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

std::string to_string(const Capability& cap) { return "[" + cap.component + "," + cap.value + "]"; }

CapabilitySet::CapabilitySet(std::initializer_list<Capability> caps) : caps_(caps) {
  std::sort(caps_.begin(), caps_.end());
  caps_.erase(std::unique(caps_.begin(), caps_.end()), caps_.end());
}

CapabilitySet::CapabilitySet(std::vector<Capability> caps) : caps_(std::move(caps)) {
  std::sort(caps_.begin(), caps_.end());
  caps_.erase(std::unique(caps_.begin(), caps_.end()), caps_.end());
}

bool CapabilitySet::contains(const Capability& cap) const {
  return std::binary_search(caps_.begin(), caps_.end(), cap);
}

bool CapabilitySet::subset_of(const CapabilitySet& other) const {
  return std::includes(other.caps_.begin(), other.caps_.end(), caps_.begin(), caps_.end());
}

bool CapabilitySet::has_one_per_component() const {
  for (std::size_t i = 1; i < caps_.size(); ++i) {
    if (caps_[i].component == caps_[i - 1].component) return false;
  }
  return true;
}

const Capability* CapabilitySet::find_component(std::string_view component) const {
  auto it = std::lower_bound(caps_.begin(), caps_.end(), component,
                             [](const Capability& c, std::string_view name) { return c.component < name; });
  if (it != caps_.end() && it->component == component) return &*it;
  return nullptr;
}

void CapabilitySet::insert(const Capability& cap) {
  auto it = std::lower_bound(caps_.begin(), caps_.end(), cap);
  if (it == caps_.end() || *it != cap) caps_.insert(it, cap);
}

bool CapabilitySet::erase(const Capability& cap) {
  auto it = std::lower_bound(caps_.begin(), caps_.end(), cap);
  if (it == caps_.end() || *it != cap) return false;
  caps_.erase(it);
  return true;
}

CapabilitySet CapabilitySet::united(const CapabilitySet& other) const {
  CapabilitySet out;
  out.caps_.reserve(caps_.size() + other.caps_.size());
  std::set_union(caps_.begin(), caps_.end(), other.caps_.begin(), other.caps_.end(),
                 std::back_inserter(out.caps_));
  return out;
}

CapabilitySet CapabilitySet::minus(const CapabilitySet& other) const {
  CapabilitySet out;
  std::set_difference(caps_.begin(), caps_.end(), other.caps_.begin(), other.caps_.end(),
                      std::back_inserter(out.caps_));
  return out;
}

CapabilitySet CapabilitySet::intersected(const CapabilitySet& other) const {
  CapabilitySet out;
  std::set_intersection(caps_.begin(), caps_.end(), other.caps_.begin(), other.caps_.end(),
                        std::back_inserter(out.caps_));
  return out;
}

std::string to_string(const CapabilitySet& set) {
  std::string out = "{";
  bool first = true;
  for (const auto& cap : set) {
    if (!first) out += ",";
    out += to_string(cap);
    first = false;
  }
  return out + "}";
}

std::string to_string(const CapabilityHistory& history) {
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i) out += " ";
    out += to_string(history[i]);
  }
  return out;
}

CapabilitySet cset(const CapabilityHistory& history) {
  CapabilitySet out;
  for (const auto& y : history) out = out.united(y);
  return out;
}

CapabilityHistory slice(const CapabilityHistory& history, std::size_t k, std::size_t l) {
  if (k < 1 || k > l || l > history.size()) {
    std::ostringstream msg;
    msg << "slice [" << k << ".." << l << "] out of range for history of length " << history.size();
    throw IndexError(msg.str());
  }
  return CapabilityHistory(history.begin() + static_cast<std::ptrdiff_t>(k - 1),
                           history.begin() + static_cast<std::ptrdiff_t>(l));
}

std::size_t event_count(const CapabilityHistory& history) {
  std::size_t n = 0;
  for (const auto& y : history) n += y.size();
  return n;
}

std::string canonical_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, end);
}

}  // namespace cpsfuzz
