#include "cpsfuzz/components.hpp"

#include <algorithm>
#include <cctype>

namespace cpsfuzz {

namespace {

bool has_prefix_then_digit(std::string_view id, std::string_view prefix) {
  return id.size() > prefix.size() && id.substr(0, prefix.size()) == prefix &&
         std::isdigit(static_cast<unsigned char>(id[prefix.size()]));
}

}  // namespace

std::optional<ComponentKind> kind_of(std::string_view id) {
  if (has_prefix_then_digit(id, "DPIT")) return ComponentKind::PressureSensor;
  if (has_prefix_then_digit(id, "LIT")) return ComponentKind::LevelSensor;
  if (has_prefix_then_digit(id, "FIT")) return ComponentKind::FlowSensor;
  if (has_prefix_then_digit(id, "MV")) return ComponentKind::Valve;
  if (has_prefix_then_digit(id, "P")) return ComponentKind::Pump;
  return std::nullopt;
}

bool is_sensor(ComponentKind kind) {
  return kind == ComponentKind::LevelSensor || kind == ComponentKind::FlowSensor ||
         kind == ComponentKind::PressureSensor;
}

bool is_actuator(ComponentKind kind) { return !is_sensor(kind); }

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Valve: return "valve";
    case ComponentKind::Pump: return "pump";
    case ComponentKind::LevelSensor: return "level sensor";
    case ComponentKind::FlowSensor: return "flow sensor";
    case ComponentKind::PressureSensor: return "pressure sensor";
  }
  return "?";
}

std::optional<std::size_t> ActuatorDomain::index_of(std::string_view value) const {
  auto it = std::find(values.begin(), values.end(), value);
  if (it == values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

void Readings::set(std::string_view sensor, double value) {
  for (auto& [name, v] : entries_) {
    if (name == sensor) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(std::string(sensor), value);
}

std::optional<double> Readings::get(std::string_view sensor) const {
  for (const auto& [name, v] : entries_) {
    if (name == sensor) return v;
  }
  return std::nullopt;
}

void Configurations::set(std::string_view actuator, std::string value) {
  for (auto& [name, v] : entries_) {
    if (name == actuator) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::string(actuator), std::move(value));
}

std::optional<std::string> Configurations::get(std::string_view actuator) const {
  for (const auto& [name, v] : entries_) {
    if (name == actuator) return v;
  }
  return std::nullopt;
}

}  // namespace cpsfuzz
