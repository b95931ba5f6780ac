#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpsfuzz {

/// Component kind, determined by the identifier prefix.
enum class ComponentKind { Valve, Pump, LevelSensor, FlowSensor, PressureSensor };

/// MV -> valve, P -> pump, LIT -> level, FIT -> flow, DPIT -> differential pressure.
std::optional<ComponentKind> kind_of(std::string_view component_id);
bool is_sensor(ComponentKind kind);
bool is_actuator(ComponentKind kind);
std::string_view to_string(ComponentKind kind);

/// Finite ordered actuator domain, e.g. {open, close} or {on, off}.
struct ActuatorDomain {
  std::vector<std::string> values;

  std::optional<std::size_t> index_of(std::string_view value) const;
  bool operator==(const ActuatorDomain&) const = default;
};

/// Real interval of a sensor together with its safe operating band.
struct SensorDomain {
  double lo = 0.0;
  double hi = 0.0;
  double safe_lo = 0.0;
  double safe_hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool safe(double v) const { return v >= safe_lo && v <= safe_hi; }
  bool operator==(const SensorDomain&) const = default;
};

/// One (sensor, value) pair per sensor, in model order.
class Readings {
 public:
  Readings() = default;

  void set(std::string_view sensor, double value);
  std::optional<double> get(std::string_view sensor) const;
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const Readings&) const = default;

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

/// One (actuator, value) pair per actuator, in model order.
class Configurations {
 public:
  Configurations() = default;

  void set(std::string_view actuator, std::string value);
  std::optional<std::string> get(std::string_view actuator) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const Configurations&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace cpsfuzz
