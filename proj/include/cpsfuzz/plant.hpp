#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpsfuzz/capability.hpp"
#include "cpsfuzz/components.hpp"
#include "cpsfuzz/condition.hpp"

namespace cpsfuzz {

inline constexpr std::string_view kSource = "source";
inline constexpr std::string_view kDrain = "drain";

struct TankSpec {
  std::string id;
  double area = 1.0;       // m^2
  double max_level = 0.0;  // mm, physical capacity
  std::string level_sensor;
  double nominal_lo = 0.0;  // range for random starting levels
  double nominal_hi = 0.0;
  double initial = 0.0;  // default starting level

  bool operator==(const TankSpec&) const = default;
};

struct PipeSpec {
  std::string id;
  std::string from;  // tank id or "source"
  std::string to;    // tank id or "drain"
  std::optional<std::string> valve;
  std::vector<std::string> pumps;  // parallel: any pump on enables flow
  double nominal_flow = 0.0;       // m^3/h
  std::optional<std::string> flow_sensor;

  bool operator==(const PipeSpec&) const = default;
};

struct SensorSpec {
  std::string id;
  SensorDomain domain;
  std::optional<std::string> pipe;  // DPIT: upstream pipe
  double gain = 0.0;                // DPIT: bar per m^3/h

  bool operator==(const SensorSpec&) const = default;
};

struct ActuatorSpec {
  std::string id;
  ActuatorDomain domain;
  std::string initial;

  bool operator==(const ActuatorSpec&) const = default;
};

struct ControlRule {
  std::string name;
  SensorCondition guard;
  std::vector<std::pair<std::string, std::string>> commands;
  int priority = 0;

  bool operator==(const ControlRule&) const = default;
};

struct PlantModel {
  std::string name;
  double tick = 1.0;  // seconds
  std::vector<TankSpec> tanks;
  std::vector<PipeSpec> pipes;
  std::vector<SensorSpec> sensors;
  std::vector<ActuatorSpec> actuators;
  std::vector<ControlRule> controller;

  bool operator==(const PlantModel&) const = default;
};

/// Structural problems of a model; empty when the model is usable.
std::vector<std::string> validate_model(const PlantModel& model);

/// Commanded actuator values, one domain index per actuator (model order).
struct ControlState {
  std::vector<std::size_t> commanded;
  bool operator==(const ControlState&) const = default;
};

struct PhysicalState {
  std::vector<double> levels;  // mm, per tank
  std::vector<double> flows;   // m^3/h, per pipe, as of the last sub-step
  double clock = 0.0;          // seconds since episode start
  bool operator==(const PhysicalState&) const = default;
};

struct ClampEvent {
  double clock = 0.0;
  std::string tank;
  double unclamped = 0.0;
};

/// Mass-balance bookkeeping collected by physics sub-steps.
struct PhysicsAudit {
  double max_residual = 0.0;  // m^3, over sub-steps without clamping
  std::size_t substeps = 0;
  std::vector<ClampEvent> clamps;
};

/// Capability set resolved against a plant.
struct Injection {
  std::vector<std::pair<std::size_t, double>> sensors;         // sensor slot, spoofed value
  std::vector<std::pair<std::size_t, std::size_t>> actuators;  // actuator slot, value index
  bool empty() const { return sensors.empty() && actuators.empty(); }
};

/// One record per control interval.
struct TrajectoryRecord {
  double clock = 0.0;
  Readings readings;  // true readings at the start of the tick
  Configurations configurations;
  CapabilitySet injected;
};

/// Compiled, validated plant: all hot paths work on indices.
class Plant {
 public:
  /// Throws ModelValidationError listing every violation.
  explicit Plant(PlantModel model);

  const PlantModel& model() const { return model_; }
  double tick() const { return model_.tick; }

  std::optional<std::size_t> sensor_index(std::string_view id) const;
  std::optional<std::size_t> actuator_index(std::string_view id) const;
  std::optional<std::size_t> tank_index(std::string_view id) const;
  std::optional<std::size_t> pipe_index(std::string_view id) const;
  const SensorDomain& sensor_domain(std::size_t i) const { return model_.sensors[i].domain; }

  ControlState initial_control() const;
  PhysicalState initial_state() const;
  /// Levels drawn uniformly from each tank's nominal range.
  PhysicalState random_nominal_state(std::mt19937_64& rng) const;
  /// Physical state with the given levels, flows settled for the initial commands.
  PhysicalState state_with_levels(std::vector<double> levels) const;

  Readings observe(const PhysicalState& x) const;
  void observe_into(const PhysicalState& x, std::vector<double>& out) const;

  std::pair<ControlState, Configurations> control_step(const ControlState& q, const Readings& s) const;
  Configurations configurations(const ControlState& q) const;

  PhysicalState physics_step(const PhysicalState& x, const Configurations& a, double dt,
                             PhysicsAudit* audit = nullptr) const;

  /// Throws CapabilityDomainError for unknown components or out-of-domain values.
  Injection resolve(const CapabilitySet& caps) const;
  void check_capability(const Capability& cap) const;

  /// One control interval of `dt` seconds under capability set `caps`,
  /// sub-stepped at the tick: observe, spoof, control, override, physics.
  void advance(ControlState& q, PhysicalState& x, const Injection& inj, double dt, PhysicsAudit* audit = nullptr,
               std::vector<TrajectoryRecord>* log = nullptr, const CapabilitySet* caps = nullptr) const;
  void advance(ControlState& q, PhysicalState& x, const CapabilitySet& caps, double dt,
               PhysicsAudit* audit = nullptr, std::vector<TrajectoryRecord>* log = nullptr) const;

  bool goal_satisfied(const SensorCondition& goal, const PhysicalState& x) const;
  CompiledSensorCondition compile(const SensorCondition& cond) const;

  /// Sensors whose true reading is outside the safe band.
  std::vector<std::string> unsafe_sensors(const PhysicalState& x) const;

 private:
  struct Rule {
    CompiledSensorCondition guard;
    std::vector<std::pair<std::size_t, std::size_t>> commands;
    int priority;
    std::string name;
  };
  struct Link {
    int from = -1;  // tank index, -1 for source
    int to = -1;    // tank index, -1 for drain
    int valve = -1;
    std::vector<std::size_t> pumps;
    double nominal = 0.0;
  };
  enum class Reads { Level, Flow, Pressure };
  struct Probe {
    Reads reads;
    std::size_t target;
    double gain;
  };

  void control_into(std::span<const double> readings, std::vector<std::size_t>& commanded) const;
  void physics_tick(PhysicalState& x, const std::vector<std::size_t>& applied, PhysicsAudit* audit) const;
  void settle_flows(PhysicalState& x, const std::vector<std::size_t>& applied) const;
  double total_volume(const PhysicalState& x) const;

  PlantModel model_;
  std::vector<Rule> rules_;
  std::vector<Link> links_;
  std::vector<Probe> probes_;
  std::vector<std::size_t> enabling_;  // per actuator: index of "open"/"on"
};

using Injector = std::function<CapabilitySet(std::size_t step, const PhysicalState& x)>;

/// Runs `horizon` seconds, one control interval per tick, recording (q, x)
/// after every interval (the first entry is the starting pair).
std::vector<std::pair<ControlState, PhysicalState>> run_plant(const Plant& plant, ControlState q0, PhysicalState x0,
                                                               double horizon, const Injector& injector,
                                                               PhysicsAudit* audit = nullptr,
                                                               std::vector<TrajectoryRecord>* log = nullptr);

/// Three-tank reference plant.
PlantModel miniswat();

}  // namespace cpsfuzz
