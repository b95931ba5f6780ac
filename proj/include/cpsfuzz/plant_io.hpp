#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpsfuzz/plant.hpp"

namespace cpsfuzz {

/// Plant model document. Schema:
///
///   { "name", "tick",
///     "tanks":     [{"id", "area", "max_level", "level_sensor", "nominal": [lo, hi], "initial"}],
///     "pipes":     [{"id", "from", "to", "valve"?, "pumps"?: [...], "nominal_flow", "flow_sensor"?}],
///     "sensors":   [{"id", "range": [lo, hi], "safe": [lo, hi], "pipe"?, "gain"?}],
///     "actuators": [{"id", "values": [...], "initial"}],
///     "controller":[{"name", "guard", "commands": {"MV101": "open", ...}, "priority"}] }
///
/// Throws ModelValidationError on schema problems (missing keys, wrong types,
/// unparsable guards).
PlantModel plant_from_json(const nlohmann::json& doc);
nlohmann::json plant_to_json(const PlantModel& model);

PlantModel load_plant(const std::filesystem::path& path);
void save_plant(const PlantModel& model, const std::filesystem::path& path);

nlohmann::json to_json(const PhysicalState& x);
PhysicalState physical_state_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ControlState& q);
ControlState control_state_from_json(const nlohmann::json& doc);

/// One JSON object per line: {"clock", "readings", "configurations", "injected"}.
void write_trajectory(std::ostream& out, const std::vector<TrajectoryRecord>& records);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cpsfuzz
