#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "slicesim/engine/scenario.hpp"

namespace slicesim::io {

/// Builds a scenario from a JSON document. Every key is optional; missing
/// keys keep the value of the base preset named by "preset" (default
/// "paper-case"). Unknown keys and type mismatches raise ConfigError naming
/// the JSON path. The schema is documented in docs/config.md.
engine::Scenario scenario_from_json(const nlohmann::json& doc);

/// Reads and parses a scenario file.
engine::Scenario load_scenario(const std::filesystem::path& file);

/// Full JSON form of a scenario; scenario_from_json reads it back unchanged.
nlohmann::json scenario_to_json(const engine::Scenario& scenario);

/// Named base scenarios: "paper-case" and "empty" (no patients, no events).
engine::Scenario preset(const std::string& name);

}  // namespace slicesim::io
