#pragma once

#include "flcontract/simulator.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace flcontract {

/// Parses a scenario document. Every field is optional; absent fields take
/// the reference defaults, unknown fields are rejected. Throws ConfigError
/// with line/column on malformed JSON and with the field path on schema or
/// invariant violations.
ScenarioConfig parse_config_text(std::string_view text);
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Fully-populated document that parses back to `config`.
std::string config_to_json(const ScenarioConfig& config);

} // namespace flcontract
