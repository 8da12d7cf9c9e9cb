#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "crlearn/scenario.hpp"

namespace crlearn {

/// Flat `key = value` text with `#` comments. `mcs = <label>,<gamma_db>` lines
/// (ascending gamma) replace the default ladder. Throws Error(UnknownKey) or
/// Error(InvalidConfig) naming the key and line.
ScenarioConfig parse_config(std::istream& in, std::string_view source = "<config>");
ScenarioConfig load_config_file(const std::filesystem::path& path);

/// Applies one override. `mcs` is not accepted here.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// `key=value` form used by --set.
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

}  // namespace crlearn
