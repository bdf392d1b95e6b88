#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace edgescope {

/// Parse a practical TOML subset into a JSON object: `[section.sub]` tables,
/// `key = value` pairs with basic strings, integers, floats, booleans, and
/// flat arrays, plus `#` comments.  Throws std::runtime_error with a line
/// number on malformed input.
nlohmann::json parse_toml(const std::string& text);

/// Load a config file by extension: .toml via parse_toml, .json via nlohmann.
nlohmann::json load_config_file(const std::string& path);

}  // namespace edgescope
