#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "intersim/engine.hpp"

namespace intersim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses the plain-text scenario format: `key = value` lines grouped under
// `[section]` headers, `#` comments, blank lines ignored (grammar in the
// README). Every omitted field keeps its default. Unknown sections or keys,
// malformed values and out-of-range settings raise ConfigError naming the
// offender. An empty document is the all-defaults scenario.
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario_file(const std::string& path);

// Canonical rendering with round-trip precision; parse_scenario applied to
// the output reproduces the config exactly. Run manifests use this.
std::string serialize_scenario(const ScenarioConfig& cfg);

}  // namespace intersim
