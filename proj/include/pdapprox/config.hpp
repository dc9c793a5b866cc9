#pragma once

#include <string>

#include "json.hpp"
#include "pdapprox/experiments.hpp"

namespace pdapprox {

/// Parses a JSON run configuration. Unknown keys, wrong types and invariant
/// violations raise ConfigError with a "line L: ..." prefix when the offending
/// key can be located in the text.
ExperimentConfig parse_config(const std::string& text);

/// Reads and parses a config file; ConfigError on I/O failure too.
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON form of a config; parse_config(config_to_json(c).dump())
/// reproduces c.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

/// Target set from its JSON description ({"kind": ..., parameters}).
TargetSet target_from_json(const nlohmann::json& j);
nlohmann::ordered_json target_to_json(const TargetSet& a);

}  // namespace pdapprox
