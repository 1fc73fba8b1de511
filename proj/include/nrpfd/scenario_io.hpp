#pragma once

#include <string>

#include "nrpfd/topology.hpp"

namespace nrpfd {

// Scenario file: UTF-8, one key=value per line, '#' starts a comment,
// order-insensitive. Keys use the model's environment-constant names
// (heartbeat_period, ping_timeout, switchA1failtime, node1failtime, ...)
// plus the tool extensions (variant, interleaving, max_states, max_depth,
// event_based_failures, suppress_heartbeat_periods, abdication_mode, ...).
// Unknown keys are errors; omitted keys take the variant defaults.
ScenarioConfig load_config(const std::string& text);  // throws ConfigError

std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace nrpfd
