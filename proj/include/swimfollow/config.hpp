#pragma once

#include <string>

#include "swimfollow/fixed_follower.hpp"
#include "swimfollow/protocol.hpp"

namespace swimfollow {

inline constexpr const char* kToolVersion = "1.0.0";

/// Full experiment configuration. JSON keys mirror the struct fields; every
/// value has a default, so a config file only lists what it changes.
struct SimConfig {
    ImitationConfig imitation;
    FixedFollowerConfig fixed_follower;  // protocol kept in sync with imitation

    SimConfig() { fixed_follower.protocol = imitation.protocol; }
};

/// Parses a JSON config. Unknown keys, wrong types and inconsistent sizes
/// throw ConfigError naming the offending path.
SimConfig parse_config(const std::string& json_text);

SimConfig load_config(const std::string& path);

/// Pretty-printed JSON with every field, suitable as a config file.
std::string config_to_json(const SimConfig& cfg);

} // namespace swimfollow
