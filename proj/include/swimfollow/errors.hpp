#pragma once

#include <stdexcept>
#include <string>

namespace swimfollow {

// Bad user input: malformed config, unknown keys, invalid CLI usage. Exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Simulation or training blew up (non-finite state, diverged solver). Exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be read/written, or failed its integrity checks. Exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace swimfollow
