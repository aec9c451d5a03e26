// Error types shared across the library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beaconsim {

// Camera center lies on the ground plane: the ground-to-image map loses rank.
struct DegeneratePose : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Beacon layout parameters violate the layout contract.
struct BadLayout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No exposure gain in the given bounds keeps saturated components small enough.
struct NoFeasibleGain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A metrics band contains no frames.
struct EmptyBand : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedLog : std::runtime_error {
    std::size_t line_number;
    MalformedLog(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
          line_number(line) {}
};

struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(const std::string& key_path, const std::string& reason)
        : std::runtime_error("config key '" + key_path + "': " + reason), key(key_path) {}
};

}  // namespace beaconsim
