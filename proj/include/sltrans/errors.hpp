#pragma once

#include <stdexcept>
#include <string>

namespace sltrans {

// Bad config key/value or inconsistent parameters. Exit code 1 at the CLI.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble the pipeline cannot work around. Exit code 3 at the CLI.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Caller broke an API precondition (mismatched ids, mismatched signature
// parameters). Always a bug, never data.
struct UsageError : std::logic_error {
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sltrans
