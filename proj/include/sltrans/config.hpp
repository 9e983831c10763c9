#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sltrans/types.hpp"

namespace sltrans {

// Flat `key = value` configuration with `#` comments. Every tunable has a
// recorded default; unknown keys are rejected so typos cannot silently
// revert to defaults. The resolved view (defaults overlaid with the file and
// CLI overrides) is what the manifest snapshots.
class Config {
public:
    Config();  // defaults only

    static Config load(const std::filesystem::path& file);
    static Config parse(std::string_view text, const std::string& origin = "<inline>");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;

    // All resolved keys (defaults + overrides), sorted.
    const std::map<std::string, std::string>& resolved() const { return values_; }

    // Cross-key constraints (bands*rows == k, ratio ranges, enum values).
    // Throws ConfigError; called before any stage does work.
    void validate() const;

private:
    std::map<std::string, std::string> values_;
};

const std::map<std::string, std::string>& config_defaults();

}  // namespace sltrans
