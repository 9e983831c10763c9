#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sltrans {

struct LanguageStats {
    std::string language;
    std::string frontend;
    double avg_len_multiplier{0.0};
    std::uint64_t samples_size{0};  // kept in the final set at -Oz
    std::uint64_t samples_perf{0};  // kept in the final set at -O3
};

struct StatsReport {
    std::vector<LanguageStats> rows;  // sorted by -Oz count desc, then name
    std::uint64_t total_size{0};
    std::uint64_t total_perf{0};
};

// Aggregates the per-sample ledger (normalize events with keep=true).
StatsReport compute_stats(const std::vector<nlohmann::json>& manifest_events);

// Pipe-separated table, counts with thousands separators, multiplier N.NNx.
std::string render_stats_table(const StatsReport& report);

// Machine-readable twin with full-precision multipliers.
nlohmann::json stats_to_json(const StatsReport& report);

}  // namespace sltrans
