#include "sltrans/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "sltrans/frontends.hpp"
#include "sltrans/types.hpp"

namespace sltrans {

namespace {

std::string with_thousands(std::uint64_t value) {
    std::string digits = std::to_string(value);
    std::string out;
    out.reserve(digits.size() + digits.size() / 3);
    std::size_t lead = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i == lead && i != 0) {
            out.push_back(',');
            lead += 3;
        } else if (i > lead && (i - lead) % 3 == 0) {
            out.push_back(',');
        }
        out.push_back(digits[i]);
    }
    return out;
}

std::string multiplier_display(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2fx", value);
    return buf;
}

}  // namespace

StatsReport compute_stats(const std::vector<nlohmann::json>& manifest_events) {
    struct Accumulator {
        double multiplier_sum{0.0};
        std::uint64_t kept{0};
        std::uint64_t size_count{0};
        std::uint64_t perf_count{0};
    };
    std::map<std::string, Accumulator> per_language;

    for (const nlohmann::json& event : manifest_events) {
        if (event.value("event", "") != "normalize" || !event.value("keep", false)) {
            continue;
        }
        Accumulator& acc = per_language[event.at("language").get<std::string>()];
        acc.multiplier_sum += event.at("length_multiplier").get<double>();
        acc.kept += 1;
        if (event.at("level").get<std::string>() == "size") {
            acc.size_count += 1;
        } else {
            acc.perf_count += 1;
        }
    }

    StatsReport report;
    for (const auto& [language, acc] : per_language) {
        LanguageStats row;
        row.language = language;
        if (auto lang = language_from_name(language)) {
            row.frontend = frontend_for(*lang).tool;
        }
        row.avg_len_multiplier = acc.kept == 0 ? 0.0 : acc.multiplier_sum /
                                                            static_cast<double>(acc.kept);
        row.samples_size = acc.size_count;
        row.samples_perf = acc.perf_count;
        report.total_size += row.samples_size;
        report.total_perf += row.samples_perf;
        report.rows.push_back(std::move(row));
    }
    std::sort(report.rows.begin(), report.rows.end(),
              [](const LanguageStats& a, const LanguageStats& b) {
                  if (a.samples_size != b.samples_size) return a.samples_size > b.samples_size;
                  return a.language < b.language;
              });
    return report;
}

std::string render_stats_table(const StatsReport& report) {
    std::string out =
        "Language | Frontend | Avg. Len. Multiplier | No. Samples -Oz | No. Samples -O3\n";
    for (const LanguageStats& row : report.rows) {
        out += row.language + " | " + row.frontend + " | " +
               multiplier_display(row.avg_len_multiplier) + " | " +
               with_thousands(row.samples_size) + " | " + with_thousands(row.samples_perf) +
               "\n";
    }
    out += "Total | | | " + with_thousands(report.total_size) + " | " +
           with_thousands(report.total_perf) + "\n";
    return out;
}

nlohmann::json stats_to_json(const StatsReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const LanguageStats& row : report.rows) {
        rows.push_back({{"language", row.language},
                        {"frontend", row.frontend},
                        {"avg_len_multiplier", row.avg_len_multiplier},
                        {"samples_size", row.samples_size},
                        {"samples_perf", row.samples_perf}});
    }
    return {{"languages", rows},
            {"total", {{"samples_size", report.total_size},
                       {"samples_perf", report.total_perf}}}};
}

}  // namespace sltrans
