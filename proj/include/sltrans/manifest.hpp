#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace sltrans {

// Ordered, append-only JSONL event ledger. Events never carry wall-clock
// data so a rerun with identical inputs reproduces the file byte for byte.
class Manifest {
public:
    void add(nlohmann::json event) { events_.push_back(std::move(event)); }
    const std::vector<nlohmann::json>& events() const { return events_; }

    void write(const std::filesystem::path& file) const;
    void append_to(const std::filesystem::path& file) const;
    static Manifest read(const std::filesystem::path& file);

private:
    std::vector<nlohmann::json> events_;
};

// Shared JSONL helpers.
void write_jsonl(const std::filesystem::path& file, const std::vector<nlohmann::json>& rows);
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& file);

}  // namespace sltrans
