#include "sltrans/manifest.hpp"

#include <fstream>

#include "sltrans/errors.hpp"

namespace fs = std::filesystem;

namespace sltrans {

void write_jsonl(const fs::path& file, const std::vector<nlohmann::json>& rows) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + file.string());
    }
    for (const nlohmann::json& row : rows) {
        out << row.dump() << '\n';
    }
    if (!out.flush()) {
        throw IoError("short write to " + file.string());
    }
}

std::vector<nlohmann::json> read_jsonl(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + file.string());
    }
    std::vector<nlohmann::json> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            rows.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError(file.string() + ":" + std::to_string(lineno) +
                          ": bad JSON line: " + e.what());
        }
    }
    return rows;
}

void Manifest::write(const fs::path& file) const { write_jsonl(file, events_); }

void Manifest::append_to(const fs::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::app);
    if (!out) {
        throw IoError("cannot append to " + file.string());
    }
    for (const nlohmann::json& event : events_) {
        out << event.dump() << '\n';
    }
    if (!out.flush()) {
        throw IoError("short write to " + file.string());
    }
}

Manifest Manifest::read(const fs::path& file) {
    Manifest manifest;
    manifest.events_ = read_jsonl(file);
    return manifest;
}

}  // namespace sltrans
