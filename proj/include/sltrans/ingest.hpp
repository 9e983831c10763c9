#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sltrans/types.hpp"

namespace sltrans {

struct SkipRecord {
    std::string path;
    std::string reason;  // unmapped_extension | unreadable | empty_file
};

struct EncodingFix {
    std::string path;
    std::string id;
    std::uint64_t replaced_sequences{0};
};

struct IngestResult {
    std::vector<SourceSample> samples;  // lexicographic by path
    std::vector<SkipRecord> skips;
    std::vector<EncodingFix> encoding_fixes;
};

// Extension (without dot, lower-case) -> language. Overrides shadow the
// builtin table; mapping an extension to nullopt removes it.
using ExtensionOverrides = std::map<std::string, std::optional<Language>>;

std::optional<Language> classify_language(const std::filesystem::path& filename,
                                          const ExtensionOverrides& overrides = {});

// Replace invalid UTF-8 sequences with U+FFFD. Returns the number of
// replacements made.
std::uint64_t utf8_lossy_repair(std::string& text);

// Walk `root`, one SourceSample per regular file with a mapped extension,
// deterministic lexicographic order. Unreadable root throws IoError;
// unreadable files become skips. `languages` (when non-empty) restricts
// ingestion to that set.
IngestResult ingest_dir(const std::filesystem::path& root,
                        const ExtensionOverrides& overrides = {},
                        const std::vector<Language>& languages = {},
                        const std::string& origin = "");

}  // namespace sltrans
