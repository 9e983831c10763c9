#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sltrans/types.hpp"

namespace sltrans {

// Declarative recipe for one compiler frontend. argv_template carries the
// placeholders {input}, {output} and {optflags}; pinned_target args are
// appended verbatim when present.
struct FrontendSpec {
    Language language{Language::C};
    std::string tool;
    std::vector<std::string> argv_template;
    std::map<OptLevel, std::vector<std::string>> optflags_by_level;
    double timeout_s{30.0};
    std::vector<std::string> pinned_target;

    bool supports(OptLevel level) const { return optflags_by_level.count(level) > 0; }
};

// One spec per supported language. Pure, no I/O. Nim carries only the size
// level; every other language carries both.
const std::vector<FrontendSpec>& builtin_frontend_table();

const FrontendSpec& frontend_for(Language language);

// Canonical input-file extension the frontend keys its language detection on.
std::string_view frontend_input_extension(Language language);

// Executable resolution honoring the SLTRANS_TOOL_<LANG> override.
std::optional<std::filesystem::path> resolve_tool(const FrontendSpec& spec);

struct ToolInfo {
    std::string path;
    std::string version;  // `tool --version` first line, "unknown" if mute
};

// Resolve + version-probe; nullopt when the executable is absent.
std::optional<ToolInfo> probe_tool(const FrontendSpec& spec);

// Run the frontend on one sample in a fresh temp dir. All failures are data:
// nonzero exit -> compile_error, wall-clock overrun -> timeout (process tree
// killed), absent executable -> tool_missing. Diagnostics keep the first
// 4 KiB of stderr with the temp dir redacted.
CompileOutcome compile_to_ir(const SourceSample& sample, const FrontendSpec& spec,
                             OptLevel level);

}  // namespace sltrans
