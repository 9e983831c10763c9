#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sltrans {

// The twelve source languages the pipeline knows how to lower to LLVM IR.
// Python rides the Codon frontend, Ruby the Crystal frontend.
enum class Language {
    C,
    Cpp,
    Python,
    Rust,
    Haskell,
    Go,
    Fortran,
    D,
    Ruby,
    Nim,
    Swift,
    ObjC,
};

inline constexpr Language kAllLanguages[] = {
    Language::C,    Language::Cpp,     Language::Python, Language::Rust,
    Language::Haskell, Language::Go,   Language::Fortran, Language::D,
    Language::Ruby, Language::Nim,     Language::Swift,  Language::ObjC,
};

// Display name as used in reports ("C++", "Obj-C", ...).
std::string_view language_name(Language lang);
// Identifier-safe upper-case name used for env vars and config keys
// ("CPP", "OBJC", ...).
std::string_view language_key(Language lang);
std::optional<Language> language_from_name(std::string_view name);

enum class OptLevel { size, perf };

inline constexpr OptLevel kBothLevels[] = {OptLevel::size, OptLevel::perf};

std::string_view opt_level_name(OptLevel level);      // "size" / "perf"
std::string_view opt_level_display(OptLevel level);   // "-Oz" / "-O3"
std::optional<OptLevel> opt_level_from_name(std::string_view name);

// One self-contained source file. `id` is the SHA-256 hex digest of `text`,
// so identical content always maps to the same id regardless of path.
struct SourceSample {
    std::string id;
    Language language{Language::C};
    std::string text;
    std::uint64_t byte_len{0};
    std::string origin;
    std::string path;  // ingest-relative path, manifest provenance only
};

enum class CompileStatus { ok, compile_error, timeout, tool_missing };

std::string_view compile_status_name(CompileStatus status);

struct CompileOutcome {
    std::string sample_id;
    OptLevel opt_level{OptLevel::size};
    CompileStatus status{CompileStatus::compile_error};
    std::string ir_text;         // non-empty iff status == ok
    std::string stderr_excerpt;  // first 4 KiB of diagnostics, workdir redacted
    std::uint64_t wall_ms{0};
};

// Normalized IR plus the size metrics the report aggregates.
struct IRArtifact {
    std::string sample_id;
    OptLevel opt_level{OptLevel::size};
    std::string normalized_ir;
    std::uint64_t code_line_count{0};
    std::uint64_t ir_token_count{0};
    std::uint64_t src_token_count{0};
    double length_multiplier{0.0};
};

enum class Direction { source_first, ir_first };

std::string_view direction_name(Direction direction);

// One training document: source and IR bracketed by sentinel lines.
struct PairRecord {
    std::string sample_id;
    Language language{Language::C};
    OptLevel opt_level{OptLevel::size};
    Direction direction{Direction::source_first};
    std::string payload;
    std::uint64_t token_count{0};
};

}  // namespace sltrans
