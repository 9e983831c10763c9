#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sltrans/tokenizer.hpp"
#include "sltrans/types.hpp"

namespace sltrans {

// Strip the platform-identifying module preamble and comments from textual
// IR: `source_filename`, `target datalayout`, `target triple` lines, whole-
// line `;` comments, `!llvm.ident` / `!llvm.module.flags` plus the metadata
// definitions only they reference. Blank-line runs collapse to one. The
// transform is pure and idempotent; everything semantic (functions,
// declarations, globals, attribute groups) passes through verbatim.
std::string normalize_ir(std::string_view raw);

// Lines that are non-empty after trimming whitespace.
std::uint64_t count_code_lines(std::string_view ir);

// Keep iff code_line_count < max_lines (strict).
bool apply_length_filter(std::uint64_t code_line_count, std::uint64_t max_lines = 2500);

// Exact ratio ir_tokens / src_tokens; src_tokens must be >= 1.
double length_multiplier(std::uint64_t ir_tokens, std::uint64_t src_tokens);

// Assemble the artifact for one ok compile; returns an artifact with
// code_line_count == 0 when nothing survives normalization.
IRArtifact make_artifact(const std::string& sample_id, OptLevel level,
                         std::string_view raw_ir, std::string_view source_text,
                         const Tokenizer& tokenizer);

}  // namespace sltrans
