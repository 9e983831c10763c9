#include "sltrans/irnorm.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "sltrans/errors.hpp"

namespace sltrans {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\f\v");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\f\v");
    return s.substr(b, e - b + 1);
}

bool is_comment_line(std::string_view line) {
    std::string_view t = trim(line);
    return !t.empty() && t.front() == ';';
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

// Numeric metadata ids (`!17`) mentioned anywhere in `text`. `!` followed by
// a digit can only be a metadata reference in textual IR, so a plain scan is
// enough; string literals never contain `!<digit>` in compiler output, and a
// false positive only makes us more conservative about removal.
void collect_metadata_refs(std::string_view text, std::set<std::uint64_t>& out) {
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] != '!') continue;
        std::size_t j = i + 1;
        if (j >= text.size() || text[j] < '0' || text[j] > '9') continue;
        std::uint64_t id = 0;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9') {
            id = id * 10 + static_cast<std::uint64_t>(text[j] - '0');
            ++j;
        }
        out.insert(id);
        i = j - 1;
    }
}

// `!N = ...` definition line -> N.
bool parse_metadata_def(std::string_view line, std::uint64_t& id) {
    std::string_view t = trim(line);
    if (t.size() < 2 || t[0] != '!') return false;
    std::size_t j = 1;
    if (t[j] < '0' || t[j] > '9') return false;
    std::uint64_t v = 0;
    while (j < t.size() && t[j] >= '0' && t[j] <= '9') {
        v = v * 10 + static_cast<std::uint64_t>(t[j] - '0');
        ++j;
    }
    std::string_view rest = trim(t.substr(j));
    if (!starts_with(rest, "=")) return false;
    id = v;
    return true;
}

bool is_stripped_named_metadata(std::string_view line) {
    std::string_view t = trim(line);
    return starts_with(t, "!llvm.ident") || starts_with(t, "!llvm.module.flags");
}

}  // namespace

std::string normalize_ir(std::string_view raw) {
    const std::vector<std::string_view> lines = split_lines(raw);

    enum class Kind { keep, drop, metadata_def };
    std::vector<Kind> kind(lines.size(), Kind::keep);
    std::vector<std::uint64_t> def_id(lines.size(), 0);

    std::set<std::uint64_t> roots;  // ids referenced by stripped named metadata

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view t = trim(lines[i]);
        if (starts_with(t, "source_filename") || starts_with(t, "target datalayout") ||
            starts_with(t, "target triple")) {
            kind[i] = Kind::drop;
        } else if (is_comment_line(lines[i])) {
            kind[i] = Kind::drop;
        } else if (is_stripped_named_metadata(lines[i])) {
            kind[i] = Kind::drop;
            std::string_view rhs = t.substr(t.find('=') == std::string_view::npos
                                                ? t.size()
                                                : t.find('=') + 1);
            collect_metadata_refs(rhs, roots);
        } else if (std::uint64_t id = 0; parse_metadata_def(lines[i], id)) {
            kind[i] = Kind::metadata_def;
            def_id[i] = id;
        }
    }

    // Reach all definitions transitively referenced from the stripped roots.
    std::set<std::uint64_t> reachable = roots;
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (kind[i] != Kind::metadata_def || !reachable.count(def_id[i])) continue;
            std::set<std::uint64_t> refs;
            collect_metadata_refs(lines[i].substr(lines[i].find('=') + 1), refs);
            for (std::uint64_t r : refs) {
                if (reachable.insert(r).second) grew = true;
            }
        }
    }

    // A reachable definition stays if any surviving line still references it.
    std::set<std::uint64_t> removed = reachable;
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::uint64_t> kept_refs;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (kind[i] == Kind::drop) continue;
            if (kind[i] == Kind::metadata_def && removed.count(def_id[i])) continue;
            std::string_view scan = lines[i];
            if (kind[i] == Kind::metadata_def) {
                scan = scan.substr(scan.find('=') + 1);  // a def does not reference itself
            }
            collect_metadata_refs(scan, kept_refs);
        }
        for (auto it = removed.begin(); it != removed.end();) {
            if (kept_refs.count(*it)) {
                it = removed.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }

    std::vector<std::string_view> kept;
    kept.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (kind[i] == Kind::drop) continue;
        if (kind[i] == Kind::metadata_def && removed.count(def_id[i])) continue;
        kept.push_back(lines[i]);
    }

    // Collapse blank runs, trim leading/trailing blanks.
    std::string out;
    out.reserve(raw.size());
    bool pending_blank = false;
    bool any = false;
    for (std::string_view line : kept) {
        if (trim(line).empty()) {
            pending_blank = any;  // leading blanks vanish
            continue;
        }
        if (pending_blank) {
            out.push_back('\n');
            pending_blank = false;
        }
        out.append(line);
        out.push_back('\n');
        any = true;
    }
    return out;
}

std::uint64_t count_code_lines(std::string_view ir) {
    std::uint64_t count = 0;
    for (std::string_view line : split_lines(ir)) {
        if (!trim(line).empty()) ++count;
    }
    return count;
}

bool apply_length_filter(std::uint64_t code_line_count, std::uint64_t max_lines) {
    return code_line_count < max_lines;
}

double length_multiplier(std::uint64_t ir_tokens, std::uint64_t src_tokens) {
    if (src_tokens == 0) {
        throw UsageError("length_multiplier: src_tokens must be >= 1");
    }
    return static_cast<double>(ir_tokens) / static_cast<double>(src_tokens);
}

IRArtifact make_artifact(const std::string& sample_id, OptLevel level,
                         std::string_view raw_ir, std::string_view source_text,
                         const Tokenizer& tokenizer) {
    IRArtifact artifact;
    artifact.sample_id = sample_id;
    artifact.opt_level = level;
    artifact.normalized_ir = normalize_ir(raw_ir);
    artifact.code_line_count = count_code_lines(artifact.normalized_ir);
    if (artifact.code_line_count == 0) {
        return artifact;  // empty_after_normalize, caller drops it
    }
    artifact.ir_token_count = tokenizer.count(artifact.normalized_ir);
    artifact.src_token_count = tokenizer.count(source_text);
    artifact.length_multiplier =
        length_multiplier(artifact.ir_token_count, artifact.src_token_count);
    return artifact;
}

}  // namespace sltrans
