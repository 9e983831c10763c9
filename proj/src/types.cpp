#include "sltrans/types.hpp"

namespace sltrans {

std::string_view language_name(Language lang) {
    switch (lang) {
        case Language::C: return "C";
        case Language::Cpp: return "C++";
        case Language::Python: return "Python";
        case Language::Rust: return "Rust";
        case Language::Haskell: return "Haskell";
        case Language::Go: return "Go";
        case Language::Fortran: return "Fortran";
        case Language::D: return "D";
        case Language::Ruby: return "Ruby";
        case Language::Nim: return "Nim";
        case Language::Swift: return "Swift";
        case Language::ObjC: return "Obj-C";
    }
    return "?";
}

std::string_view language_key(Language lang) {
    switch (lang) {
        case Language::C: return "C";
        case Language::Cpp: return "CPP";
        case Language::Python: return "PYTHON";
        case Language::Rust: return "RUST";
        case Language::Haskell: return "HASKELL";
        case Language::Go: return "GO";
        case Language::Fortran: return "FORTRAN";
        case Language::D: return "D";
        case Language::Ruby: return "RUBY";
        case Language::Nim: return "NIM";
        case Language::Swift: return "SWIFT";
        case Language::ObjC: return "OBJC";
    }
    return "?";
}

std::optional<Language> language_from_name(std::string_view name) {
    for (Language lang : kAllLanguages) {
        if (name == language_name(lang) || name == language_key(lang)) {
            return lang;
        }
    }
    // Accept the lower-case config spelling of the key as well.
    for (Language lang : kAllLanguages) {
        std::string_view key = language_key(lang);
        if (name.size() == key.size()) {
            bool match = true;
            for (size_t i = 0; i < key.size(); ++i) {
                char a = name[i];
                char b = key[i];
                if (a >= 'a' && a <= 'z') a = static_cast<char>(a - 'a' + 'A');
                if (a != b) {
                    match = false;
                    break;
                }
            }
            if (match) return lang;
        }
    }
    return std::nullopt;
}

std::string_view opt_level_name(OptLevel level) {
    return level == OptLevel::size ? "size" : "perf";
}

std::string_view opt_level_display(OptLevel level) {
    return level == OptLevel::size ? "-Oz" : "-O3";
}

std::optional<OptLevel> opt_level_from_name(std::string_view name) {
    if (name == "size") return OptLevel::size;
    if (name == "perf") return OptLevel::perf;
    return std::nullopt;
}

std::string_view compile_status_name(CompileStatus status) {
    switch (status) {
        case CompileStatus::ok: return "ok";
        case CompileStatus::compile_error: return "compile_error";
        case CompileStatus::timeout: return "timeout";
        case CompileStatus::tool_missing: return "tool_missing";
    }
    return "?";
}

std::string_view direction_name(Direction direction) {
    return direction == Direction::source_first ? "source_first" : "ir_first";
}

}  // namespace sltrans
