#include "sltrans/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <system_error>

#include "sltrans/digest.hpp"
#include "sltrans/errors.hpp"

namespace fs = std::filesystem;

namespace sltrans {

namespace {

const std::map<std::string, Language>& builtin_extension_table() {
    static const std::map<std::string, Language> table = {
        {"c", Language::C},
        {"cpp", Language::Cpp},
        {"cc", Language::Cpp},
        {"cxx", Language::Cpp},
        {"py", Language::Python},
        {"rs", Language::Rust},
        {"hs", Language::Haskell},
        {"go", Language::Go},
        {"f90", Language::Fortran},
        {"f", Language::Fortran},
        {"d", Language::D},
        {"rb", Language::Ruby},
        {"cr", Language::Ruby},
        {"nim", Language::Nim},
        {"swift", Language::Swift},
        {"m", Language::ObjC},
    };
    return table;
}

std::string lower_extension(const fs::path& filename) {
    std::string ext = filename.extension().string();
    if (!ext.empty() && ext.front() == '.') ext.erase(ext.begin());
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

}  // namespace

std::optional<Language> classify_language(const fs::path& filename,
                                          const ExtensionOverrides& overrides) {
    const std::string ext = lower_extension(filename);
    if (ext.empty()) return std::nullopt;
    if (auto it = overrides.find(ext); it != overrides.end()) {
        return it->second;
    }
    const auto& table = builtin_extension_table();
    if (auto it = table.find(ext); it != table.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::uint64_t utf8_lossy_repair(std::string& text) {
    static const std::string replacement = "\xEF\xBF\xBD";  // U+FFFD
    std::string out;
    std::uint64_t fixes = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool clean = true;

    auto is_cont = [&](std::size_t j) {
        return j < n && (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80;
    };

    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        bool valid = false;
        if (c < 0x80) {
            len = 1;
            valid = true;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
            len = 2;
            valid = is_cont(i + 1);
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            valid = is_cont(i + 1) && is_cont(i + 2);
            if (valid) {
                unsigned char c1 = static_cast<unsigned char>(text[i + 1]);
                if (c == 0xE0 && c1 < 0xA0) valid = false;           // overlong
                if (c == 0xED && c1 >= 0xA0) valid = false;          // surrogate
            }
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            len = 4;
            valid = is_cont(i + 1) && is_cont(i + 2) && is_cont(i + 3);
            if (valid) {
                unsigned char c1 = static_cast<unsigned char>(text[i + 1]);
                if (c == 0xF0 && c1 < 0x90) valid = false;           // overlong
                if (c == 0xF4 && c1 >= 0x90) valid = false;          // > U+10FFFF
            }
        }

        if (valid) {
            out.append(text, i, len);
            i += len;
        } else {
            out.append(replacement);
            ++fixes;
            ++i;  // resync one byte at a time
            clean = false;
        }
    }

    if (!clean) text = std::move(out);
    return fixes;
}

IngestResult ingest_dir(const fs::path& root, const ExtensionOverrides& overrides,
                        const std::vector<Language>& languages, const std::string& origin) {
    std::error_code ec;
    if (!fs::exists(root, ec) || !fs::is_directory(root, ec)) {
        throw IoError("ingest root is not a readable directory: " + root.string());
    }

    std::vector<fs::path> files;
    fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
    if (ec) {
        throw IoError("cannot walk ingest root " + root.string() + ": " + ec.message());
    }
    for (const auto& entry : it) {
        if (entry.is_regular_file(ec) && !ec) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
        return a.generic_string() < b.generic_string();
    });

    IngestResult result;
    const std::string origin_tag = origin.empty() ? root.filename().string() : origin;

    for (const fs::path& file : files) {
        const std::string rel = fs::relative(file, root, ec).generic_string();
        const std::string shown = ec ? file.generic_string() : rel;

        auto lang = classify_language(file.filename(), overrides);
        if (!lang) {
            result.skips.push_back({shown, "unmapped_extension"});
            continue;
        }
        if (!languages.empty() &&
            std::find(languages.begin(), languages.end(), *lang) == languages.end()) {
            result.skips.push_back({shown, "language_not_selected"});
            continue;
        }

        std::ifstream in(file, std::ios::binary);
        if (!in) {
            result.skips.push_back({shown, "unreadable"});
            continue;
        }
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (in.bad()) {
            result.skips.push_back({shown, "unreadable"});
            continue;
        }
        if (text.empty()) {
            result.skips.push_back({shown, "empty_file"});
            continue;
        }

        std::uint64_t fixes = utf8_lossy_repair(text);

        SourceSample sample;
        sample.id = sha256_hex(text);
        sample.language = *lang;
        sample.byte_len = text.size();
        sample.text = std::move(text);
        sample.origin = origin_tag;
        sample.path = shown;
        if (fixes > 0) {
            result.encoding_fixes.push_back({shown, sample.id, fixes});
        }
        result.samples.push_back(std::move(sample));
    }
    return result;
}

}  // namespace sltrans
