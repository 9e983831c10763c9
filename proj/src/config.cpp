#include "sltrans/config.hpp"

#include <charconv>
#include <fstream>

#include "sltrans/errors.hpp"
#include "sltrans/packer.hpp"

namespace sltrans {

namespace {

const std::vector<std::string>& dynamic_prefixes() {
    static const std::vector<std::string> prefixes = {
        "ingest.ext.",       // extension -> language overrides
        "mix.weight.",       // per-source mix weights
        "frontend.",         // frontend.<LANG>.tool / .timeout_s / .args / .optflags.*
        "compile.pinned_target.",
    };
    return prefixes;
}

bool is_known_key(const std::string& key) {
    if (config_defaults().count(key)) return true;
    for (const std::string& prefix : dynamic_prefixes()) {
        if (key.rfind(prefix, 0) == 0) return true;
    }
    return false;
}

std::string trim_copy(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const std::map<std::string, std::string>& config_defaults() {
    static const std::map<std::string, std::string> defaults = {
        {"run.seed", "42"},
        {"ingest.root", ""},
        {"ingest.origin", ""},
        {"ingest.languages", ""},  // csv filter; empty = all
        {"dedup.shingle_w", "5"},
        {"dedup.k", "256"},
        {"dedup.bands", "32"},
        {"dedup.rows", "8"},
        {"dedup.threshold", "0.85"},
        {"dedup.seed", ""},        // empty = derived from run.seed
        {"compile.timeout_s", "30"},
        {"compile.jobs", "0"},     // 0 = logical CPUs
        {"compile.levels", "both"},
        {"filter.max_lines", "2500"},
        {"tokenizer.name", "reference"},
        {"tokenizer.path", ""},
        {"pack.max_len", "4096"},
        {"pack.sentinel_prefix", ";;; SLTRANS"},
        {"mix.mode", "paired"},
        {"mix.token_budget", "1000000"},
        {"mix.opt_level_ratio", "0.5"},
        {"mix.seed", ""},          // empty = derived from run.seed
    };
    return defaults;
}

Config::Config() : values_(config_defaults()) {}

Config Config::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file: " + file.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text, file.string());
}

Config Config::parse(std::string_view text, const std::string& origin) {
    Config config;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view raw = end == std::string_view::npos
                                   ? text.substr(start)
                                   : text.substr(start, end - start);
        ++lineno;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;

        std::string line = trim_copy(raw);
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected `key = value`, got: " + line);
        }
        std::string key = trim_copy(std::string_view(line).substr(0, eq));
        std::string value = trim_copy(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        config.set(key, value);
    }
    return config;
}

void Config::set(const std::string& key, const std::string& value) {
    if (!is_known_key(key)) {
        throw ConfigError("unknown config key: " + key);
    }
    values_[key] = value;
}

bool Config::has(const std::string& key) const {
    auto it = values_.find(key);
    return it != values_.end() && !it->second.empty();
}

std::string Config::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("config key has no value or default: " + key);
    }
    return it->second;
}

std::uint64_t Config::get_u64(const std::string& key) const {
    const std::string v = get_string(key);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("config key " + key + " is not an unsigned integer: " + v);
    }
    return out;
}

double Config::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not a number: " + v);
    }
}

void Config::validate() const {
    const std::uint64_t k = get_u64("dedup.k");
    const std::uint64_t bands = get_u64("dedup.bands");
    const std::uint64_t rows = get_u64("dedup.rows");
    if (k == 0 || bands == 0 || rows == 0 || bands * rows != k) {
        throw ConfigError("dedup.bands * dedup.rows must equal dedup.k");
    }
    if (get_u64("dedup.shingle_w") == 0) {
        throw ConfigError("dedup.shingle_w must be >= 1");
    }
    const double threshold = get_double("dedup.threshold");
    if (threshold < 0.0 || threshold > 1.0) {
        throw ConfigError("dedup.threshold must be within [0,1]");
    }
    const double ratio = get_double("mix.opt_level_ratio");
    if (ratio < 0.0 || ratio > 1.0) {
        throw ConfigError("mix.opt_level_ratio must be within [0,1]");
    }
    if (get_u64("mix.token_budget") == 0) {
        throw ConfigError("mix.token_budget must be > 0");
    }
    if (get_u64("filter.max_lines") == 0) {
        throw ConfigError("filter.max_lines must be > 0");
    }
    if (get_u64("pack.max_len") < 2) {
        throw ConfigError("pack.max_len must be >= 2");
    }
    if (!mix_mode_from_name(get_string("mix.mode"))) {
        throw ConfigError("mix.mode must be paired, unpaired or codetext");
    }
    const std::string levels = get_string("compile.levels");
    if (levels != "size" && levels != "perf" && levels != "both") {
        throw ConfigError("compile.levels must be size, perf or both");
    }
    const std::string tok = get_string("tokenizer.name");
    if (tok != "reference" && tok != "vocab") {
        throw ConfigError("unknown tokenizer.name: " + tok);
    }
    if (tok == "vocab" && !has("tokenizer.path")) {
        throw ConfigError("tokenizer.name=vocab requires tokenizer.path");
    }
    const std::string langs = get_string("ingest.languages");
    if (!langs.empty()) {
        std::size_t pos = 0;
        while (pos <= langs.size()) {
            std::size_t comma = langs.find(',', pos);
            std::string name = trim_copy(std::string_view(langs).substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (!name.empty() && !language_from_name(name)) {
                throw ConfigError("ingest.languages: unknown language " + name);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    for (const auto& [key, value] : values_) {
        if (key.rfind("ingest.ext.", 0) == 0 && !value.empty() && value != "none" &&
            !language_from_name(value)) {
            throw ConfigError(key + ": unknown language " + value);
        }
        if (key.rfind("mix.weight.", 0) == 0) {
            if (get_double(key) < 0.0) {
                throw ConfigError(key + ": weights must be >= 0");
            }
        }
    }
}

}  // namespace sltrans
