#include "sltrans/tokenizer.hpp"

#include <algorithm>
#include <fstream>

#include "sltrans/errors.hpp"

namespace sltrans {

namespace {

inline bool is_ident_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

inline bool is_digit_char(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_space_char(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

std::uint64_t Tokenizer::count(std::string_view text) const {
    return tokenize(text).size();
}

std::vector<std::string_view> ReferenceTokenizer::tokenize(std::string_view text) const {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_char(c)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (is_ident_char(c)) {
            ++i;
            while (i < n) {
                unsigned char d = static_cast<unsigned char>(text[i]);
                if (!is_ident_char(d) && !is_digit_char(d)) break;
                ++i;
            }
        } else if (is_digit_char(c)) {
            ++i;
            while (i < n && is_digit_char(static_cast<unsigned char>(text[i]))) ++i;
        } else {
            ++i;  // single punctuation character
        }
        tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

std::uint64_t ReferenceTokenizer::count(std::string_view text) const {
    // Same walk as tokenize() without materializing the views.
    std::uint64_t tokens = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_char(c)) {
            ++i;
            continue;
        }
        if (is_ident_char(c)) {
            ++i;
            while (i < n) {
                unsigned char d = static_cast<unsigned char>(text[i]);
                if (!is_ident_char(d) && !is_digit_char(d)) break;
                ++i;
            }
        } else if (is_digit_char(c)) {
            ++i;
            while (i < n && is_digit_char(static_cast<unsigned char>(text[i]))) ++i;
        } else {
            ++i;
        }
        ++tokens;
    }
    return tokens;
}

VocabTokenizer::VocabTokenizer(const std::string& vocab_path) : path_(vocab_path) {
    std::ifstream in(vocab_path, std::ios::binary);
    if (!in) {
        throw ConfigError("tokenizer.path not readable: " + vocab_path);
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        entries_.push_back(line);
        max_entry_len_ = std::max(max_entry_len_, line.size());
    }
    std::sort(entries_.begin(), entries_.end());
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
    if (entries_.empty()) {
        throw ConfigError("tokenizer vocabulary is empty: " + vocab_path);
    }
}

std::vector<std::string_view> VocabTokenizer::tokenize(std::string_view text) const {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t best = 0;
        std::size_t cap = std::min(max_entry_len_, text.size() - i);
        for (std::size_t len = cap; len >= 1; --len) {
            if (std::binary_search(entries_.begin(), entries_.end(), text.substr(i, len))) {
                best = len;
                break;
            }
        }
        if (best == 0) best = 1;  // byte fallback
        tokens.push_back(text.substr(i, best));
        i += best;
    }
    return tokens;
}

std::shared_ptr<const Tokenizer> make_tokenizer(std::string_view name, const std::string& path) {
    if (name == "reference") {
        return std::make_shared<ReferenceTokenizer>();
    }
    if (name == "vocab") {
        if (path.empty()) {
            throw ConfigError("tokenizer.name=vocab requires tokenizer.path");
        }
        return std::make_shared<VocabTokenizer>(path);
    }
    throw ConfigError("unknown tokenizer.name: " + std::string(name));
}

}  // namespace sltrans
