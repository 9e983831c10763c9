#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sltrans {

// Token accounting is pluggable so an external vocabulary can stand in for
// the built-in reference rules. Tokens are returned as views into the input.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::string name() const = 0;
    virtual std::vector<std::string_view> tokenize(std::string_view text) const = 0;
    virtual std::uint64_t count(std::string_view text) const;
};

// Reference rules: maximal runs of identifier characters, maximal runs of
// digits, single punctuation characters; whitespace separates and is not a
// token. Bytes >= 0x80 count as identifier characters so multi-byte UTF-8
// never explodes into per-byte tokens.
class ReferenceTokenizer final : public Tokenizer {
public:
    std::string name() const override { return "reference"; }
    std::vector<std::string_view> tokenize(std::string_view text) const override;
    std::uint64_t count(std::string_view text) const override;
};

// Greedy longest-match against a vocabulary file (one entry per line).
// Bytes not covered by any entry fall back to single-byte tokens.
class VocabTokenizer final : public Tokenizer {
public:
    explicit VocabTokenizer(const std::string& vocab_path);
    std::string name() const override { return "vocab:" + path_; }
    std::vector<std::string_view> tokenize(std::string_view text) const override;

private:
    std::string path_;
    std::vector<std::string> entries_;  // sorted, deduplicated
    std::size_t max_entry_len_{0};
};

// `name` is "reference" or "vocab" (the latter requires `path`).
// Unknown names raise ConfigError.
std::shared_ptr<const Tokenizer> make_tokenizer(std::string_view name, const std::string& path);

}  // namespace sltrans
