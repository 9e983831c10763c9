#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sltrans/tokenizer.hpp"
#include "sltrans/types.hpp"

namespace sltrans {

// Plain-text comment-like bracketing so any tokenizer survives the corpus.
// Default lines:
//   ;;; SLTRANS kind=source lang=<language>
//   ;;; SLTRANS kind=ir opt=<level>
//   ;;; SLTRANS end
struct SentinelScheme {
    std::string prefix{";;; SLTRANS"};

    std::string open_source(Language lang) const;
    std::string open_ir(OptLevel level) const;
    std::string close() const;
    std::string describe() const { return prefix; }
};

struct ParsedPair {
    std::string source_text;
    std::string ir_text;
    Direction direction{Direction::source_first};
};

// Concatenate one sample with its IR under the sentinel scheme. The artifact
// must belong to the sample and must already have passed the length filter.
PairRecord format_pair(const SourceSample& sample, const IRArtifact& artifact,
                       Direction direction, const SentinelScheme& scheme,
                       const Tokenizer& tokenizer);

// Inverse of format_pair; recovers both bodies byte-exactly.
ParsedPair parse_pair(const std::string& payload, const SentinelScheme& scheme);

enum class MixMode { paired, unpaired, codetext };

std::string_view mix_mode_name(MixMode mode);
std::optional<MixMode> mix_mode_from_name(std::string_view name);

struct MixSpec {
    MixMode mode{MixMode::paired};
    std::uint64_t token_budget{1'000'000};
    std::map<std::string, double> source_weights;  // unlisted pools weigh 1.0
    double opt_level_ratio{0.5};                   // fraction of size-level pair draws
    std::uint64_t seed{0};
};

// One document in a pool / the emitted stream. kind is "pair", "source" or
// "ir"; pair records carry opt_level and direction.
struct MixDoc {
    std::string kind;
    std::string sample_id;
    Language language{Language::C};
    std::optional<OptLevel> opt_level;
    std::optional<Direction> direction;
    std::string payload;
    std::uint64_t token_count{0};
};

// Paired pool entry: one sample with its per-level pair records. Direction
// is fixed per record at pool-construction time (alternating per sample).
struct PairedPoolEntry {
    std::string sample_id;
    std::map<OptLevel, PairRecord> by_level;
};

struct MixAccounting {
    std::string mode;
    std::uint64_t budget{0};
    std::uint64_t emitted_tokens{0};
    std::uint64_t emitted_records{0};
    std::map<std::string, std::uint64_t> per_source_tokens;
};

struct MixResult {
    std::vector<MixDoc> records;
    MixAccounting accounting;
};

// Deterministic with-replacement upsampling to the token budget (within 1%).
//   codetext: monolingual source pools only; zero IR tokens.
//   unpaired: monolingual pools plus the "ir" pool of standalone IR docs.
//   paired:   the "paired" pool plus monolingual filler.
// Empty required pools and budgets smaller than the largest single record
// raise ConfigError.
MixResult mix_corpus(const std::vector<PairedPoolEntry>& paired_pool,
                     const std::map<std::string, std::vector<MixDoc>>& monolingual_pools,
                     const std::vector<MixDoc>& ir_only_pool, const MixSpec& spec);

struct PackedSequence {
    std::uint64_t seq_id{0};
    std::vector<std::uint64_t> record_indices;  // into the input record stream
    std::uint64_t token_count{0};               // records + one separator each
};

struct PackDrop {
    std::uint64_t record_index{0};
    std::uint64_t token_count{0};
    std::string reason;  // "exceeds_context"
};

struct PackResult {
    std::vector<PackedSequence> sequences;
    std::vector<PackDrop> drops;
};

// Greedy packing at document granularity: every record stays whole, each
// costs token_count plus one document separator. Records that cannot fit in
// an empty sequence are dropped with reason "exceeds_context".
PackResult pack_sequences(const std::vector<MixDoc>& records, std::uint64_t max_len);

}  // namespace sltrans
