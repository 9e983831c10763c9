#include "sltrans/packer.hpp"

#include <algorithm>
#include <random>

#include "sltrans/errors.hpp"

namespace sltrans {

namespace {

// Unbiased bounded draw (Lemire). std::uniform_int_distribution is
// implementation-defined, which would break cross-compiler determinism.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t reject_below = (0ULL - n) % n;
    for (;;) {
        unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
        if (static_cast<std::uint64_t>(m) >= reject_below) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string SentinelScheme::open_source(Language lang) const {
    return prefix + " kind=source lang=" + std::string(language_name(lang));
}

std::string SentinelScheme::open_ir(OptLevel level) const {
    return prefix + " kind=ir opt=" + std::string(opt_level_name(level));
}

std::string SentinelScheme::close() const { return prefix + " end"; }

PairRecord format_pair(const SourceSample& sample, const IRArtifact& artifact,
                       Direction direction, const SentinelScheme& scheme,
                       const Tokenizer& tokenizer) {
    if (sample.id != artifact.sample_id) {
        throw UsageError("format_pair: artifact does not belong to this sample");
    }

    const std::string source_block = scheme.open_source(sample.language) + "\n" +
                                     sample.text + "\n" + scheme.close() + "\n";
    const std::string ir_block = scheme.open_ir(artifact.opt_level) + "\n" +
                                 artifact.normalized_ir + "\n" + scheme.close() + "\n";

    PairRecord record;
    record.sample_id = sample.id;
    record.language = sample.language;
    record.opt_level = artifact.opt_level;
    record.direction = direction;
    record.payload = direction == Direction::source_first ? source_block + ir_block
                                                          : ir_block + source_block;
    record.token_count = tokenizer.count(record.payload);
    return record;
}

ParsedPair parse_pair(const std::string& payload, const SentinelScheme& scheme) {
    const std::string close_line = scheme.close() + "\n";
    const std::string inner_boundary = "\n" + close_line + scheme.prefix + " kind=";

    std::size_t first_nl = payload.find('\n');
    if (first_nl == std::string::npos) {
        throw UsageError("parse_pair: payload has no sentinel header");
    }
    const std::string first_line = payload.substr(0, first_nl);
    const bool source_first =
        first_line.rfind(scheme.prefix + " kind=source", 0) == 0;
    if (!source_first && first_line.rfind(scheme.prefix + " kind=ir", 0) != 0) {
        throw UsageError("parse_pair: unknown opening sentinel: " + first_line);
    }

    std::size_t boundary = payload.find(inner_boundary, first_nl);
    if (boundary == std::string::npos) {
        throw UsageError("parse_pair: inner boundary not found");
    }
    std::string body_a = payload.substr(first_nl + 1, boundary - first_nl - 1);

    std::size_t second_open = boundary + 1 + close_line.size();
    std::size_t second_nl = payload.find('\n', second_open);
    if (second_nl == std::string::npos) {
        throw UsageError("parse_pair: second block has no header line");
    }
    const std::string tail = "\n" + close_line;
    if (payload.size() < second_nl + tail.size() ||
        payload.compare(payload.size() - tail.size(), tail.size(), tail) != 0) {
        throw UsageError("parse_pair: payload does not end with a closing sentinel");
    }
    std::string body_b = payload.substr(second_nl + 1,
                                        payload.size() - tail.size() - (second_nl + 1));

    ParsedPair parsed;
    parsed.direction = source_first ? Direction::source_first : Direction::ir_first;
    parsed.source_text = source_first ? std::move(body_a) : std::move(body_b);
    parsed.ir_text = source_first ? std::move(body_b) : std::move(body_a);
    return parsed;
}

std::string_view mix_mode_name(MixMode mode) {
    switch (mode) {
        case MixMode::paired: return "paired";
        case MixMode::unpaired: return "unpaired";
        case MixMode::codetext: return "codetext";
    }
    return "?";
}

std::optional<MixMode> mix_mode_from_name(std::string_view name) {
    if (name == "paired") return MixMode::paired;
    if (name == "unpaired") return MixMode::unpaired;
    if (name == "codetext") return MixMode::codetext;
    return std::nullopt;
}

MixResult mix_corpus(const std::vector<PairedPoolEntry>& paired_pool,
                     const std::map<std::string, std::vector<MixDoc>>& monolingual_pools,
                     const std::vector<MixDoc>& ir_only_pool, const MixSpec& spec) {
    if (spec.token_budget == 0) {
        throw ConfigError("mix: token_budget must be > 0");
    }
    if (spec.opt_level_ratio < 0.0 || spec.opt_level_ratio > 1.0) {
        throw ConfigError("mix: opt_level_ratio must be within [0,1]");
    }

    // Active sources, name-sorted so the draw order is reproducible.
    struct Source {
        std::string name;
        double weight{1.0};
        const std::vector<MixDoc>* docs{nullptr};          // mono / ir
        const std::vector<PairedPoolEntry>* pairs{nullptr};
    };
    std::vector<Source> sources;

    auto weight_of = [&](const std::string& name) {
        auto it = spec.source_weights.find(name);
        double w = it == spec.source_weights.end() ? 1.0 : it->second;
        if (w < 0.0) throw ConfigError("mix: negative weight for source " + name);
        return w;
    };

    for (const auto& [name, docs] : monolingual_pools) {
        if (docs.empty()) continue;
        sources.push_back({name, weight_of(name), &docs, nullptr});
    }
    if (spec.mode == MixMode::unpaired) {
        if (ir_only_pool.empty()) {
            throw ConfigError("mix: unpaired mode requires a non-empty ir pool");
        }
        sources.push_back({"ir", weight_of("ir"), &ir_only_pool, nullptr});
    }
    if (spec.mode == MixMode::paired) {
        if (paired_pool.empty()) {
            throw ConfigError("mix: paired mode requires a non-empty paired pool");
        }
        sources.push_back({"paired", weight_of("paired"), nullptr, &paired_pool});
    }
    if (spec.mode == MixMode::codetext && monolingual_pools.empty()) {
        throw ConfigError("mix: codetext mode requires monolingual pools");
    }
    std::sort(sources.begin(), sources.end(),
              [](const Source& a, const Source& b) { return a.name < b.name; });
    sources.erase(std::remove_if(sources.begin(), sources.end(),
                                 [](const Source& s) { return s.weight == 0.0; }),
                  sources.end());
    if (sources.empty()) {
        throw ConfigError("mix: no source with positive weight");
    }

    double total_weight = 0.0;
    for (const Source& s : sources) total_weight += s.weight;
    if (!(total_weight > 0.0)) {
        throw ConfigError("mix: weights must sum to a positive value");
    }

    // Budget must admit the largest single record.
    std::uint64_t largest = 0;
    for (const Source& s : sources) {
        if (s.docs) {
            for (const MixDoc& d : *s.docs) largest = std::max(largest, d.token_count);
        } else {
            for (const PairedPoolEntry& e : *s.pairs) {
                for (const auto& [level, rec] : e.by_level) {
                    largest = std::max(largest, rec.token_count);
                }
            }
        }
    }
    if (largest > spec.token_budget) {
        throw ConfigError("mix: token_budget smaller than the largest single record");
    }

    const double budget = static_cast<double>(spec.token_budget);
    const double ceiling = budget * 1.01;

    std::mt19937_64 rng(spec.seed);
    MixResult result;
    result.accounting.mode = std::string(mix_mode_name(spec.mode));
    result.accounting.budget = spec.token_budget;

    std::uint64_t emitted = 0;
    std::uint64_t reject_streak = 0;
    constexpr std::uint64_t kMaxRejects = 100000;

    while (emitted < spec.token_budget) {
        double pick = draw_unit(rng) * total_weight;
        std::size_t source_idx = 0;
        for (; source_idx + 1 < sources.size(); ++source_idx) {
            if (pick < sources[source_idx].weight) break;
            pick -= sources[source_idx].weight;
        }
        const Source& src = sources[source_idx];

        MixDoc doc;
        if (src.docs) {
            doc = (*src.docs)[draw_below(rng, src.docs->size())];
        } else {
            const PairedPoolEntry& entry = (*src.pairs)[draw_below(rng, src.pairs->size())];
            OptLevel want = draw_unit(rng) < spec.opt_level_ratio ? OptLevel::size
                                                                  : OptLevel::perf;
            auto it = entry.by_level.find(want);
            if (it == entry.by_level.end()) it = entry.by_level.begin();
            const PairRecord& rec = it->second;
            doc.kind = "pair";
            doc.sample_id = rec.sample_id;
            doc.language = rec.language;
            doc.opt_level = rec.opt_level;
            doc.direction = rec.direction;
            doc.payload = rec.payload;
            doc.token_count = rec.token_count;
        }

        if (static_cast<double>(emitted) + static_cast<double>(doc.token_count) > ceiling) {
            if (++reject_streak > kMaxRejects) {
                if (static_cast<double>(emitted) >= budget * 0.99) break;
                throw ConfigError("mix: cannot meet token_budget within 1% tolerance");
            }
            continue;
        }
        reject_streak = 0;
        emitted += doc.token_count;
        result.accounting.per_source_tokens[src.name] += doc.token_count;
        result.records.push_back(std::move(doc));
    }

    result.accounting.emitted_tokens = emitted;
    result.accounting.emitted_records = result.records.size();
    return result;
}

PackResult pack_sequences(const std::vector<MixDoc>& records, std::uint64_t max_len) {
    if (max_len < 2) {
        throw ConfigError("pack: max_len must be at least 2");
    }

    PackResult result;
    PackedSequence current;
    std::uint64_t next_seq = 0;

    auto flush = [&] {
        if (current.record_indices.empty()) return;
        current.seq_id = next_seq++;
        result.sequences.push_back(std::move(current));
        current = PackedSequence{};
    };

    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::uint64_t cost = records[i].token_count + 1;  // + document separator
        if (cost > max_len) {
            result.drops.push_back({i, records[i].token_count, "exceeds_context"});
            continue;
        }
        if (current.token_count + cost > max_len) flush();
        current.record_indices.push_back(i);
        current.token_count += cost;
    }
    flush();
    return result;
}

}  // namespace sltrans
