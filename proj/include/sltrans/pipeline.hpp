#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sltrans/config.hpp"
#include "sltrans/dedup.hpp"
#include "sltrans/frontends.hpp"
#include "sltrans/ingest.hpp"
#include "sltrans/manifest.hpp"
#include "sltrans/packer.hpp"
#include "sltrans/tokenizer.hpp"
#include "sltrans/types.hpp"

namespace sltrans {

// None of the requested languages has a working frontend. Exit code 2.
struct NoToolchainError : std::runtime_error {
    explicit NoToolchainError(const std::string& what) : std::runtime_error(what) {}
};

// Stage sequencing and persistence. Stages either run back to back in one
// process (`run`) or individually, resuming from the files the previous
// stage left under the output directory. All artifacts that the determinism
// contract covers (manifest.jsonl, pairs.jsonl, packed.jsonl) are free of
// wall-clock data; timings go to timings.jsonl.
class Pipeline {
public:
    Pipeline(Config config, std::filesystem::path out_dir);

    void ingest_stage();
    void dedup_stage();
    void compile_stage();
    void normalize_stage();
    void pack_stage();
    void stats_stage();

    // Full pipeline with a fresh manifest. Throws ConfigError /
    // NoToolchainError / IoError for the caller to map to exit codes.
    void run_all();

    const Config& config() const { return config_; }
    const std::filesystem::path& out_dir() const { return out_; }

    // Effective parameters (config plus derived seeds).
    DedupParams dedup_params() const;
    MixSpec mix_spec() const;
    SentinelScheme sentinel_scheme() const;
    std::shared_ptr<const Tokenizer> tokenizer() const;
    std::vector<Language> selected_languages() const;
    FrontendSpec frontend_spec(Language lang) const;
    std::uint64_t root_seed() const;

private:
    void require_loaded_samples();
    void require_loaded_retained();
    void require_loaded_outcomes();
    void require_loaded_artifacts();

    nlohmann::json run_config_event() const;
    nlohmann::json host_event(const std::map<Language, std::optional<ToolInfo>>& tools) const;
    std::map<Language, std::optional<ToolInfo>> probe_requested_tools(
        const std::vector<Language>& languages) const;
    std::vector<OptLevel> selected_levels() const;

    void emit(nlohmann::json event);
    void flush_stage_events();

    Config config_;
    std::filesystem::path out_;
    mutable std::shared_ptr<const Tokenizer> tokenizer_;

    bool in_run_all_{false};
    Manifest run_manifest_;     // run_all accumulates here
    Manifest stage_events_;     // standalone stages append to manifest.jsonl

    std::optional<IngestResult> ingest_result_;
    std::optional<DedupResult> dedup_result_;
    std::optional<std::vector<CompileOutcome>> outcomes_;
    std::optional<std::vector<IRArtifact>> artifacts_;   // kept only
    std::vector<nlohmann::json> artifact_rows_;          // incl. dropped, for ledger
    std::optional<std::map<Language, std::optional<ToolInfo>>> tools_;
};

}  // namespace sltrans
