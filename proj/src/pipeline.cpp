#include "sltrans/pipeline.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sltrans/digest.hpp"
#include "sltrans/errors.hpp"
#include "sltrans/irnorm.hpp"
#include "sltrans/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sltrans {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream ss(s);
    std::string part;
    while (ss >> part) parts.push_back(part);
    return parts;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                    : comma - pos);
        std::size_t b = part.find_first_not_of(" \t");
        if (b != std::string::npos) {
            std::size_t e = part.find_last_not_of(" \t");
            parts.push_back(part.substr(b, e - b + 1));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return parts;
}

json sample_row(const SourceSample& s) {
    return {{"id", s.id},
            {"language", std::string(language_name(s.language))},
            {"byte_len", s.byte_len},
            {"origin", s.origin},
            {"path", s.path},
            {"text", s.text}};
}

SourceSample sample_from_row(const json& row) {
    SourceSample s;
    s.id = row.at("id").get<std::string>();
    auto lang = language_from_name(row.at("language").get<std::string>());
    if (!lang) throw IoError("samples.jsonl: unknown language in row");
    s.language = *lang;
    s.byte_len = row.at("byte_len").get<std::uint64_t>();
    s.origin = row.at("origin").get<std::string>();
    s.path = row.at("path").get<std::string>();
    s.text = row.at("text").get<std::string>();
    return s;
}

}  // namespace

Pipeline::Pipeline(Config config, fs::path out_dir)
    : config_(std::move(config)), out_(std::move(out_dir)) {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec || !fs::is_directory(out_)) {
        throw IoError("cannot create output directory " + out_.string());
    }
}

std::uint64_t Pipeline::root_seed() const { return config_.get_u64("run.seed"); }

DedupParams Pipeline::dedup_params() const {
    DedupParams params;
    params.shingle_w = config_.get_u64("dedup.shingle_w");
    params.k = config_.get_u64("dedup.k");
    params.bands = config_.get_u64("dedup.bands");
    params.rows = config_.get_u64("dedup.rows");
    params.threshold = config_.get_double("dedup.threshold");
    params.seed = config_.has("dedup.seed") ? config_.get_u64("dedup.seed")
                                            : splitmix64(root_seed() ^ 0x6465647570ULL);
    return params;
}

MixSpec Pipeline::mix_spec() const {
    MixSpec spec;
    spec.mode = *mix_mode_from_name(config_.get_string("mix.mode"));
    spec.token_budget = config_.get_u64("mix.token_budget");
    spec.opt_level_ratio = config_.get_double("mix.opt_level_ratio");
    spec.seed = config_.has("mix.seed") ? config_.get_u64("mix.seed")
                                        : splitmix64(root_seed() ^ 0x6d6978ULL);
    for (const auto& [key, value] : config_.resolved()) {
        if (key.rfind("mix.weight.", 0) == 0 && !value.empty()) {
            spec.source_weights[key.substr(sizeof("mix.weight.") - 1)] =
                config_.get_double(key);
        }
    }
    return spec;
}

SentinelScheme Pipeline::sentinel_scheme() const {
    return SentinelScheme{config_.get_string("pack.sentinel_prefix")};
}

std::shared_ptr<const Tokenizer> Pipeline::tokenizer() const {
    if (!tokenizer_) {
        tokenizer_ = make_tokenizer(config_.get_string("tokenizer.name"),
                                    config_.get_string("tokenizer.path"));
    }
    return tokenizer_;
}

std::vector<Language> Pipeline::selected_languages() const {
    const std::string csv = config_.get_string("ingest.languages");
    if (csv.empty()) {
        return std::vector<Language>(std::begin(kAllLanguages), std::end(kAllLanguages));
    }
    std::vector<Language> langs;
    for (const std::string& name : split_csv(csv)) {
        auto lang = language_from_name(name);
        if (!lang) throw ConfigError("ingest.languages: unknown language " + name);
        if (std::find(langs.begin(), langs.end(), *lang) == langs.end()) {
            langs.push_back(*lang);
        }
    }
    return langs;
}

FrontendSpec Pipeline::frontend_spec(Language lang) const {
    FrontendSpec spec = frontend_for(lang);
    spec.timeout_s = config_.get_double("compile.timeout_s");
    const std::string key = std::string(language_key(lang));
    const std::string base = "frontend." + key + ".";
    if (config_.has(base + "tool")) spec.tool = config_.get_string(base + "tool");
    if (config_.has(base + "timeout_s")) spec.timeout_s = config_.get_double(base + "timeout_s");
    if (config_.has(base + "args")) {
        spec.argv_template = split_ws(config_.get_string(base + "args"));
    }
    if (config_.has(base + "optflags.size")) {
        spec.optflags_by_level[OptLevel::size] =
            split_ws(config_.get_string(base + "optflags.size"));
    }
    if (config_.has(base + "optflags.perf")) {
        spec.optflags_by_level[OptLevel::perf] =
            split_ws(config_.get_string(base + "optflags.perf"));
    }
    if (config_.has("compile.pinned_target." + key)) {
        spec.pinned_target = split_ws(config_.get_string("compile.pinned_target." + key));
    }
    return spec;
}

std::vector<OptLevel> Pipeline::selected_levels() const {
    const std::string levels = config_.get_string("compile.levels");
    if (levels == "size") return {OptLevel::size};
    if (levels == "perf") return {OptLevel::perf};
    return {OptLevel::size, OptLevel::perf};
}

json Pipeline::run_config_event() const {
    json snapshot = json::object();
    for (const auto& [key, value] : config_.resolved()) snapshot[key] = value;
    json event = {{"event", "run_config"},
                  {"run_id", sha256_hex(snapshot.dump()).substr(0, 16)},
                  {"seed", root_seed()},
                  {"config", snapshot}};
    return event;
}

std::map<Language, std::optional<ToolInfo>> Pipeline::probe_requested_tools(
    const std::vector<Language>& languages) const {
    std::map<Language, std::optional<ToolInfo>> tools;
    for (Language lang : languages) {
        tools[lang] = probe_tool(frontend_spec(lang));
    }
    return tools;
}

json Pipeline::host_event(const std::map<Language, std::optional<ToolInfo>>& tools) const {
    utsname uts{};
    uname(&uts);
    json tool_map = json::object();
    for (const auto& [lang, info] : tools) {
        const std::string key = std::string(language_key(lang));
        if (info) {
            tool_map[key] = {{"tool", frontend_spec(lang).tool},
                             {"path", info->path},
                             {"version", info->version}};
        } else {
            tool_map[key] = nullptr;
        }
    }
    return {{"event", "host"},
            {"platform", {{"sysname", uts.sysname},
                          {"release", uts.release},
                          {"machine", uts.machine}}},
            {"tools", tool_map}};
}

void Pipeline::emit(json event) { stage_events_.add(std::move(event)); }

void Pipeline::flush_stage_events() {
    if (in_run_all_) {
        for (const json& event : stage_events_.events()) run_manifest_.add(event);
    } else {
        stage_events_.append_to(out_ / "manifest.jsonl");
    }
    stage_events_ = Manifest{};
}

void Pipeline::ingest_stage() {
    const std::string root = config_.get_string("ingest.root");
    if (root.empty()) throw ConfigError("ingest.root is not set");

    ExtensionOverrides overrides;
    for (const auto& [key, value] : config_.resolved()) {
        if (key.rfind("ingest.ext.", 0) != 0) continue;
        const std::string ext = key.substr(sizeof("ingest.ext.") - 1);
        if (value.empty() || value == "none") {
            overrides[ext] = std::nullopt;
        } else {
            overrides[ext] = language_from_name(value);
        }
    }

    if (!in_run_all_ && !fs::exists(out_ / "manifest.jsonl")) {
        emit(run_config_event());
    }

    ingest_result_ = ingest_dir(root, overrides, selected_languages(),
                                config_.get_string("ingest.origin"));

    std::vector<json> sample_rows;
    for (const SourceSample& s : ingest_result_->samples) {
        sample_rows.push_back(sample_row(s));
        emit({{"event", "ingest"},
              {"id", s.id},
              {"language", std::string(language_name(s.language))},
              {"path", s.path},
              {"byte_len", s.byte_len},
              {"origin", s.origin}});
    }
    std::vector<json> skip_rows;
    for (const SkipRecord& skip : ingest_result_->skips) {
        skip_rows.push_back({{"path", skip.path}, {"reason", skip.reason}});
        emit({{"event", "skip"}, {"path", skip.path}, {"reason", skip.reason}});
    }
    for (const EncodingFix& fix : ingest_result_->encoding_fixes) {
        emit({{"event", "encoding_fix"},
              {"path", fix.path},
              {"id", fix.id},
              {"replaced_sequences", fix.replaced_sequences}});
    }

    write_jsonl(out_ / "samples.jsonl", sample_rows);
    write_jsonl(out_ / "skips.jsonl", skip_rows);
    flush_stage_events();
}

void Pipeline::require_loaded_samples() {
    if (ingest_result_) return;
    IngestResult loaded;
    for (const json& row : read_jsonl(out_ / "samples.jsonl")) {
        loaded.samples.push_back(sample_from_row(row));
    }
    ingest_result_ = std::move(loaded);
}

void Pipeline::dedup_stage() {
    require_loaded_samples();
    const DedupParams params = dedup_params();
    emit({{"event", "dedup_params"},
          {"shingle_w", params.shingle_w},
          {"k", params.k},
          {"bands", params.bands},
          {"rows", params.rows},
          {"threshold", params.threshold},
          {"seed", params.seed}});

    dedup_result_ = dedup(ingest_result_->samples, params);

    std::vector<json> cluster_rows;
    for (const ClusterAssignment& cluster : dedup_result_->clusters) {
        json row = {{"cluster_id", cluster.cluster_id},
                    {"canonical_id", cluster.canonical_id},
                    {"member_ids", cluster.member_ids}};
        cluster_rows.push_back(row);
        emit({{"event", "cluster"},
              {"cluster_id", cluster.cluster_id},
              {"canonical_id", cluster.canonical_id},
              {"member_ids", cluster.member_ids}});
    }
    std::vector<json> retained_rows;
    for (const SourceSample& s : dedup_result_->retained) {
        retained_rows.push_back({{"id", s.id}, {"path", s.path}});
    }
    for (const DedupDrop& drop : dedup_result_->drops) {
        emit({{"event", "dedup_drop"},
              {"id", drop.id},
              {"path", drop.path},
              {"cluster_id", drop.cluster_id}});
    }

    write_jsonl(out_ / "clusters.jsonl", cluster_rows);
    write_jsonl(out_ / "retained.jsonl", retained_rows);
    flush_stage_events();
}

void Pipeline::require_loaded_retained() {
    if (dedup_result_) return;
    require_loaded_samples();
    DedupResult loaded;
    std::map<std::pair<std::string, std::string>, const SourceSample*> by_key;
    for (const SourceSample& s : ingest_result_->samples) {
        by_key[{s.id, s.path}] = &s;
    }
    for (const json& row : read_jsonl(out_ / "retained.jsonl")) {
        auto it = by_key.find({row.at("id").get<std::string>(),
                               row.at("path").get<std::string>()});
        if (it == by_key.end()) {
            throw IoError("retained.jsonl references a sample missing from samples.jsonl");
        }
        loaded.retained.push_back(*it->second);
    }
    dedup_result_ = std::move(loaded);
}

void Pipeline::compile_stage() {
    require_loaded_retained();
    const std::vector<OptLevel> levels = selected_levels();

    // Languages actually present among retained samples, in enum order.
    std::vector<Language> langs;
    for (const SourceSample& s : dedup_result_->retained) {
        if (std::find(langs.begin(), langs.end(), s.language) == langs.end()) {
            langs.push_back(s.language);
        }
    }
    std::sort(langs.begin(), langs.end());

    if (!tools_) tools_ = probe_requested_tools(langs);
    bool any_tool = false;
    for (Language lang : langs) {
        if (!tools_->count(lang)) {
            (*tools_)[lang] = probe_tool(frontend_spec(lang));
        }
        const std::optional<ToolInfo>& info = tools_->at(lang);
        const FrontendSpec spec = frontend_spec(lang);
        if (info) {
            any_tool = true;
            emit({{"event", "toolchain"},
                  {"language", std::string(language_name(lang))},
                  {"tool", spec.tool},
                  {"available", true},
                  {"path", info->path},
                  {"version", info->version}});
        } else {
            emit({{"event", "toolchain"},
                  {"language", std::string(language_name(lang))},
                  {"tool", spec.tool},
                  {"available", false}});
            std::cerr << "[sltrans] frontend for " << language_name(lang) << " (" << spec.tool
                      << ") not found; language disabled for this run\n";
        }
    }
    if (!langs.empty() && !any_tool) {
        throw NoToolchainError("no usable frontend toolchain for any requested language");
    }

    // Sorted work list; results land at their work index, so the output
    // order is independent of scheduling.
    std::vector<const SourceSample*> sorted_samples;
    for (const SourceSample& s : dedup_result_->retained) sorted_samples.push_back(&s);
    std::sort(sorted_samples.begin(), sorted_samples.end(),
              [](const SourceSample* a, const SourceSample* b) { return a->id < b->id; });

    struct WorkItem {
        const SourceSample* sample;
        OptLevel level;
        FrontendSpec spec;
        bool tool_available;
    };
    std::vector<WorkItem> work;
    for (const SourceSample* sample : sorted_samples) {
        FrontendSpec spec = frontend_spec(sample->language);
        const bool available = tools_->at(sample->language).has_value();
        for (OptLevel level : levels) {
            if (!spec.supports(level)) continue;
            work.push_back({sample, level, spec, available});
        }
    }

    std::vector<CompileOutcome> results(work.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= work.size()) return;
            try {
                if (!work[i].tool_available) {
                    results[i].sample_id = work[i].sample->id;
                    results[i].opt_level = work[i].level;
                    results[i].status = CompileStatus::tool_missing;
                } else {
                    results[i] = compile_to_ir(*work[i].sample, work[i].spec, work[i].level);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::uint64_t jobs = config_.get_u64("compile.jobs");
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<std::uint64_t>(jobs, std::max<std::size_t>(work.size(), 1));
    std::vector<std::thread> threads;
    for (std::uint64_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::vector<json> outcome_rows;
    std::vector<json> timing_rows;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const CompileOutcome& outcome = results[i];
        const std::string language(language_name(work[i].sample->language));
        json row = {{"sample_id", outcome.sample_id},
                    {"language", language},
                    {"level", std::string(opt_level_name(outcome.opt_level))},
                    {"status", std::string(compile_status_name(outcome.status))},
                    {"stderr_excerpt", outcome.stderr_excerpt}};
        if (outcome.status == CompileStatus::ok) row["ir"] = outcome.ir_text;
        outcome_rows.push_back(std::move(row));
        timing_rows.push_back({{"sample_id", outcome.sample_id},
                               {"level", std::string(opt_level_name(outcome.opt_level))},
                               {"wall_ms", outcome.wall_ms}});

        json event = {{"event", "compile"},
                      {"id", outcome.sample_id},
                      {"language", language},
                      {"level", std::string(opt_level_name(outcome.opt_level))},
                      {"status", std::string(compile_status_name(outcome.status))}};
        if (outcome.status != CompileStatus::ok && !outcome.stderr_excerpt.empty()) {
            event["stderr_excerpt"] = outcome.stderr_excerpt;
        }
        emit(std::move(event));
    }

    outcomes_.emplace();
    outcomes_->reserve(results.size());
    for (CompileOutcome& outcome : results) outcomes_->push_back(std::move(outcome));

    write_jsonl(out_ / "outcomes.jsonl", outcome_rows);
    write_jsonl(out_ / "timings.jsonl", timing_rows);
    flush_stage_events();
}

void Pipeline::require_loaded_outcomes() {
    if (outcomes_) return;
    std::vector<CompileOutcome> loaded;
    for (const json& row : read_jsonl(out_ / "outcomes.jsonl")) {
        CompileOutcome outcome;
        outcome.sample_id = row.at("sample_id").get<std::string>();
        outcome.opt_level = *opt_level_from_name(row.at("level").get<std::string>());
        const std::string status = row.at("status").get<std::string>();
        if (status == "ok") {
            outcome.status = CompileStatus::ok;
            outcome.ir_text = row.at("ir").get<std::string>();
        } else if (status == "timeout") {
            outcome.status = CompileStatus::timeout;
        } else if (status == "tool_missing") {
            outcome.status = CompileStatus::tool_missing;
        } else {
            outcome.status = CompileStatus::compile_error;
        }
        outcome.stderr_excerpt = row.value("stderr_excerpt", "");
        loaded.push_back(std::move(outcome));
    }
    outcomes_ = std::move(loaded);
}

void Pipeline::normalize_stage() {
    require_loaded_outcomes();
    require_loaded_retained();

    std::map<std::string, const SourceSample*> by_id;
    for (const SourceSample& s : dedup_result_->retained) by_id[s.id] = &s;

    const auto tok = tokenizer();
    const std::uint64_t max_lines = config_.get_u64("filter.max_lines");
    emit({{"event", "normalize_params"},
          {"tokenizer", tok->name()},
          {"max_lines", max_lines}});

    artifacts_.emplace();
    artifact_rows_.clear();
    for (const CompileOutcome& outcome : *outcomes_) {
        if (outcome.status != CompileStatus::ok) continue;
        auto sample_it = by_id.find(outcome.sample_id);
        if (sample_it == by_id.end()) {
            throw IoError("outcome references sample id missing from retained set: " +
                          outcome.sample_id);
        }
        const SourceSample& sample = *sample_it->second;

        IRArtifact artifact = make_artifact(outcome.sample_id, outcome.opt_level,
                                            outcome.ir_text, sample.text, *tok);
        const std::string language(language_name(sample.language));
        const std::string level(opt_level_name(outcome.opt_level));

        json row = {{"sample_id", artifact.sample_id},
                    {"language", language},
                    {"level", level},
                    {"code_line_count", artifact.code_line_count}};
        json event = {{"event", "normalize"},
                      {"id", artifact.sample_id},
                      {"language", language},
                      {"level", level},
                      {"code_line_count", artifact.code_line_count}};

        bool keep = false;
        std::string drop_reason;
        if (artifact.code_line_count == 0) {
            drop_reason = "empty_after_normalize";
        } else {
            row["ir_token_count"] = artifact.ir_token_count;
            row["src_token_count"] = artifact.src_token_count;
            row["length_multiplier"] = artifact.length_multiplier;
            event["ir_token_count"] = artifact.ir_token_count;
            event["src_token_count"] = artifact.src_token_count;
            event["length_multiplier"] = artifact.length_multiplier;
            keep = apply_length_filter(artifact.code_line_count, max_lines);
            if (!keep) drop_reason = "too_long";
        }
        row["keep"] = keep;
        event["keep"] = keep;
        if (!keep) {
            row["drop_reason"] = drop_reason;
            event["drop_reason"] = drop_reason;
        }
        if (keep) {
            row["ir"] = artifact.normalized_ir;
            artifacts_->push_back(std::move(artifact));
        }
        artifact_rows_.push_back(std::move(row));
        emit(std::move(event));
    }

    write_jsonl(out_ / "artifacts.jsonl", artifact_rows_);
    flush_stage_events();
}

void Pipeline::require_loaded_artifacts() {
    if (artifacts_) return;
    std::vector<IRArtifact> loaded;
    for (const json& row : read_jsonl(out_ / "artifacts.jsonl")) {
        if (!row.value("keep", false)) continue;
        IRArtifact artifact;
        artifact.sample_id = row.at("sample_id").get<std::string>();
        artifact.opt_level = *opt_level_from_name(row.at("level").get<std::string>());
        artifact.normalized_ir = row.at("ir").get<std::string>();
        artifact.code_line_count = row.at("code_line_count").get<std::uint64_t>();
        artifact.ir_token_count = row.at("ir_token_count").get<std::uint64_t>();
        artifact.src_token_count = row.at("src_token_count").get<std::uint64_t>();
        artifact.length_multiplier = row.at("length_multiplier").get<double>();
        loaded.push_back(std::move(artifact));
    }
    artifacts_ = std::move(loaded);
}

void Pipeline::pack_stage() {
    require_loaded_artifacts();
    require_loaded_retained();

    const auto tok = tokenizer();
    const SentinelScheme scheme = sentinel_scheme();
    const MixSpec spec = mix_spec();

    std::map<std::string, const SourceSample*> by_id;
    for (const SourceSample& s : dedup_result_->retained) by_id[s.id] = &s;

    // Kept artifacts in (sample_id, level) order; directions alternate over
    // the sorted sample ids.
    std::vector<const IRArtifact*> kept;
    for (const IRArtifact& a : *artifacts_) kept.push_back(&a);
    std::sort(kept.begin(), kept.end(), [](const IRArtifact* a, const IRArtifact* b) {
        if (a->sample_id != b->sample_id) return a->sample_id < b->sample_id;
        return a->opt_level < b->opt_level;
    });

    std::map<std::string, Direction> direction_of;
    std::size_t sample_pos = 0;
    for (const IRArtifact* a : kept) {
        if (!direction_of.count(a->sample_id)) {
            direction_of[a->sample_id] = sample_pos++ % 2 == 0 ? Direction::source_first
                                                               : Direction::ir_first;
        }
    }

    std::vector<PairedPoolEntry> paired_pool;
    std::vector<MixDoc> ir_pool;
    for (const IRArtifact* artifact : kept) {
        auto sample_it = by_id.find(artifact->sample_id);
        if (sample_it == by_id.end()) {
            throw IoError("artifact references sample id missing from retained set: " +
                          artifact->sample_id);
        }
        const SourceSample& sample = *sample_it->second;
        PairRecord record = format_pair(sample, *artifact,
                                        direction_of.at(artifact->sample_id), scheme, *tok);
        if (paired_pool.empty() || paired_pool.back().sample_id != artifact->sample_id) {
            paired_pool.push_back({artifact->sample_id, {}});
        }
        paired_pool.back().by_level.emplace(artifact->opt_level, std::move(record));

        MixDoc ir_doc;
        ir_doc.kind = "ir";
        ir_doc.sample_id = artifact->sample_id;
        ir_doc.language = sample.language;
        ir_doc.opt_level = artifact->opt_level;
        ir_doc.payload = artifact->normalized_ir;
        ir_doc.token_count = artifact->ir_token_count;
        ir_pool.push_back(std::move(ir_doc));
    }

    std::map<std::string, std::vector<MixDoc>> mono_pools;
    {
        std::vector<const SourceSample*> sorted_samples;
        for (const SourceSample& s : dedup_result_->retained) sorted_samples.push_back(&s);
        std::sort(sorted_samples.begin(), sorted_samples.end(),
                  [](const SourceSample* a, const SourceSample* b) { return a->id < b->id; });
        for (const SourceSample* s : sorted_samples) {
            MixDoc doc;
            doc.kind = "source";
            doc.sample_id = s->id;
            doc.language = s->language;
            doc.payload = s->text;
            doc.token_count = tok->count(s->text);
            mono_pools[std::string(language_name(s->language))].push_back(std::move(doc));
        }
    }

    emit({{"event", "mix_params"},
          {"mode", std::string(mix_mode_name(spec.mode))},
          {"token_budget", spec.token_budget},
          {"opt_level_ratio", spec.opt_level_ratio},
          {"seed", spec.seed},
          {"sentinel_scheme", scheme.describe()},
          {"paired_pool", paired_pool.size()},
          {"ir_pool", ir_pool.size()},
          {"monolingual_pools", mono_pools.size()}});

    MixResult mix = mix_corpus(paired_pool, mono_pools, ir_pool, spec);

    std::vector<json> pair_rows;
    for (std::size_t i = 0; i < mix.records.size(); ++i) {
        const MixDoc& doc = mix.records[i];
        json row = {{"record_id", i},
                    {"kind", doc.kind},
                    {"sample_id", doc.sample_id},
                    {"language", std::string(language_name(doc.language))},
                    {"payload", doc.payload},
                    {"token_count", doc.token_count}};
        row["opt_level"] = doc.opt_level
                               ? json(std::string(opt_level_name(*doc.opt_level)))
                               : json(nullptr);
        row["direction"] = doc.direction
                               ? json(std::string(direction_name(*doc.direction)))
                               : json(nullptr);
        pair_rows.push_back(std::move(row));
    }
    write_jsonl(out_ / "pairs.jsonl", pair_rows);

    json per_source = json::object();
    for (const auto& [name, tokens] : mix.accounting.per_source_tokens) {
        per_source[name] = tokens;
    }
    json accounting = {{"mode", mix.accounting.mode},
                       {"budget", mix.accounting.budget},
                       {"emitted_tokens", mix.accounting.emitted_tokens},
                       {"emitted_records", mix.accounting.emitted_records},
                       {"per_source_tokens", per_source}};
    {
        std::ofstream out(out_ / "accounting.json", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write accounting.json");
        out << accounting.dump(2) << '\n';
    }
    json acct_event = accounting;
    acct_event["event"] = "mix_accounting";
    emit(std::move(acct_event));

    const std::uint64_t max_len = config_.get_u64("pack.max_len");
    PackResult packed = pack_sequences(mix.records, max_len);

    std::vector<json> packed_rows;
    std::uint64_t packed_record_tokens = 0;
    for (const PackedSequence& seq : packed.sequences) {
        packed_rows.push_back({{"seq_id", seq.seq_id},
                               {"record_ids", seq.record_indices},
                               {"token_count", seq.token_count}});
        for (std::uint64_t idx : seq.record_indices) {
            packed_record_tokens += mix.records[idx].token_count;
        }
    }
    write_jsonl(out_ / "packed.jsonl", packed_rows);

    for (const PackDrop& drop : packed.drops) {
        emit({{"event", "pack_drop"},
              {"record_id", drop.record_index},
              {"token_count", drop.token_count},
              {"reason", drop.reason}});
    }
    emit({{"event", "pack_summary"},
          {"max_len", max_len},
          {"sequences", packed.sequences.size()},
          {"packed_records", mix.records.size() - packed.drops.size()},
          {"dropped_records", packed.drops.size()},
          {"packed_record_tokens", packed_record_tokens}});
    flush_stage_events();
}

void Pipeline::stats_stage() {
    std::vector<json> events;
    if (in_run_all_) {
        events = run_manifest_.events();
        for (const json& event : stage_events_.events()) events.push_back(event);
    } else {
        events = read_jsonl(out_ / "manifest.jsonl");
    }
    const StatsReport report = compute_stats(events);

    {
        std::ofstream out(out_ / "stats.txt", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write stats.txt");
        out << render_stats_table(report);
    }
    {
        std::ofstream out(out_ / "stats.json", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write stats.json");
        out << stats_to_json(report).dump(2) << '\n';
    }

    if (in_run_all_) {
        for (const LanguageStats& row : report.rows) {
            emit({{"event", "language_stats"},
                  {"language", row.language},
                  {"frontend", row.frontend},
                  {"avg_len_multiplier", row.avg_len_multiplier},
                  {"samples_size", row.samples_size},
                  {"samples_perf", row.samples_perf}});
        }
        emit({{"event", "stats_totals"},
              {"samples_size", report.total_size},
              {"samples_perf", report.total_perf}});
        flush_stage_events();
    }
}

void Pipeline::run_all() {
    config_.validate();
    in_run_all_ = true;
    run_manifest_ = Manifest{};

    // Fail fast on a toolchain-free machine before doing any work.
    const std::vector<Language> requested = selected_languages();
    tools_ = probe_requested_tools(requested);
    bool any_tool = false;
    for (const auto& [lang, info] : *tools_) {
        if (info) any_tool = true;
    }
    if (!any_tool) {
        throw NoToolchainError("no usable frontend toolchain on this machine");
    }

    emit(run_config_event());
    emit(host_event(*tools_));
    flush_stage_events();

    ingest_stage();
    dedup_stage();
    compile_stage();
    normalize_stage();
    pack_stage();

    // Conservation summary over the in-memory results.
    {
        std::map<std::string, std::map<std::string, std::uint64_t>> per_level;
        for (const CompileOutcome& outcome : *outcomes_) {
            per_level[std::string(opt_level_name(outcome.opt_level))]
                     [std::string(compile_status_name(outcome.status))] += 1;
        }
        json per_level_json = json::object();
        for (const auto& [level, counts] : per_level) {
            json c = json::object();
            std::uint64_t attempted = 0;
            for (const auto& [status, count] : counts) {
                c[status] = count;
                attempted += count;
            }
            c["attempted"] = attempted;
            per_level_json[level] = c;
        }
        std::uint64_t filter_kept = 0;
        std::uint64_t filter_dropped = 0;
        for (const json& row : artifact_rows_) {
            if (row.value("keep", false)) ++filter_kept; else ++filter_dropped;
        }
        emit({{"event", "summary"},
              {"ingested", ingest_result_->samples.size()},
              {"skips", ingest_result_->skips.size()},
              {"dedup_drops", dedup_result_->drops.size()},
              {"retained", dedup_result_->retained.size()},
              {"compiles", per_level_json},
              {"filter_kept", filter_kept},
              {"filter_dropped", filter_dropped}});
        flush_stage_events();
    }

    stats_stage();
    run_manifest_.write(out_ / "manifest.jsonl");
    in_run_all_ = false;
}

}  // namespace sltrans
