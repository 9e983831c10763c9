#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sltrans/config.hpp"
#include "sltrans/errors.hpp"
#include "sltrans/pipeline.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::string root;
    std::string languages;
    std::string opt_levels;
    std::uint64_t jobs = 0;
    std::uint64_t seed = 0;
    bool jobs_set = false;
    bool seed_set = false;
};

sltrans::Config build_config(const CliOptions& opts) {
    sltrans::Config config;
    if (!opts.config_path.empty()) {
        config = sltrans::Config::load(opts.config_path);
    }
    if (!opts.root.empty()) config.set("ingest.root", opts.root);
    if (!opts.languages.empty()) config.set("ingest.languages", opts.languages);
    if (!opts.opt_levels.empty()) config.set("compile.levels", opts.opt_levels);
    if (opts.jobs_set) config.set("compile.jobs", std::to_string(opts.jobs));
    if (opts.seed_set) config.set("run.seed", std::to_string(opts.seed));
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sltrans: compile self-contained sources to LLVM IR and emit "
                 "paired source<->IR training corpora"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "flat key=value config file");
    app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    app.add_option("--root", opts.root, "source corpus directory (ingest.root)");
    app.add_option("--languages", opts.languages, "comma-separated language filter");
    app.add_option("--opt-levels", opts.opt_levels, "size, perf or both")
        ->check(CLI::IsMember({"size", "perf", "both"}));
    auto* jobs_opt = app.add_option("--jobs", opts.jobs, "compile worker pool size");
    auto* seed_opt = app.add_option("--seed", opts.seed, "root seed (all randomness)");

    auto* cmd_run = app.add_subcommand("run", "full pipeline: ingest through stats");
    auto* cmd_ingest = app.add_subcommand("ingest", "discover and fingerprint sources");
    auto* cmd_dedup = app.add_subcommand("dedup", "MinHash near-duplicate clustering");
    auto* cmd_compile = app.add_subcommand("compile", "lower retained sources to IR");
    auto* cmd_normalize = app.add_subcommand("normalize", "clean IR and apply the length filter");
    auto* cmd_pack = app.add_subcommand("pack", "mix the corpus and pack sequences");
    auto* cmd_stats = app.add_subcommand("stats", "render the per-language report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    opts.jobs_set = jobs_opt->count() > 0;
    opts.seed_set = seed_opt->count() > 0;

    try {
        sltrans::Config config = build_config(opts);
        config.validate();
        sltrans::Pipeline pipeline(std::move(config), opts.out_dir);

        if (cmd_run->parsed()) {
            pipeline.run_all();
        } else if (cmd_ingest->parsed()) {
            pipeline.ingest_stage();
        } else if (cmd_dedup->parsed()) {
            pipeline.dedup_stage();
        } else if (cmd_compile->parsed()) {
            pipeline.compile_stage();
        } else if (cmd_normalize->parsed()) {
            pipeline.normalize_stage();
        } else if (cmd_pack->parsed()) {
            pipeline.pack_stage();
        } else if (cmd_stats->parsed()) {
            pipeline.stats_stage();
        }
        return 0;
    } catch (const sltrans::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const sltrans::NoToolchainError& e) {
        std::cerr << "toolchain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
