#include "sltrans/frontends.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "sltrans/errors.hpp"
#include "sltrans/subprocess.hpp"

namespace fs = std::filesystem;

namespace sltrans {

namespace {

FrontendSpec make_spec(Language lang, std::string tool, std::vector<std::string> argv,
                       std::vector<std::string> size_flags,
                       std::optional<std::vector<std::string>> perf_flags) {
    FrontendSpec spec;
    spec.language = lang;
    spec.tool = std::move(tool);
    spec.argv_template = std::move(argv);
    spec.optflags_by_level[OptLevel::size] = std::move(size_flags);
    if (perf_flags) {
        spec.optflags_by_level[OptLevel::perf] = std::move(*perf_flags);
    }
    return spec;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

}  // namespace

const std::vector<FrontendSpec>& builtin_frontend_table() {
    static const std::vector<FrontendSpec> table = [] {
        std::vector<std::string> clang_argv = {"-S", "-emit-llvm", "{optflags}",
                                               "-o", "{output}", "{input}"};
        std::vector<FrontendSpec> t;
        t.push_back(make_spec(Language::C, "clang", clang_argv, {"-Oz"}, {{"-O3"}}));
        t.push_back(make_spec(Language::Cpp, "clang", clang_argv, {"-Oz"}, {{"-O3"}}));
        t.push_back(make_spec(Language::Python, "codon",
                              {"build", "-llvm", "{optflags}", "-o", "{output}", "{input}"},
                              {}, {{"-release"}}));
        t.push_back(make_spec(Language::Rust, "rustc",
                              {"--emit=llvm-ir", "--edition=2021", "{optflags}", "-o",
                               "{output}", "{input}"},
                              {"-C", "opt-level=z"}, {{"-C", "opt-level=3"}}));
        t.push_back(make_spec(Language::Haskell, "ghc",
                              {"-fllvm", "{optflags}", "-fforce-recomp", "-keep-llvm-files",
                               "-c", "{input}"},
                              {"-O1"}, {{"-O2"}}));
        t.push_back(make_spec(Language::Go, "gollvm", clang_argv, {"-Oz"}, {{"-O3"}}));
        t.push_back(make_spec(Language::Fortran, "flang", clang_argv, {"-Oz"}, {{"-O3"}}));
        t.push_back(make_spec(Language::D, "ldc2",
                              {"--output-ll", "{optflags}", "-of={output}", "{input}"},
                              {"-Oz"}, {{"-O3"}}));
        t.push_back(make_spec(Language::Ruby, "crystal",
                              {"build", "--emit", "llvm-ir", "{optflags}", "-o", "out",
                               "{input}"},
                              {}, {{"--release"}}));
        // Table row for Nim has no perf column: size level only.
        t.push_back(make_spec(Language::Nim, "nlvm",
                              {"c", "{optflags}", "-o:{output}", "{input}"},
                              {"-d:release", "--opt:size"}, std::nullopt));
        t.push_back(make_spec(Language::Swift, "swiftc",
                              {"-emit-ir", "{optflags}", "-o", "{output}", "{input}"},
                              {"-Osize"}, {{"-O"}}));
        t.push_back(make_spec(Language::ObjC, "clang", clang_argv, {"-Oz"}, {{"-O3"}}));
        return t;
    }();
    return table;
}

const FrontendSpec& frontend_for(Language language) {
    for (const FrontendSpec& spec : builtin_frontend_table()) {
        if (spec.language == language) return spec;
    }
    throw UsageError("no frontend spec for language");
}

std::string_view frontend_input_extension(Language language) {
    switch (language) {
        case Language::C: return "c";
        case Language::Cpp: return "cpp";
        case Language::Python: return "py";
        case Language::Rust: return "rs";
        case Language::Haskell: return "hs";
        case Language::Go: return "go";
        case Language::Fortran: return "f90";
        case Language::D: return "d";
        case Language::Ruby: return "cr";
        case Language::Nim: return "nim";
        case Language::Swift: return "swift";
        case Language::ObjC: return "m";
    }
    return "txt";
}

std::optional<fs::path> resolve_tool(const FrontendSpec& spec) {
    std::string env_name = "SLTRANS_TOOL_" + std::string(language_key(spec.language));
    if (const char* override_path = std::getenv(env_name.c_str())) {
        if (*override_path != '\0') {
            return find_executable(override_path);
        }
    }
    return find_executable(spec.tool);
}

std::optional<ToolInfo> probe_tool(const FrontendSpec& spec) {
    auto exe = resolve_tool(spec);
    if (!exe) return std::nullopt;
    ToolInfo info;
    info.path = exe->string();
    TempDir work;
    RunResult run = run_command({exe->string(), "--version"}, work.path(), 10.0);
    std::string first_line = run.stderr_capture.substr(0, run.stderr_capture.find('\n'));
    while (!first_line.empty() && (first_line.back() == '\r' || first_line.back() == ' ')) {
        first_line.pop_back();
    }
    info.version = (run.exit_code == 0 && !first_line.empty()) ? first_line : "unknown";
    return info;
}

CompileOutcome compile_to_ir(const SourceSample& sample, const FrontendSpec& spec,
                             OptLevel level) {
    if (spec.language != sample.language) {
        throw UsageError("compile_to_ir: spec/sample language mismatch");
    }

    CompileOutcome outcome;
    outcome.sample_id = sample.id;
    outcome.opt_level = level;

    auto flags_it = spec.optflags_by_level.find(level);
    if (flags_it == spec.optflags_by_level.end()) {
        outcome.status = CompileStatus::compile_error;
        outcome.stderr_excerpt = "opt level not provided by this frontend";
        return outcome;
    }

    auto exe = resolve_tool(spec);
    if (!exe) {
        outcome.status = CompileStatus::tool_missing;
        return outcome;
    }

    TempDir work;
    const std::string input_name =
        "input." + std::string(frontend_input_extension(sample.language));
    const std::string output_name = "output.ll";
    {
        std::ofstream out(work.path() / input_name, std::ios::binary);
        out.write(sample.text.data(), static_cast<std::streamsize>(sample.text.size()));
        if (!out) {
            throw IoError("cannot stage compile input in " + work.path().string());
        }
    }

    std::vector<std::string> argv;
    argv.push_back(exe->string());
    for (const std::string& part : spec.argv_template) {
        if (part == "{optflags}") {
            argv.insert(argv.end(), flags_it->second.begin(), flags_it->second.end());
            continue;
        }
        std::string expanded = replace_all(part, "{input}", input_name);
        expanded = replace_all(expanded, "{output}", output_name);
        argv.push_back(std::move(expanded));
    }
    argv.insert(argv.end(), spec.pinned_target.begin(), spec.pinned_target.end());

    RunResult run = run_command(argv, work.path(), spec.timeout_s);
    outcome.wall_ms = run.wall_ms;
    outcome.stderr_excerpt = replace_all(run.stderr_capture, work.path().string(), "<work>");

    if (run.timed_out) {
        outcome.status = CompileStatus::timeout;
        return outcome;
    }
    if (run.exit_code != 0) {
        outcome.status = CompileStatus::compile_error;
        return outcome;
    }

    // Some frontends pick their own output name; take any .ll they produced.
    fs::path produced = work.path() / output_name;
    std::error_code ec;
    if (!fs::is_regular_file(produced, ec)) {
        produced.clear();
        std::vector<fs::path> candidates;
        for (const auto& entry : fs::directory_iterator(work.path(), ec)) {
            if (entry.path().extension() == ".ll") candidates.push_back(entry.path());
        }
        std::sort(candidates.begin(), candidates.end());
        if (!candidates.empty()) produced = candidates.front();
    }
    if (produced.empty()) {
        outcome.status = CompileStatus::compile_error;
        if (outcome.stderr_excerpt.empty()) {
            outcome.stderr_excerpt = "frontend exited 0 but produced no .ll output";
        }
        return outcome;
    }

    std::ifstream in(produced, std::ios::binary);
    std::string ir((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (ir.empty()) {
        outcome.status = CompileStatus::compile_error;
        outcome.stderr_excerpt = "frontend produced an empty .ll output";
        return outcome;
    }
    outcome.status = CompileStatus::ok;
    outcome.ir_text = std::move(ir);
    return outcome;
}

}  // namespace sltrans
