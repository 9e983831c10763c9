#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sltrans {

struct RunResult {
    int exit_code{-1};
    bool timed_out{false};
    std::string stderr_capture;  // capped at 4 KiB
    std::uint64_t wall_ms{0};
};

// Runs `argv` (argv[0] must be an absolute executable path) with cwd set to
// `workdir` and a minimal environment (PATH from the parent, HOME and TMPDIR
// pointed at the workdir, LC_ALL=C). The child gets its own process group;
// on timeout the whole group is killed.
RunResult run_command(const std::vector<std::string>& argv,
                      const std::filesystem::path& workdir, double timeout_s);

// PATH search. Absolute/relative paths containing '/' are checked directly.
std::optional<std::filesystem::path> find_executable(const std::string& name);

// RAII temporary directory under the system temp root.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace sltrans
