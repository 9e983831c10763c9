#include "sltrans/subprocess.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sltrans/errors.hpp"

namespace fs = std::filesystem;

namespace sltrans {

namespace {

constexpr std::size_t kStderrCap = 4096;

std::string read_capped(const fs::path& file) {
    std::string out;
    int fd = ::open(file.c_str(), O_RDONLY);
    if (fd < 0) return out;
    out.resize(kStderrCap);
    ssize_t total = 0;
    while (total < static_cast<ssize_t>(kStderrCap)) {
        ssize_t n = ::read(fd, out.data() + total, kStderrCap - total);
        if (n <= 0) break;
        total += n;
    }
    ::close(fd);
    out.resize(static_cast<std::size_t>(total));
    return out;
}

}  // namespace

std::optional<fs::path> find_executable(const std::string& name) {
    if (name.empty()) return std::nullopt;
    std::error_code ec;
    if (name.find('/') != std::string::npos) {
        fs::path p(name);
        if (fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0) {
            return fs::absolute(p, ec);
        }
        return std::nullopt;
    }
    const char* path_env = std::getenv("PATH");
    if (!path_env) return std::nullopt;
    std::stringstream ss{std::string(path_env)};
    std::string dir;
    while (std::getline(ss, dir, ':')) {
        if (dir.empty()) continue;
        fs::path candidate = fs::path(dir) / name;
        if (fs::is_regular_file(candidate, ec) && ::access(candidate.c_str(), X_OK) == 0) {
            return candidate;
        }
    }
    return std::nullopt;
}

RunResult run_command(const std::vector<std::string>& argv, const fs::path& workdir,
                      double timeout_s) {
    if (argv.empty()) {
        throw UsageError("run_command: empty argv");
    }

    const fs::path stderr_file = workdir / ".stderr";
    const auto start = std::chrono::steady_clock::now();

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    std::string path_var = "PATH=";
    if (const char* p = std::getenv("PATH")) path_var += p;
    std::string home_var = "HOME=" + workdir.string();
    std::string tmp_var = "TMPDIR=" + workdir.string();
    std::string lc_var = "LC_ALL=C";
    std::vector<char*> cenv = {path_var.data(), home_var.data(), tmp_var.data(),
                               lc_var.data(), nullptr};

    pid_t pid = ::fork();
    if (pid < 0) {
        throw IoError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        if (::chdir(workdir.c_str()) != 0) _exit(126);
        int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) {
            ::dup2(devnull, STDIN_FILENO);
            ::close(devnull);
        }
        int err_fd = ::open(stderr_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        if (err_fd >= 0) {
            ::dup2(err_fd, STDERR_FILENO);
            ::dup2(err_fd, STDOUT_FILENO);
            ::close(err_fd);
        }
        ::execve(cargv[0], cargv.data(), cenv.data());
        _exit(127);
    }

    ::setpgid(pid, pid);  // also from the parent, avoids the classic race

    RunResult result;
    const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(timeout_s));
    int status = 0;
    for (;;) {
        pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0 && errno != EINTR) {
            throw IoError(std::string("waitpid failed: ") + std::strerror(errno));
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }

    const auto end = std::chrono::steady_clock::now();
    result.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count());
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    result.stderr_capture = read_capped(stderr_file);
    std::error_code ec;
    fs::remove(stderr_file, ec);
    return result;
}

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "sltrans-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (::mkdtemp(buf.data()) == nullptr) {
        throw IoError(std::string("mkdtemp failed: ") + std::strerror(errno));
    }
    path_ = fs::path(buf.data());
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

}  // namespace sltrans
