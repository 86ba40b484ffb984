#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "asciitox/benchmark.hpp"
#include "asciitox/errors.hpp"

extern char** environ;

namespace asciitox {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> split_command(std::string_view cmd) {
    std::vector<std::string> argv;
    std::string cur;
    bool in_token = false;
    char quote = 0;
    for (std::size_t i = 0; i < cmd.size(); ++i) {
        const char c = cmd[i];
        if (quote) {
            if (c == quote) {
                quote = 0;
            } else if (c == '\\' && quote == '"' && i + 1 < cmd.size()) {
                cur += cmd[++i];
            } else {
                cur += c;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
            in_token = true;
        } else if (c == '\\' && i + 1 < cmd.size()) {
            cur += cmd[++i];
            in_token = true;
        } else if (c == ' ' || c == '\t' || c == '\n') {
            if (in_token) argv.push_back(std::move(cur));
            cur.clear();
            in_token = false;
        } else {
            cur += c;
            in_token = true;
        }
    }
    if (quote) throw InvalidArgument("unterminated quote in detector command");
    if (in_token) argv.push_back(std::move(cur));
    return argv;
}

bool on_path(const std::string& name) {
    if (name.find('/') != std::string::npos) return ::access(name.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    std::string_view rest = path ? path : "/usr/bin:/bin";
    while (true) {
        const auto colon = rest.find(':');
        std::string dir(rest.substr(0, colon));
        if (dir.empty()) dir = ".";
        if (::access((dir + "/" + name).c_str(), X_OK) == 0) return true;
        if (colon == std::string_view::npos) return false;
        rest.remove_prefix(colon + 1);
    }
}

struct Pipe {
    int fd[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fd, O_CLOEXEC) != 0) throw Error(std::string("pipe2: ") + std::strerror(errno));
    }
    ~Pipe() {
        close(0);
        close(1);
    }
    void close(int i) {
        if (fd[i] >= 0) ::close(fd[i]);
        fd[i] = -1;
    }
};

struct ProcessResult {
    std::string out;
    int status = 0;
    bool timed_out = false;
};

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout) {
    Pipe in, out;
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.fd[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out.fd[1], STDOUT_FILENO);

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc == ENOENT) throw ExecutableNotFound("detector executable not found: " + argv[0]);
    if (rc != 0) throw Error("posix_spawnp " + argv[0] + ": " + std::strerror(rc));
    in.close(0);
    out.close(1);
    ::fcntl(in.fd[1], F_SETFL, ::fcntl(in.fd[1], F_GETFL) | O_NONBLOCK);

    ProcessResult result;
    std::size_t written = 0;
    if (input.empty()) in.close(1);
    const auto deadline = Clock::now() + timeout;
    char buf[4096];
    while (out.fd[0] >= 0) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
        if (left <= 0) {
            result.timed_out = true;
            ::kill(pid, SIGKILL);
            break;
        }
        pollfd fds[2];
        nfds_t n = 0;
        fds[n++] = {out.fd[0], POLLIN, 0};
        if (in.fd[1] >= 0) fds[n++] = {in.fd[1], POLLOUT, 0};
        const int ready = ::poll(fds, n, static_cast<int>(left));
        if (ready < 0) {
            if (errno == EINTR) continue;
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            throw Error(std::string("poll: ") + std::strerror(errno));
        }
        if (n == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t w = ::write(in.fd[1], input.data() + written, input.size() - written);
            if (w > 0) written += static_cast<std::size_t>(w);
            if (w < 0 && errno != EAGAIN && errno != EINTR) written = input.size();  // reader went away
            if (written >= input.size()) in.close(1);
        }
        if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
            const ssize_t r = ::read(out.fd[0], buf, sizeof buf);
            if (r > 0) {
                result.out.append(buf, static_cast<std::size_t>(r));
            } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
                out.close(0);
            }
        }
    }
    while (::waitpid(pid, &result.status, 0) < 0 && errno == EINTR) {
    }
    return result;
}

Outcome run_external_item(const BenchmarkItem& item, const DetectorBinding& d, const std::vector<std::string>& argv,
                          std::vector<std::string>& warnings) {
    Outcome o;
    o.item_id = item.id;
    o.detector_id = d.id();
    std::string input = item.payload;
    if (input.empty() || input.back() != '\n') input += '\n';
    const auto start = Clock::now();
    const ProcessResult r = run_process(argv, input, d.timeout);
    o.latency_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (r.timed_out) {
        warnings.push_back("item " + item.id + ": detector timed out after " + std::to_string(d.timeout.count()) + " ms");
        return o;
    }
    if (!WIFEXITED(r.status) || WEXITSTATUS(r.status) != 0) {
        const std::string how = WIFEXITED(r.status) ? "exit code " + std::to_string(WEXITSTATUS(r.status))
                                                    : "signal " + std::to_string(WTERMSIG(r.status));
        throw ExternalProtocolError("item " + item.id + ": detector failed with " + how);
    }
    const auto v = parse_external_line(r.out);
    if (!v) throw ExternalProtocolError("item " + item.id + ": malformed detector output '" + r.out + "'");
    o.flagged_toxic = v->toxic;
    o.flagged_art = v->art;
    return o;
}

Outcome builtin_outcome(const BenchmarkItem& item, const DetectorBinding& d) {
    const auto start = Clock::now();
    const ScreenReport rep = screen(item.payload, *d.context);
    Outcome o;
    o.item_id = item.id;
    o.detector_id = d.id();
    o.flagged_toxic = rep.toxic();
    o.flagged_art = rep.art();
    o.latency_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return o;
}

void sort_by_id(std::vector<Outcome>& outcomes) {
    std::sort(outcomes.begin(), outcomes.end(), [](const Outcome& a, const Outcome& b) { return a.item_id < b.item_id; });
}

std::vector<std::string> checked_argv(const DetectorBinding& d) {
    // A detector that exits without draining stdin must not kill us with SIGPIPE.
    static const bool sigpipe_ignored = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipe_ignored;
    auto argv = split_command(d.command);
    if (argv.empty()) throw InvalidArgument("detector command is empty");
    if (!on_path(argv[0])) throw ExecutableNotFound("detector executable not found: " + argv[0]);
    return argv;
}

void check_builtin(const DetectorBinding& d) {
    if (!d.context) throw InvalidArgument("builtin detector needs a screen context");
}

}  // namespace

std::string DetectorBinding::id() const { return kind == Kind::builtin ? "builtin" : "cmd:" + command; }

DetectorBinding DetectorBinding::parse(std::string_view spec) {
    DetectorBinding d;
    if (spec == "builtin") return d;
    if (spec.substr(0, 4) == "cmd:" && spec.size() > 4) {
        d.kind = Kind::external;
        d.command = std::string(spec.substr(4));
        return d;
    }
    throw InvalidArgument("detector must be 'builtin' or 'cmd:<command>', got '" + std::string(spec) + "'");
}

std::optional<ExternalVerdict> parse_external_line(std::string_view text) {
    if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.size() != 13 || text.substr(0, 6) != "toxic=" || text.substr(7, 5) != " art=") return std::nullopt;
    const char t = text[6];
    const char a = text[12];
    if ((t != '0' && t != '1') || (a != '0' && a != '1')) return std::nullopt;
    return ExternalVerdict{t == '1', a == '1'};
}

std::vector<Outcome> run_serial(std::span<const BenchmarkItem> items, const DetectorBinding& detector,
                                std::vector<std::string>* warnings) {
    std::vector<Outcome> outcomes;
    outcomes.reserve(items.size());
    if (detector.kind == DetectorBinding::Kind::builtin) {
        check_builtin(detector);
        for (const auto& item : items) outcomes.push_back(builtin_outcome(item, detector));
    } else {
        const auto argv = checked_argv(detector);
        std::vector<std::string> local;
        for (const auto& item : items) outcomes.push_back(run_external_item(item, detector, argv, local));
        if (warnings) warnings->insert(warnings->end(), local.begin(), local.end());
    }
    sort_by_id(outcomes);
    return outcomes;
}

std::vector<Outcome> run(std::span<const BenchmarkItem> items, const DetectorBinding& detector,
                         std::vector<std::string>* warnings) {
    if (detector.parallelism < 1) throw InvalidArgument("parallelism must be at least 1");
    std::vector<Outcome> outcomes(items.size());
    if (detector.kind == DetectorBinding::Kind::builtin) {
        check_builtin(detector);
        std::vector<std::string> texts;
        texts.reserve(items.size());
        for (const auto& item : items) texts.push_back(item.payload);
        const auto start = Clock::now();
        const auto reports = screen_batch(texts, *detector.context);
        const double per_item = items.empty() ? 0.0
            : std::chrono::duration<double, std::milli>(Clock::now() - start).count() / static_cast<double>(items.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
            outcomes[i].item_id = items[i].id;
            outcomes[i].detector_id = detector.id();
            outcomes[i].flagged_toxic = reports[i].toxic();
            outcomes[i].flagged_art = reports[i].art();
            outcomes[i].latency_ms = per_item;
        }
        sort_by_id(outcomes);
        return outcomes;
    }

    const auto argv = checked_argv(detector);
    std::atomic<std::size_t> next{0};
    std::vector<std::vector<std::string>> item_warnings(items.size());
    std::exception_ptr failure;
    std::mutex failure_mu;
    const auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            {
                std::lock_guard lock(failure_mu);
                if (failure) return;
            }
            try {
                outcomes[i] = run_external_item(items[i], detector, argv, item_warnings[i]);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(detector.parallelism), items.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    if (warnings) {
        for (auto& w : item_warnings) warnings->insert(warnings->end(), w.begin(), w.end());
    }
    sort_by_id(outcomes);
    return outcomes;
}

}  // namespace asciitox
