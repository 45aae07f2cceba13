#include "relsy/smt/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace relsy::smt {

namespace {

struct ProcessResult {
    int exitCode = -1;
    bool timedOut = false;
    std::string out;
    std::string err;
    double wallMs = 0.0;
};

void set_nonblocking(int fd) {
    int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

// Run argv feeding `input` on stdin, capturing stdout/stderr, killing the
// child after hardTimeoutMs (0 = no limit).  Reading and writing are
// interleaved so large payloads cannot deadlock against a full pipe.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& input, long long hardTimeoutMs) {
    int inPipe[2], outPipe[2], errPipe[2];
    if (pipe(inPipe) != 0 || pipe(outPipe) != 0 || pipe(errPipe) != 0)
        throw SolverSpawnError("pipe() failed: " + std::string(strerror(errno)));

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) throw SolverSpawnError("fork() failed: " + std::string(strerror(errno)));

    if (pid == 0) {
        dup2(inPipe[0], STDIN_FILENO);
        dup2(outPipe[1], STDOUT_FILENO);
        dup2(errPipe[1], STDERR_FILENO);
        close(inPipe[0]); close(inPipe[1]);
        close(outPipe[0]); close(outPipe[1]);
        close(errPipe[0]); close(errPipe[1]);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        // exec failed; report through stderr and a distinctive exit code.
        std::string msg = "exec failed: " + argv[0] + ": " + strerror(errno) + "\n";
        ssize_t ignored = write(STDERR_FILENO, msg.data(), msg.size());
        (void)ignored;
        _exit(127);
    }

    close(inPipe[0]);
    close(outPipe[1]);
    close(errPipe[1]);
    int inFd = inPipe[1], outFd = outPipe[0], errFd = errPipe[0];
    set_nonblocking(inFd);
    set_nonblocking(outFd);
    set_nonblocking(errFd);
    // The child may close stdin early; we must not die on the resulting EPIPE.
    signal(SIGPIPE, SIG_IGN);

    ProcessResult res;
    size_t written = 0;
    bool killed = false;
    char buf[65536];

    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start)
            .count();
    };

    while (outFd >= 0 || errFd >= 0) {
        if (hardTimeoutMs > 0 && !killed && elapsed_ms() > (double)hardTimeoutMs) {
            kill(pid, SIGKILL);
            killed = true;
            res.timedOut = true;
        }
        struct pollfd fds[3];
        int n = 0;
        int inIdx = -1, outIdx = -1, errIdx = -1;
        if (inFd >= 0) { inIdx = n; fds[n++] = {inFd, POLLOUT, 0}; }
        if (outFd >= 0) { outIdx = n; fds[n++] = {outFd, POLLIN, 0}; }
        if (errFd >= 0) { errIdx = n; fds[n++] = {errFd, POLLIN, 0}; }
        int timeout = 200;  // re-check the deadline at least this often
        int rc = poll(fds, (nfds_t)n, timeout);
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (inIdx >= 0 && (fds[inIdx].revents & (POLLOUT | POLLERR | POLLHUP))) {
            if (fds[inIdx].revents & (POLLERR | POLLHUP)) {
                close(inFd);
                inFd = -1;
            } else {
                ssize_t w = write(inFd, input.data() + written,
                                  std::min<size_t>(input.size() - written, 65536));
                if (w > 0) written += (size_t)w;
                else if (w < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
                    close(inFd);
                    inFd = -1;
                }
                if (inFd >= 0 && written == input.size()) {
                    close(inFd);
                    inFd = -1;
                }
            }
        }
        auto drain = [&](int& fd, std::string& into, int idx) {
            if (idx < 0 || fd < 0) return;
            if (fds[idx].revents & (POLLIN | POLLHUP | POLLERR)) {
                for (;;) {
                    ssize_t r = read(fd, buf, sizeof buf);
                    if (r > 0) {
                        into.append(buf, (size_t)r);
                    } else if (r == 0) {
                        close(fd);
                        fd = -1;
                        break;
                    } else {
                        if (errno != EAGAIN && errno != EWOULDBLOCK) {
                            close(fd);
                            fd = -1;
                        }
                        break;
                    }
                }
            }
        };
        drain(outFd, res.out, outIdx);
        drain(errFd, res.err, errIdx);
    }
    if (inFd >= 0) close(inFd);

    int status = 0;
    waitpid(pid, &status, 0);
    res.wallMs = elapsed_ms();
    if (WIFEXITED(status)) res.exitCode = WEXITSTATUS(status);
    else res.exitCode = -1;
    return res;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string w;
    while (in >> w) parts.push_back(w);
    return parts;
}

const char* kSepPrefix = "RELSY-SEP-";

}  // namespace

std::vector<std::string> solver_command() {
    if (const char* env = std::getenv("RELSY_SOLVER")) {
        auto parts = split_ws(env);
        if (!parts.empty()) return parts;
    }
#ifdef RELSY_DEFAULT_SOLVER
    {
        auto parts = split_ws(RELSY_DEFAULT_SOLVER);
        if (!parts.empty()) return parts;
    }
#endif
    return {"z3", "-in"};
}

BatchResult solve_batch(const std::vector<BatchItem>& items, int timeoutMs,
                        long long hardTimeoutMs) {
    BatchResult result;
    result.outcomes.resize(items.size());
    if (items.empty()) return result;

    std::string payload;
    for (size_t i = 0; i < items.size(); ++i) {
        payload += items[i].script;
        if (!payload.empty() && payload.back() != '\n') payload += '\n';
        payload += "(check-sat)\n";
        if (items[i].wantModel) payload += "(get-model)\n";
        payload += "(echo \"" + std::string(kSepPrefix) + std::to_string(i) + "\")\n";
        payload += "(reset)\n";
    }

    auto argv = solver_command();
    if (timeoutMs > 0)
        argv.push_back("--timeout-ms=" + std::to_string(timeoutMs));
    if (hardTimeoutMs <= 0) {
        // Safety net only; the soft per-query timeout does the real limiting.
        hardTimeoutMs = (long long)(timeoutMs > 0 ? timeoutMs : 600000) *
                            (long long)items.size() +
                        120000;
    }

    ProcessResult proc = run_process(argv, payload, hardTimeoutMs);
    result.processWallMs = proc.wallMs;

    if (proc.timedOut) {
        // Whatever came back before the kill is unusable as a whole; report
        // every item as Unknown rather than guessing at partial output.
        for (auto& o : result.outcomes) {
            o.status = SolveStatus::Unknown;
            o.reason = "hard timeout";
            o.wallTimeMs = proc.wallMs / (double)items.size();
        }
        return result;
    }
    if (proc.exitCode == 127 || (proc.exitCode != 0 && proc.out.empty()))
        throw SolverSpawnError("solver failed to start (" + argv[0] +
                               "): " + proc.err.substr(0, 500));
    if (proc.exitCode != 0)
        throw SolverProtocolError("solver exited with code " +
                                  std::to_string(proc.exitCode) + ": " +
                                  proc.err.substr(0, 500));

    // Split the combined output on the separator lines.
    std::vector<std::string> segments;
    segments.reserve(items.size());
    std::string current;
    std::istringstream lines(proc.out);
    std::string line;
    double solverMs = -1.0;
    while (std::getline(lines, line)) {
        if (line.rfind(kSepPrefix, 0) == 0) {
            segments.push_back(current);
            current.clear();
        } else if (line.rfind("; solve-time-ms ", 0) == 0) {
            solverMs = std::strtod(line.c_str() + 16, nullptr);
        } else {
            current += line;
            current += '\n';
        }
    }
    if (segments.size() != items.size())
        throw SolverProtocolError(
            "expected " + std::to_string(items.size()) + " result segments, got " +
            std::to_string(segments.size()) + "; output began: " +
            proc.out.substr(0, 500));
    result.solverMs = solverMs >= 0 ? solverMs : proc.wallMs;
    double perItem = result.solverMs / (double)items.size();

    for (size_t i = 0; i < items.size(); ++i) {
        SolveOutcome& o = result.outcomes[i];
        o.wallTimeMs = perItem;
        std::istringstream seg(segments[i]);
        std::string statusLine;
        bool haveStatus = false;
        std::string errors;
        std::string rest;
        while (std::getline(seg, statusLine)) {
            if (statusLine.empty()) continue;
            if (statusLine.rfind("(error", 0) == 0) {
                errors += statusLine + "\n";
                continue;
            }
            if (!haveStatus) {
                if (statusLine == "sat") {
                    o.status = SolveStatus::Sat;
                    haveStatus = true;
                    continue;
                }
                if (statusLine == "unsat") {
                    o.status = SolveStatus::Unsat;
                    haveStatus = true;
                    continue;
                }
                if (statusLine == "unknown" || statusLine == "timeout") {
                    o.status = SolveStatus::Unknown;
                    o.reason = timeoutMs > 0 ? "unknown (possibly timeout)" : "unknown";
                    haveStatus = true;
                    continue;
                }
                throw SolverProtocolError("unrecognised solver status line: " +
                                          statusLine);
            }
            rest += statusLine;
            rest += '\n';
        }
        if (!haveStatus)
            throw SolverProtocolError(
                "missing sat/unsat/unknown for query " + std::to_string(i) +
                (errors.empty() ? "" : "; solver said: " + errors.substr(0, 500)));
        // (get-model) after an unsat/unknown answer legitimately reports
        // "model is not available"; anything else is a real problem.
        if (!errors.empty() &&
            !(o.status != SolveStatus::Sat &&
              errors.find("model is not available") != std::string::npos &&
              errors.find('\n') == errors.size() - 1))
            throw SolverProtocolError("solver reported errors for query " +
                                      std::to_string(i) + ": " +
                                      errors.substr(0, 500));
        if (o.status == SolveStatus::Sat && items[i].wantModel)
            o.modelText = rest;
    }
    return result;
}

SolveOutcome solve_script(const std::string& script, int timeoutMs,
                          bool wantModel) {
    BatchResult r = solve_batch({BatchItem{script, wantModel}}, timeoutMs);
    SolveOutcome o = r.outcomes.at(0);
    // For a lone script the solver-side evaluation time is the honest
    // per-query figure (it excludes process startup).
    o.wallTimeMs = r.solverMs > 0 ? r.solverMs : r.processWallMs;
    return o;
}

}  // namespace relsy::smt
