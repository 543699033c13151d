#include "process.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

namespace planner::synthesis {

namespace {

using Clock = std::chrono::steady_clock;

void set_limit(int resource, rlim_t value) {
    rlimit lim{value, value};
    setrlimit(resource, &lim);
}

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options) {
    ProcessResult result;
    if (argv.empty()) {
        result.spawn_error = "empty argv";
        return result;
    }

    int out_pipe[2], err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        result.spawn_error = std::strerror(errno);
        return result;
    }

    auto start = Clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        result.spawn_error = std::strerror(errno);
        return result;
    }

    if (pid == 0) {
        // child: new process group so the whole tree can be killed
        setsid();
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        if (!options.working_dir.empty() && chdir(options.working_dir.c_str()) != 0)
            _exit(126);
        set_limit(RLIMIT_CORE, 0);
        if (options.rlimit_as_bytes > 0)
            set_limit(RLIMIT_AS, options.rlimit_as_bytes);
        if (options.rlimit_cpu_seconds > 0)
            set_limit(RLIMIT_CPU, static_cast<rlim_t>(options.rlimit_cpu_seconds) + 1);

        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv)
            args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);
    result.started = true;

    auto deadline = options.timeout_seconds > 0.0
                        ? start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(options.timeout_seconds))
                        : Clock::time_point::max();

    bool killed = false;
    int open_fds = 2;
    pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    std::string* sinks[2] = {&result.out, &result.err};
    char buf[8192];

    auto drain = [&](int idx) {
        for (;;) {
            ssize_t n = read(fds[idx].fd, buf, sizeof buf);
            if (n > 0) {
                if (sinks[idx]->size() < options.max_capture_bytes)
                    sinks[idx]->append(buf, static_cast<std::size_t>(
                                                std::min<std::size_t>(n, options.max_capture_bytes -
                                                                             sinks[idx]->size())));
                continue;
            }
            if (n == 0 || (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK)) {
                close(fds[idx].fd);
                fds[idx].fd = -1;
                --open_fds;
            }
            return;
        }
    };

    while (open_fds > 0) {
        if (!killed && Clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            result.timed_out = true;
            killed = true;
        }
        int timeout_ms = 20;
        if (poll(fds, 2, timeout_ms) > 0) {
            for (int i = 0; i < 2; ++i)
                if (fds[i].fd >= 0 && (fds[i].revents & (POLLIN | POLLHUP | POLLERR)))
                    drain(i);
        }
    }

    int status = 0;
    for (;;) {
        // the pipes are closed, but a killed child may need a final reap
        if (!killed && options.timeout_seconds > 0.0 && Clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            result.timed_out = true;
            killed = true;
        }
        pid_t r = waitpid(pid, &status, killed ? 0 : WNOHANG);
        if (r == pid)
            break;
        if (r < 0 && errno != EINTR)
            break;
        if (r == 0)
            usleep(10000);
    }

    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.term_signal = WTERMSIG(status);
    result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

} // namespace planner::synthesis
