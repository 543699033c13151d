#ifndef PLANNER_SYNTHESIS_PROCESS_HPP
#define PLANNER_SYNTHESIS_PROCESS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace planner::synthesis {

struct ProcessOptions {
    double timeout_seconds = 0.0;     // 0 = none; SIGKILL on the process group
    std::uint64_t rlimit_as_bytes = 0; // 0 = none
    double rlimit_cpu_seconds = 0.0;   // 0 = none
    std::string working_dir;
    std::size_t max_capture_bytes = 4 * 1024 * 1024;
};

struct ProcessResult {
    bool started = false;
    bool timed_out = false;
    int exit_code = -1;   // valid when term_signal == 0
    int term_signal = 0;  // nonzero when killed by a signal
    std::string out;
    std::string err;
    double elapsed_seconds = 0.0;
    std::string spawn_error;
};

// Runs argv[0] with the given arguments in an isolated process group,
// capturing stdout/stderr, enforcing the wall clock deadline with SIGKILL.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options);

} // namespace planner::synthesis

#endif
