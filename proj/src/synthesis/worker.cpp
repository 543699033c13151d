#include <algorithm>
#include <string>
#include <vector>

#include "planner/errors.hpp"
#include "planner/synthesis.hpp"

#include "process.hpp"

namespace planner::synthesis {

namespace {

// Watchdog slack past the slice: workers normally stop themselves via their
// internal limit and report; the hard kill is the backstop for heuristics
// that never return.
constexpr double kKillGraceSeconds = 0.75;
constexpr std::uint64_t kAddressSpaceHeadroom = 256ULL * 1024 * 1024;

// A generated heuristic may print noise; the result document is the last
// stdout line that parses as one.
std::optional<SearchResult> last_result_line(const std::string& out) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < out.size()) {
        std::size_t nl = out.find('\n', pos);
        std::size_t end = nl == std::string::npos ? out.size() : nl;
        lines.push_back(out.substr(pos, end - pos));
        pos = end + 1;
    }
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        std::size_t first = it->find_first_not_of(" \t\r");
        if (first == std::string::npos || (*it)[first] != '{')
            continue;
        try {
            return result_from_json(it->substr(first));
        } catch (const ParseError&) {
            continue;
        }
    }
    return std::nullopt;
}

} // namespace

WorkerRun run_worker(const std::string& worker_path, const std::string& instance_path,
                     const std::string& algorithm, const Limits& slice) {
    std::vector<std::string> argv = {
        worker_path,
        "--instance", instance_path,
        "--algorithm", algorithm,
        "--time-limit", std::to_string(slice.wall_clock_seconds),
        "--memory-limit", std::to_string(slice.memory_bytes),
    };
    if (slice.max_expansions) {
        argv.push_back("--max-expansions");
        argv.push_back(std::to_string(*slice.max_expansions));
    }

    ProcessOptions opts;
    opts.timeout_seconds = slice.wall_clock_seconds + kKillGraceSeconds;
    opts.rlimit_as_bytes = slice.memory_bytes + kAddressSpaceHeadroom;

    ProcessResult res = run_process(argv, opts);

    WorkerRun run;
    run.wall_seconds = res.elapsed_seconds;
    run.exit_code = res.exit_code;
    run.term_signal = res.term_signal;

    if (!res.started) {
        run.result.outcome = Outcome::HeuristicError;
        run.result.detail = "cannot start worker: " + res.spawn_error;
        return run;
    }

    if (auto parsed = last_result_line(res.out)) {
        run.result = *parsed;
        return run;
    }

    if (res.timed_out) {
        run.result.outcome = Outcome::TimedOut;
        run.result.detail = "worker killed at wall clock limit";
    } else if (res.term_signal != 0) {
        run.result.outcome = Outcome::HeuristicError;
        run.result.detail = "worker crashed with signal " + std::to_string(res.term_signal);
    } else {
        run.result.outcome = Outcome::HeuristicError;
        run.result.detail = "worker exited with status " + std::to_string(res.exit_code) +
                            " and no result document";
        if (!res.err.empty())
            run.result.detail += "; stderr: " + res.err.substr(0, 500);
    }
    run.result.stats.elapsed_seconds = res.elapsed_seconds;
    return run;
}

} // namespace planner::synthesis
