#ifndef PLANNER_ORCHESTRATOR_HPP
#define PLANNER_ORCHESTRATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "planner/heuristics.hpp"
#include "planner/search.hpp"
#include "planner/synthesis.hpp"
#include "planner/task.hpp"

namespace planner::orchestrator {

// Resource policy for one strategy run. Defaults mirror the evaluated
// configuration: 600 s total, 100 s slices, 8 GiB, 5 heuristics.
struct BudgetPolicy {
    double total_seconds = 600.0;
    double slice_seconds = 100.0;
    std::uint64_t memory_bytes = 8ULL * 1024 * 1024 * 1024;
    int max_heuristics = 5;
    int max_compile_retries = 10;
};

struct AttemptRecord {
    int attempt_index = 0;
    synthesis::Phase phase = synthesis::Phase::Unrefined;
    bool compiled = false;
    std::string compile_diagnostics; // first lines, on failure
    double api_seconds = 0.0;
    double compile_seconds = 0.0;
    double search_seconds = 0.0;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    std::string worker_outcome; // empty when the attempt never ran a worker
    SearchStats worker_stats;
};

struct RunRecord {
    std::string instance_id;
    std::string configuration; // "fc", "tsr", "bfs+blind", "gbfs+hmd", ...
    std::string domain;
    std::vector<AttemptRecord> attempts;
    std::string final_outcome; // outcome name or "compile_exhausted" /
                               // "budget_exhausted" / "provider_error"
    bool solved = false;
    bool plan_validated = false;
    std::vector<std::string> plan;
    double api_seconds = 0.0;
    double compile_seconds = 0.0;
    double search_seconds = 0.0;
    double total_seconds = 0.0;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    int compile_failures = 0;
    int compile_attempts = 0;

    std::string to_json() const;
    static RunRecord from_json(const std::string& text); // throws ParseError
};

// Everything a synthesis strategy needs besides the budget.
struct SynthJob {
    TaskModelPtr model;
    std::string instance_path;
    std::string instance_text;
    std::string domain_source;
};

struct SynthSettings {
    synthesis::LlmConfig llm;
    synthesis::PromptOptions prompts;
    synthesis::ToolchainConfig toolchain;
    BudgetPolicy budget;
};

// FirstCompilation: query until a compilable heuristic is obtained, then run
// it with all remaining time. Budget exhaustion is an outcome, never thrown.
RunRecord run_fc(const SynthJob& job, const SynthSettings& settings);

// TimeSlicedRestarts: give each of up to max_heuristics compiled heuristics
// a min(slice, remaining) run; restart with a fresh heuristic on failure.
// Compile failures consume time and retries but not heuristic slots.
RunRecord run_tsr(const SynthJob& job, const SynthSettings& settings);

enum class Algorithm { Bfs, Gbfs };

// Single in-process search with a built-in heuristic (spec != Plugin).
RunRecord run_builtin(const TaskModel& model, const HeuristicSpec& heuristic,
                      Algorithm algorithm, const Limits& limits,
                      const std::string& instance_id = "");

// Coverage/cost table: one CSV row per (domain, configuration) with solved
// and attempted counts, mean api/compile/search seconds, mean token usage,
// and the compile failure rate. Throws PlannerError on empty input.
std::string report_csv(const std::vector<RunRecord>& records);
void report(const std::vector<RunRecord>& records, const std::string& out_path);

} // namespace planner::orchestrator

#endif
