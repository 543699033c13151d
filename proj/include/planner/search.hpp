#ifndef PLANNER_SEARCH_HPP
#define PLANNER_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "planner/task.hpp"

namespace planner {

// Resource budget for one search run. Enforcement is best effort but
// bounded: the run halts within 1 s of the wall clock limit and before the
// estimated live set exceeds memory_bytes.
struct Limits {
    double wall_clock_seconds = 600.0;
    std::uint64_t memory_bytes = 8ULL * 1024 * 1024 * 1024;
    std::optional<std::uint64_t> max_expansions;
};

enum class Outcome { Solved, Exhausted, TimedOut, MemoryOut, HeuristicError };

const char* outcome_name(Outcome o); // "solved", "exhausted", ...
std::optional<Outcome> outcome_from_name(std::string_view name);

struct SearchStats {
    std::uint64_t expanded = 0;
    std::uint64_t generated = 0;
    std::uint64_t duplicates = 0;
    double elapsed_seconds = 0.0;
    std::uint64_t peak_open = 0;
    std::uint64_t peak_closed = 0;
};

struct SearchResult {
    Outcome outcome = Outcome::Exhausted;
    std::vector<std::string> plan; // action labels; empty unless Solved
    SearchStats stats;
    std::string detail; // failure detail (heuristic errors, crash info)

    bool solved() const { return outcome == Outcome::Solved; }
};

// Wire format used by worker executables and the orchestrator:
//   {"outcome": "...", "plan": [...], "stats": {...}}
std::string result_to_json(const SearchResult& r);
SearchResult result_from_json(const std::string& text); // throws ParseError

using HeuristicFn = std::function<double(const State&)>;

// Test/instrumentation hook; called once per expansion in order.
struct SearchObserver {
    virtual ~SearchObserver() = default;
    virtual void on_expand(const State& s) = 0;
};

// Breadth-first search. Minimal-length plans under unit costs; duplicate
// states are expanded at most once. Never throws for unsolvable inputs.
SearchResult bfs(const TaskModel& model, const Limits& limits, SearchObserver* observer = nullptr);

// Greedy best-first search with eager evaluation at generation time.
// Open list ordered by ascending h, FIFO among ties; closed states are never
// reopened. A heuristic that throws or returns NaN ends the run with
// HeuristicError.
SearchResult gbfs(const TaskModel& model, const HeuristicFn& h, const Limits& limits,
                  SearchObserver* observer = nullptr);

} // namespace planner

#endif
