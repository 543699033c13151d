#ifndef PLANNER_HEURISTICS_HPP
#define PLANNER_HEURISTICS_HPP

#include <string>
#include <vector>

#include "planner/condition.hpp"
#include "planner/search.hpp"
#include "planner/task.hpp"

namespace planner {

// Built-in heuristic selection. Plugin heuristics live in compiled worker
// executables and never run in-process (see synthesis.hpp).
struct HeuristicSpec {
    enum class Kind { Blind, Hmd, Plugin };
    Kind kind = Kind::Blind;
    std::string plugin_worker_path;

    static HeuristicSpec blind() { return {Kind::Blind, {}}; }
    static HeuristicSpec hmd() { return {Kind::Hmd, {}}; }
    static HeuristicSpec plugin(std::string worker) { return {Kind::Plugin, std::move(worker)}; }
};

// Baseline heuristic: 0 for every state.
double h_blind(const State& state);

// Distance from `state` to satisfying one normalized condition psi <cmp> 0:
// propositional conditions contribute 0/1; numeric conditions use the
// closed-form infimum over satisfying psi values. Strict comparators share
// their non-strict counterpart's form, so d can be 0 at the unsatisfied
// boundary psi(s) = 0; goal detection always uses the exact goal test.
double condition_distance(const GoalCondition& cond, const State& state);

// h^md: sum of condition_distance over all goal conditions.
double h_md(const State& state, const std::vector<GoalCondition>& goal);

// Binds Blind or Hmd to a model. Hmd requires a nonempty declarative goal
// list (throws PlannerError otherwise). Plugin specs are rejected here.
HeuristicFn make_heuristic(const HeuristicSpec& spec, const TaskModel& model);

} // namespace planner

#endif
