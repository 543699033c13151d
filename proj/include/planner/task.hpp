#ifndef PLANNER_TASK_HPP
#define PLANNER_TASK_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "planner/condition.hpp"
#include "planner/state.hpp"

namespace planner {

// One applicable action at a state. Labels are unique among the transitions
// returned for a single state; plans are sequences of labels.
struct Transition {
    std::string action_label;
    double cost = 1.0;
    State successor;
};

using SuccessorFn = std::function<std::vector<Transition>(const State&)>;
using GoalTestFn = std::function<bool(const State&)>;

// Executable planning task: successor generator, goal test, initial state,
// plus the declarative goal list that drives h^md. Immutable after load and
// safe to share across threads.
struct TaskModel {
    std::string domain_name;
    State initial;
    std::vector<GoalCondition> goal;
    SuccessorFn successors;
    GoalTestFn goal_test;

    // Decodes a state previously produced by StatePayload::to_json_text().
    std::function<State(const std::string&)> state_from_json;
};

using TaskModelPtr = std::shared_ptr<const TaskModel>;

} // namespace planner

#endif
