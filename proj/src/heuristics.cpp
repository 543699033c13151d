#include "planner/heuristics.hpp"

#include <cmath>

#include "planner/errors.hpp"

namespace planner {

double h_blind(const State&) { return 0.0; }

double condition_distance(const GoalCondition& cond, const State& state) {
    if (cond.kind == GoalCondition::Kind::Prop)
        return check_condition(cond, state) ? 0.0 : 1.0;
    double psi = eval_expr(*cond.expr, state);
    switch (cond.cmp) {
    case Comparator::Greater:
    case Comparator::GreaterEq:
        return std::max(0.0, -psi);
    case Comparator::Less:
    case Comparator::LessEq:
        return std::max(0.0, psi);
    case Comparator::Equal:
        return std::fabs(psi);
    }
    return 0.0;
}

double h_md(const State& state, const std::vector<GoalCondition>& goal) {
    double total = 0.0;
    for (const auto& cond : goal)
        total += condition_distance(cond, state);
    return total;
}

HeuristicFn make_heuristic(const HeuristicSpec& spec, const TaskModel& model) {
    switch (spec.kind) {
    case HeuristicSpec::Kind::Blind:
        return [](const State&) { return 0.0; };
    case HeuristicSpec::Kind::Hmd: {
        if (model.goal.empty())
            throw PlannerError("h^md requires a nonempty declarative goal list (domain '" +
                               model.domain_name + "' has none)");
        const auto* goal = &model.goal;
        return [goal](const State& s) { return h_md(s, *goal); };
    }
    case HeuristicSpec::Kind::Plugin:
        throw PlannerError("plugin heuristics run in worker executables, not in-process");
    }
    throw PlannerError("corrupt heuristic spec");
}

} // namespace planner
