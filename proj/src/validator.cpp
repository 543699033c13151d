#include "planner/validator.hpp"

namespace planner {

const char* verdict_name(ValidationReport::Verdict v) {
    switch (v) {
    case ValidationReport::Verdict::Valid:
        return "valid";
    case ValidationReport::Verdict::InvalidStep:
        return "invalid_step";
    case ValidationReport::Verdict::GoalUnsatisfied:
        return "goal_unsatisfied";
    }
    return "?";
}

ValidationReport validate(const TaskModel& model, const std::vector<std::string>& plan) {
    ValidationReport report;
    State current = model.initial;
    report.trace.push_back(current.hash());

    for (std::size_t i = 0; i < plan.size(); ++i) {
        const std::string& label = plan[i];
        bool applied = false;
        for (const Transition& t : model.successors(current)) {
            if (t.action_label == label) {
                current = t.successor;
                applied = true;
                break;
            }
        }
        if (!applied) {
            report.verdict = ValidationReport::Verdict::InvalidStep;
            report.failed_step = i;
            report.reason = "action not applicable: " + label;
            return report;
        }
        report.trace.push_back(current.hash());
    }

    if (!model.goal_test(current)) {
        report.verdict = ValidationReport::Verdict::GoalUnsatisfied;
        report.reason = "final state does not satisfy the goal";
        return report;
    }
    report.verdict = ValidationReport::Verdict::Valid;
    return report;
}

} // namespace planner
