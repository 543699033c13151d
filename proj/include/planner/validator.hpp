#ifndef PLANNER_VALIDATOR_HPP
#define PLANNER_VALIDATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "planner/task.hpp"

namespace planner {

// Independent plan verification: replay the plan through the successor
// generator and check the goal. Deliberately shares no bookkeeping with the
// search module so it can serve as an oracle for it.
struct ValidationReport {
    enum class Verdict { Valid, InvalidStep, GoalUnsatisfied };

    Verdict verdict = Verdict::GoalUnsatisfied;
    std::size_t failed_step = 0; // index into the plan when InvalidStep
    std::string reason;
    std::vector<std::uint64_t> trace; // state hashes, initial state first

    bool valid() const { return verdict == Verdict::Valid; }
};

const char* verdict_name(ValidationReport::Verdict v);

// Replays `plan` from the initial state. Each label must name an applicable
// transition of the current state; the final state must pass the goal test.
// All failures are encoded in the verdict; nothing is thrown.
ValidationReport validate(const TaskModel& model, const std::vector<std::string>& plan);

} // namespace planner

#endif
