#ifndef PLANNER_CONDITION_HPP
#define PLANNER_CONDITION_HPP

#include <string>
#include <vector>

#include "planner/expr.hpp"
#include "planner/state.hpp"

namespace planner {

enum class Comparator { Greater, GreaterEq, Equal, LessEq, Less };

const char* comparator_symbol(Comparator c);
Comparator comparator_from_symbol(std::string_view sym); // throws ParseError

// A single goal condition: either a propositional fluent check or a numeric
// comparison normalized to the form  psi(state) <cmp> 0.
struct GoalCondition {
    enum class Kind { Prop, Numeric };

    Kind kind;
    // Prop
    std::string prop_name;
    bool prop_expected = true;
    // Numeric
    Expr::Ptr expr;
    Comparator cmp = Comparator::GreaterEq;

    static GoalCondition prop(std::string name, bool expected);
    static GoalCondition numeric(Expr::Ptr psi, Comparator cmp);

    std::string repr() const;
};

// True iff the condition holds in `state`. Propagates evaluation errors.
bool check_condition(const GoalCondition& cond, const State& state);

// True iff every condition holds.
bool check_all(const std::vector<GoalCondition>& goal, const State& state);

// Parses one instance-JSON goal entry already split into expression text and
// comparator symbol. The expression may embed its own comparison
// ("c0 + 1 <= c1"), in which case `cmp_sym` must be empty and the condition
// is normalized by moving everything to the left of the comparator.
GoalCondition parse_numeric_goal(std::string_view expr_text, std::string_view cmp_sym);

} // namespace planner

#endif
