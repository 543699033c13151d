#include "planner/condition.hpp"

#include "planner/errors.hpp"

namespace planner {

const char* comparator_symbol(Comparator c) {
    switch (c) {
    case Comparator::Greater:
        return ">";
    case Comparator::GreaterEq:
        return ">=";
    case Comparator::Equal:
        return "=";
    case Comparator::LessEq:
        return "<=";
    case Comparator::Less:
        return "<";
    }
    return "?";
}

Comparator comparator_from_symbol(std::string_view sym) {
    if (sym == ">")
        return Comparator::Greater;
    if (sym == ">=")
        return Comparator::GreaterEq;
    if (sym == "=" || sym == "==")
        return Comparator::Equal;
    if (sym == "<=")
        return Comparator::LessEq;
    if (sym == "<")
        return Comparator::Less;
    throw ParseError("unknown comparator '" + std::string(sym) + "'");
}

GoalCondition GoalCondition::prop(std::string name, bool expected) {
    GoalCondition c;
    c.kind = Kind::Prop;
    c.prop_name = std::move(name);
    c.prop_expected = expected;
    return c;
}

GoalCondition GoalCondition::numeric(Expr::Ptr psi, Comparator cmp) {
    GoalCondition c;
    c.kind = Kind::Numeric;
    c.expr = fold_constants(psi);
    c.cmp = cmp;
    return c;
}

std::string GoalCondition::repr() const {
    if (kind == Kind::Prop)
        return prop_name + " = " + (prop_expected ? "true" : "false");
    return expr->repr() + " " + comparator_symbol(cmp) + " 0";
}

bool check_condition(const GoalCondition& cond, const State& state) {
    if (cond.kind == GoalCondition::Kind::Prop) {
        auto v = state.fluent(cond.prop_name);
        if (!v)
            throw UnboundVariable(cond.prop_name);
        if (!v->is_bool())
            throw TypeMismatch("fluent " + cond.prop_name + " is not boolean");
        return v->as_bool() == cond.prop_expected;
    }
    double psi = eval_expr(*cond.expr, state);
    switch (cond.cmp) {
    case Comparator::Greater:
        return psi > 0.0;
    case Comparator::GreaterEq:
        return psi >= 0.0;
    case Comparator::Equal:
        return psi == 0.0;
    case Comparator::LessEq:
        return psi <= 0.0;
    case Comparator::Less:
        return psi < 0.0;
    }
    return false;
}

bool check_all(const std::vector<GoalCondition>& goal, const State& state) {
    for (const auto& cond : goal)
        if (!check_condition(cond, state))
            return false;
    return true;
}

GoalCondition parse_numeric_goal(std::string_view expr_text, std::string_view cmp_sym) {
    // Look for a top-level comparator embedded in the expression text.
    std::size_t split = std::string_view::npos;
    std::string embedded;
    int depth = 0;
    for (std::size_t i = 0; i < expr_text.size(); ++i) {
        char c = expr_text[i];
        if (c == '(')
            ++depth;
        else if (c == ')')
            --depth;
        else if (depth == 0 && (c == '<' || c == '>' || c == '=')) {
            split = i;
            embedded = c;
            if (i + 1 < expr_text.size() && expr_text[i + 1] == '=')
                embedded += '=';
            break;
        }
    }

    if (split != std::string_view::npos) {
        if (!cmp_sym.empty())
            throw ParseError("goal entry has both an embedded comparator and a cmp field");
        Expr::Ptr lhs = parse_expr(expr_text.substr(0, split));
        Expr::Ptr rhs = parse_expr(expr_text.substr(split + embedded.size()));
        // normalize lhs <cmp> rhs  to  (lhs - rhs) <cmp> 0
        return GoalCondition::numeric(Expr::sub(lhs, rhs), comparator_from_symbol(embedded));
    }
    if (cmp_sym.empty())
        throw ParseError("numeric goal entry needs a cmp field or an embedded comparator");
    return GoalCondition::numeric(parse_expr(expr_text), comparator_from_symbol(cmp_sym));
}

} // namespace planner
