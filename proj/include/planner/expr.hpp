#ifndef PLANNER_EXPR_HPP
#define PLANNER_EXPR_HPP

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "planner/state.hpp"

namespace planner {

// Arithmetic expression tree over state variables (the psi of numeric goal
// conditions). Nodes are immutable and shared; a tree belongs to one task.
class Expr {
public:
    enum class Kind { Const, Var, Add, Sub, Mul, Div };

    using Ptr = std::shared_ptr<const Expr>;

    static Ptr constant(double v);
    static Ptr var(std::string name);
    static Ptr add(Ptr l, Ptr r) { return node(Kind::Add, std::move(l), std::move(r)); }
    static Ptr sub(Ptr l, Ptr r) { return node(Kind::Sub, std::move(l), std::move(r)); }
    static Ptr mul(Ptr l, Ptr r) { return node(Kind::Mul, std::move(l), std::move(r)); }
    static Ptr div(Ptr l, Ptr r) { return node(Kind::Div, std::move(l), std::move(r)); }

    Kind kind() const { return kind_; }
    double const_value() const { return const_value_; }
    const std::string& var_name() const { return var_name_; }
    const Ptr& left() const { return left_; }
    const Ptr& right() const { return right_; }

    // Collects every Var name (with duplicates removed) into `out`.
    void collect_vars(std::vector<std::string>& out) const;

    // Infix rendering, fully parenthesized.
    std::string repr() const;

    // Resolved payload slot for Var nodes, cached on first evaluation.
    // Benign race: every search resolves to the same value.
    mutable std::atomic<int> slot_cache{-2};

private:
    static Ptr node(Kind k, Ptr l, Ptr r);
    Expr() = default;

    Kind kind_ = Kind::Const;
    double const_value_ = 0.0;
    std::string var_name_;
    Ptr left_;
    Ptr right_;
};

// Evaluates under 64-bit float semantics. Throws UnboundVariable,
// DivisionByZero, or TypeMismatch.
double eval_expr(const Expr& expr, const State& state);

// Parses an infix expression: + - * /, parentheses, identifiers, decimal
// literals, unary minus. Throws ParseError.
Expr::Ptr parse_expr(std::string_view text);

// Folds constant subtrees; Div by a folded zero is left intact so the
// error surfaces at evaluation time.
Expr::Ptr fold_constants(const Expr::Ptr& e);

} // namespace planner

#endif
