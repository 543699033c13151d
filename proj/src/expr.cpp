#include "planner/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "planner/errors.hpp"

namespace planner {

Expr::Ptr Expr::constant(double v) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::Const;
    e->const_value_ = v;
    return e;
}

Expr::Ptr Expr::var(std::string name) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::Var;
    e->var_name_ = std::move(name);
    return e;
}

Expr::Ptr Expr::node(Kind k, Ptr l, Ptr r) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = k;
    e->left_ = std::move(l);
    e->right_ = std::move(r);
    return e;
}

void Expr::collect_vars(std::vector<std::string>& out) const {
    switch (kind_) {
    case Kind::Const:
        return;
    case Kind::Var:
        if (std::find(out.begin(), out.end(), var_name_) == out.end())
            out.push_back(var_name_);
        return;
    default:
        left_->collect_vars(out);
        right_->collect_vars(out);
    }
}

std::string Expr::repr() const {
    switch (kind_) {
    case Kind::Const: {
        double v = const_value_;
        if (v == static_cast<std::int64_t>(v))
            return std::to_string(static_cast<std::int64_t>(v));
        return std::to_string(v);
    }
    case Kind::Var:
        return var_name_;
    case Kind::Add:
        return "(" + left_->repr() + " + " + right_->repr() + ")";
    case Kind::Sub:
        return "(" + left_->repr() + " - " + right_->repr() + ")";
    case Kind::Mul:
        return "(" + left_->repr() + " * " + right_->repr() + ")";
    case Kind::Div:
        return "(" + left_->repr() + " / " + right_->repr() + ")";
    }
    return "?";
}

namespace {

double var_value(const Expr& e, const State& state) {
    const StatePayload& payload = state.payload();
    int slot = e.slot_cache.load(std::memory_order_relaxed);
    if (slot == -2) {
        slot = payload.fluent_slot(e.var_name());
        e.slot_cache.store(slot, std::memory_order_relaxed);
    }
    if (slot >= 0)
        return payload.fluent_by_slot(slot).to_real();
    auto v = payload.fluent(e.var_name());
    if (!v)
        throw UnboundVariable(e.var_name());
    if (!v->is_numeric())
        throw TypeMismatch("variable " + e.var_name() + " is not numeric");
    return v->to_real();
}

} // namespace

double eval_expr(const Expr& expr, const State& state) {
    switch (expr.kind()) {
    case Expr::Kind::Const:
        return expr.const_value();
    case Expr::Kind::Var:
        return var_value(expr, state);
    case Expr::Kind::Add:
        return eval_expr(*expr.left(), state) + eval_expr(*expr.right(), state);
    case Expr::Kind::Sub:
        return eval_expr(*expr.left(), state) - eval_expr(*expr.right(), state);
    case Expr::Kind::Mul:
        return eval_expr(*expr.left(), state) * eval_expr(*expr.right(), state);
    case Expr::Kind::Div: {
        double l = eval_expr(*expr.left(), state);
        double r = eval_expr(*expr.right(), state);
        if (r == 0.0)
            throw DivisionByZero();
        return l / r;
    }
    }
    throw PlannerError("corrupt expression node");
}

// ---- infix parser -------------------------------------------------------

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw ParseError("expression parse error at offset " + std::to_string(pos) + ": " + why +
                         " in \"" + std::string(text) + "\"");
    }

    Expr::Ptr parse_sum() {
        Expr::Ptr lhs = parse_term();
        for (;;) {
            if (consume('+'))
                lhs = Expr::add(lhs, parse_term());
            else if (consume('-'))
                lhs = Expr::sub(lhs, parse_term());
            else
                return lhs;
        }
    }

    Expr::Ptr parse_term() {
        Expr::Ptr lhs = parse_factor();
        for (;;) {
            if (consume('*'))
                lhs = Expr::mul(lhs, parse_factor());
            else if (consume('/'))
                lhs = Expr::div(lhs, parse_factor());
            else
                return lhs;
        }
    }

    Expr::Ptr parse_factor() {
        skip_ws();
        if (consume('('))
        {
            Expr::Ptr inner = parse_sum();
            if (!consume(')'))
                fail("expected ')'");
            return inner;
        }
        if (consume('-'))
            return Expr::sub(Expr::constant(0.0), parse_factor());
        if (consume('+'))
            return parse_factor();
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_identifier();
        fail("expected number, identifier, or '('");
    }

    Expr::Ptr parse_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos++;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
                ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                    ++pos;
            else
                pos = mark;
        }
        std::string token(text.substr(start, pos - start));
        char* end = nullptr;
        double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size())
            fail("malformed number '" + token + "'");
        return Expr::constant(v);
    }

    Expr::Ptr parse_identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_'))
            ++pos;
        return Expr::var(std::string(text.substr(start, pos - start)));
    }
};

} // namespace

Expr::Ptr parse_expr(std::string_view text) {
    Parser p{text};
    Expr::Ptr e = p.parse_sum();
    if (!p.eof())
        p.fail("trailing input");
    return fold_constants(e);
}

Expr::Ptr fold_constants(const Expr::Ptr& e) {
    switch (e->kind()) {
    case Expr::Kind::Const:
    case Expr::Kind::Var:
        return e;
    default:
        break;
    }
    Expr::Ptr l = fold_constants(e->left());
    Expr::Ptr r = fold_constants(e->right());
    bool both_const = l->kind() == Expr::Kind::Const && r->kind() == Expr::Kind::Const;
    switch (e->kind()) {
    case Expr::Kind::Add:
        return both_const ? Expr::constant(l->const_value() + r->const_value()) : Expr::add(l, r);
    case Expr::Kind::Sub:
        return both_const ? Expr::constant(l->const_value() - r->const_value()) : Expr::sub(l, r);
    case Expr::Kind::Mul:
        return both_const ? Expr::constant(l->const_value() * r->const_value()) : Expr::mul(l, r);
    case Expr::Kind::Div:
        // leave x/0 unfolded; the error belongs to evaluation
        if (both_const && r->const_value() != 0.0)
            return Expr::constant(l->const_value() / r->const_value());
        return Expr::div(l, r);
    default:
        return e;
    }
}

} // namespace planner
