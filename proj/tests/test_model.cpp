#include "doctest.h"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "planner/condition.hpp"
#include "planner/domains.hpp"
#include "planner/errors.hpp"
#include "planner/expr.hpp"
#include "planner/registry.hpp"

#include "support/test_support.hpp"

using namespace planner;
using test_support::map_state;

TEST_CASE("value tagged union") {
    Value b(true), i(std::int64_t{42}), r(2.5);
    CHECK(b.is_bool());
    CHECK(i.is_int());
    CHECK(r.is_real());
    CHECK(i.to_real() == 42.0);
    CHECK(Value(std::int64_t{3}) == Value(std::int64_t{3}));
    CHECK(Value(std::int64_t{3}) != Value(3.0)); // no silent Int/Real mixing
    CHECK_THROWS_AS((void)b.to_real(), std::logic_error);
}

TEST_CASE("eval_expr basics") {
    auto s = map_state({{"x", Value(std::int64_t{4})}, {"y", Value(std::int64_t{0})}});
    CHECK(eval_expr(*Expr::constant(3.0), s) == 3.0);
    CHECK(eval_expr(*Expr::sub(Expr::var("x"), Expr::constant(10.0)), s) == -6.0);
    CHECK_THROWS_AS((void)eval_expr(*Expr::div(Expr::var("x"), Expr::var("y")), s),
                    DivisionByZero);
    CHECK_THROWS_AS((void)eval_expr(*Expr::var("nosuch"), s), UnboundVariable);
}

TEST_CASE("infix parsing and precedence") {
    auto s = map_state({{"c0", Value(std::int64_t{2})}, {"c1", Value(std::int64_t{7})}});
    CHECK(eval_expr(*parse_expr("2 + 3 * 4"), s) == 14.0);
    CHECK(eval_expr(*parse_expr("(2 + 3) * 4"), s) == 20.0);
    CHECK(eval_expr(*parse_expr("c0 + 1 - c1"), s) == -4.0);
    CHECK(eval_expr(*parse_expr("-c0 + 10"), s) == 8.0);
    CHECK(eval_expr(*parse_expr("1.5e2"), s) == 150.0);
    CHECK_THROWS_AS((void)parse_expr("2 +"), ParseError);
    CHECK_THROWS_AS((void)parse_expr("(2 + 3"), ParseError);
    CHECK_THROWS_AS((void)parse_expr("2 3"), ParseError);
}

TEST_CASE("constant folding") {
    auto folded = parse_expr("1 + 2 * 3");
    CHECK(folded->kind() == Expr::Kind::Const);
    CHECK(folded->const_value() == 7.0);
    // x/0 must stay a Div so the error surfaces at evaluation
    auto div = parse_expr("x / (1 - 1)");
    CHECK(div->kind() == Expr::Kind::Div);
}

TEST_CASE("check_condition") {
    auto s10 = map_state({{"x", Value(std::int64_t{10})}, {"loaded", Value(true)}});
    CHECK(check_condition(GoalCondition::prop("loaded", true), s10));
    auto ge = GoalCondition::numeric(parse_expr("x - 10"), Comparator::GreaterEq);
    auto gt = GoalCondition::numeric(parse_expr("x - 10"), Comparator::Greater);
    CHECK(check_condition(ge, s10));       // boundary inclusive
    CHECK_FALSE(check_condition(gt, s10)); // strict
}

TEST_CASE("embedded comparator normalizes to psi <cmp> 0") {
    auto cond = parse_numeric_goal("c0 + 1 <= c1", "");
    CHECK(cond.kind == GoalCondition::Kind::Numeric);
    CHECK(cond.cmp == Comparator::LessEq);
    auto s = map_state({{"c0", Value(std::int64_t{0})}, {"c1", Value(std::int64_t{1})}});
    CHECK(eval_expr(*cond.expr, s) == 0.0);
    CHECK(check_condition(cond, s));
    CHECK_THROWS_AS(parse_numeric_goal("c0 <= c1", "<="), ParseError);
    CHECK_THROWS_AS(parse_numeric_goal("c0 + 1", ""), ParseError);
}

TEST_CASE("load_instance: counters") {
    auto model = test_support::counters_model(2, 10, {0, 0});
    CHECK(model->domain_name == "counters");
    REQUIRE(model->goal.size() == 1);
    CHECK_FALSE(model->goal_test(model->initial));
    CHECK(model->successors(model->initial).size() == 2);
}

TEST_CASE("load_instance: error paths") {
    nlohmann::json doc;
    doc["domain"] = "nosuch";
    CHECK_THROWS_AS((void)load_instance(doc, builtin_registry()), UnknownDomain);

    nlohmann::json bad;
    bad["domain"] = "counters";
    bad["parameters"] = {{"max_value", 3}}; // n missing
    CHECK_THROWS_AS((void)load_instance(bad, builtin_registry()), SchemaViolation);

    nlohmann::json badgoal;
    badgoal["domain"] = "counters";
    badgoal["parameters"] = {{"n", 2}, {"max_value", 3}};
    badgoal["goal"] = {{{"expr", "nosuch + 1"}, {"cmp", "<="}}};
    CHECK_THROWS_AS((void)load_instance(badgoal, builtin_registry()), UnboundVariable);

    nlohmann::json junk;
    junk["domain"] = "counters";
    junk["parameters"] = {{"n", 2}, {"max_value", 3}};
    junk["goal"] = "everything";
    CHECK_THROWS_AS((void)load_instance(junk, builtin_registry()), SchemaViolation);
}

TEST_CASE("state encode/decode is the identity on reachable states") {
    std::mt19937_64 rng(7);
    for (const char* fixture : {"counters_n3.json", "fo_counters_small.json", "pacman_5x5.json",
                                "twinprime_small.json"}) {
        auto model = test_support::load_fixture(fixture);
        auto states = test_support::random_walk(*model, 60, rng);
        for (const auto& s : states) {
            State back = model->state_from_json(s.to_json_text());
            CHECK(back == s);
            CHECK(back.hash() == s.hash());
        }
    }
}

TEST_CASE("goal test agrees with the declarative goal list") {
    std::mt19937_64 rng(11);
    for (const char* fixture : {"counters_n3.json", "fo_counters_small.json", "pacman_5x5.json",
                                "twinprime_small.json"}) {
        auto model = test_support::load_fixture(fixture);
        int checked = 0;
        while (checked < 1000) {
            auto states = test_support::random_walk(*model, 40, rng);
            for (const auto& s : states) {
                CHECK(model->goal_test(s) == check_all(model->goal, s));
                if (++checked >= 1000)
                    break;
            }
        }
    }
}

TEST_CASE("equal states hash equally on random-walk pairs") {
    std::mt19937_64 rng(13);
    auto model = test_support::load_fixture("counters_n3.json");
    auto a = test_support::random_walk(*model, 200, rng);
    std::mt19937_64 rng2(13);
    auto b = test_support::random_walk(*model, 200, rng2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i].hash() == b[i].hash());
    }
}

// ---- reference evaluator ---------------------------------------------------

namespace {

using Rational = boost::multiprecision::cpp_rational;

Rational eval_rational(const Expr& e, const std::map<std::string, std::int64_t>& vars) {
    switch (e.kind()) {
    case Expr::Kind::Const:
        return Rational(e.const_value());
    case Expr::Kind::Var:
        return Rational(vars.at(e.var_name()));
    case Expr::Kind::Add:
        return eval_rational(*e.left(), vars) + eval_rational(*e.right(), vars);
    case Expr::Kind::Sub:
        return eval_rational(*e.left(), vars) - eval_rational(*e.right(), vars);
    case Expr::Kind::Mul:
        return eval_rational(*e.left(), vars) * eval_rational(*e.right(), vars);
    case Expr::Kind::Div:
        return eval_rational(*e.left(), vars) / eval_rational(*e.right(), vars);
    }
    return 0;
}

struct ExprGen {
    std::mt19937_64 rng;
    std::map<std::string, std::int64_t> vars;
    State state;

    explicit ExprGen(std::uint64_t seed) : rng(seed), state(map_state({})) {
        std::uniform_int_distribution<std::int64_t> v(-1000, 1000);
        vars = {{"x", v(rng)}, {"y", v(rng)}, {"z", v(rng)}};
        std::map<std::string, Value> fluents;
        for (auto& [name, value] : vars)
            fluents[name] = Value(value);
        state = map_state(fluents);
    }

    Expr::Ptr gen(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
        switch (pick(rng)) {
        case 0: {
            std::uniform_int_distribution<std::int64_t> c(-50, 50);
            return Expr::constant(static_cast<double>(c(rng)));
        }
        case 1: {
            std::uniform_int_distribution<int> which(0, 2);
            return Expr::var(std::string(1, "xyz"[which(rng)]));
        }
        case 2:
            return Expr::add(gen(depth - 1), gen(depth - 1));
        case 3:
            return Expr::sub(gen(depth - 1), gen(depth - 1));
        case 4:
            return Expr::mul(gen(depth - 1), gen(depth - 1));
        default: {
            auto num = gen(depth - 1);
            auto den = gen(depth - 1);
            return Expr::div(num, den);
        }
        }
    }
};

} // namespace

TEST_CASE("eval_expr matches the big-rational reference evaluator") {
    ExprGen gen(2024);
    int accepted = 0;
    while (accepted < 200) {
        Expr::Ptr e = gen.gen(4);
        Rational exact;
        try {
            exact = eval_rational(*e, gen.vars);
        } catch (const std::exception&) {
            continue; // rational division by zero
        }
        double reference = exact.convert_to<double>();
        if (!std::isfinite(reference) || std::fabs(reference) > 1e6 ||
            std::fabs(reference) < 1e-3)
            continue;
        double actual;
        try {
            actual = eval_expr(*e, gen.state);
        } catch (const DivisionByZero&) {
            continue;
        }
        ++accepted;
        CHECK(std::fabs(actual - reference) <= 1e-9 * std::fabs(reference));
    }
}
