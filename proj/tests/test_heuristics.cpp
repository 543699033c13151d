#include "doctest.h"

#include <cmath>
#include <random>

#include "planner/errors.hpp"
#include "planner/heuristics.hpp"

#include "support/test_support.hpp"

using namespace planner;
using test_support::map_state;

namespace {

State xstate(double x) { return map_state({{"x", Value(x)}}); }

GoalCondition x_minus_10(Comparator cmp) {
    return GoalCondition::numeric(parse_expr("x - 10"), cmp);
}

} // namespace

TEST_CASE("h_blind is identically zero") {
    auto model = test_support::load_fixture("counters_n3.json");
    CHECK(h_blind(model->initial) == 0.0);
    auto goal_state = test_support::counters_model(3, 10, {0, 1, 2})->initial;
    CHECK(h_blind(goal_state) == 0.0);
}

TEST_CASE("condition_distance closed forms") {
    CHECK(condition_distance(x_minus_10(Comparator::GreaterEq), xstate(4)) == 6.0);
    CHECK(condition_distance(x_minus_10(Comparator::Equal), xstate(13)) == 3.0);
    CHECK(condition_distance(GoalCondition::prop("done", true),
                             map_state({{"done", Value(false)}})) == 1.0);
    CHECK(condition_distance(GoalCondition::prop("done", true),
                             map_state({{"done", Value(true)}})) == 0.0);
    CHECK(condition_distance(x_minus_10(Comparator::LessEq), xstate(25)) == 15.0);
    CHECK(condition_distance(x_minus_10(Comparator::Less), xstate(25)) == 15.0);
    CHECK(condition_distance(x_minus_10(Comparator::LessEq), xstate(3)) == 0.0);
    CHECK(condition_distance(x_minus_10(Comparator::Greater), xstate(12)) == 0.0);
}

TEST_CASE("strict comparators share the non-strict infimum") {
    // d = 0 at psi(s) = 0 even though x - 10 > 0 is unsatisfied there; goal
    // detection never relies on d.
    auto gt = x_minus_10(Comparator::Greater);
    CHECK_FALSE(check_condition(gt, xstate(10)));
    CHECK(condition_distance(gt, xstate(10)) == 0.0);
}

TEST_CASE("h_md sums per-condition distances") {
    std::vector<GoalCondition> goal = {x_minus_10(Comparator::GreaterEq),
                                       GoalCondition::prop("done", true)};
    auto s = map_state({{"x", Value(std::int64_t{4})}, {"done", Value(false)}});
    CHECK(h_md(s, goal) == 7.0);
    auto sat = map_state({{"x", Value(std::int64_t{12})}, {"done", Value(true)}});
    CHECK(h_md(sat, goal) == 0.0);

    auto counters = test_support::load_fixture("counters_n3.json");
    CHECK(h_md(counters->initial, counters->goal) == 2.0);
}

TEST_CASE("h_md is nonnegative and zero exactly at goals (non-strict goals)") {
    std::mt19937_64 rng(5);
    for (const char* fixture : {"counters_n3.json", "fo_counters_small.json", "pacman_5x5.json",
                                "twinprime_small.json"}) {
        auto model = test_support::load_fixture(fixture);
        int checked = 0;
        while (checked < 400) {
            for (const auto& s : test_support::random_walk(*model, 30, rng)) {
                double h = h_md(s, model->goal);
                CHECK(h >= 0.0);
                CHECK((h == 0.0) == model->goal_test(s));
                ++checked;
            }
        }
    }
}

TEST_CASE("make_heuristic contract") {
    auto model = test_support::load_fixture("counters_n3.json");
    auto h = make_heuristic(HeuristicSpec::hmd(), *model);
    CHECK(h(model->initial) == 2.0);
    CHECK(make_heuristic(HeuristicSpec::blind(), *model)(model->initial) == 0.0);

    auto no_goal = test_support::counters_model(1, 5, {0});
    CHECK(no_goal->goal.empty());
    CHECK_THROWS_AS((void)make_heuristic(HeuristicSpec::hmd(), *no_goal), PlannerError);
    CHECK_THROWS_AS((void)make_heuristic(HeuristicSpec::plugin("/bin/true"), *model),
                    PlannerError);
}

// ---- brute-force oracle ----------------------------------------------------

namespace {

// Grid search over y in a bounded box. Coefficients, roots, and the sample
// point are all dyadic multiples of the grid step, so the infimum is attained
// exactly on the grid.
// d is an infimum, so strict comparators search the closure of their
// satisfying set (the infimum over an open set is attained on its boundary,
// which a finite grid cannot represent otherwise).
bool closure_satisfies(double psi, Comparator cmp) {
    switch (cmp) {
    case Comparator::Greater:
    case Comparator::GreaterEq:
        return psi >= 0;
    case Comparator::Equal:
        return psi == 0;
    case Comparator::LessEq:
    case Comparator::Less:
        return psi <= 0;
    }
    return false;
}

double grid_distance_1d(double a, double y0, Comparator cmp, double psi_s) {
    const double step = 1.0 / 64.0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = -64 * 64; k <= 64 * 64; ++k) {
        double y = k * step;
        double psi = a * (y - y0);
        if (closure_satisfies(psi, cmp))
            best = std::min(best, std::fabs(psi - psi_s));
    }
    return best;
}

double grid_distance_2d(double a1, double a2, double b, Comparator cmp, double psi_s) {
    const double step = 1.0 / 16.0;
    double best = std::numeric_limits<double>::infinity();
    for (int k1 = -8 * 16; k1 <= 8 * 16; ++k1) {
        for (int k2 = -8 * 16; k2 <= 8 * 16; ++k2) {
            double psi = a1 * (k1 * step) + a2 * (k2 * step) + b;
            if (closure_satisfies(psi, cmp))
                best = std::min(best, std::fabs(psi - psi_s));
        }
    }
    return best;
}

} // namespace

TEST_CASE("condition_distance matches the grid-search oracle on random linear psi") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> coef(-16 * 4, 16 * 4); // quarters, nonzero below
    std::uniform_int_distribution<int> root(-32 * 64, 32 * 64);
    std::uniform_int_distribution<int> cmp_pick(0, 4);
    const Comparator comparators[] = {Comparator::Greater, Comparator::GreaterEq,
                                      Comparator::Equal, Comparator::LessEq, Comparator::Less};

    int done = 0;
    while (done < 35) { // one-variable psi
        double a = coef(rng) / 4.0;
        if (a == 0.0)
            continue;
        double y0 = root(rng) / 64.0;
        double s = root(rng) / 64.0;
        Comparator cmp = comparators[cmp_pick(rng)];
        // psi = a*x - a*y0
        auto cond = GoalCondition::numeric(
            Expr::sub(Expr::mul(Expr::constant(a), Expr::var("x")), Expr::constant(a * y0)), cmp);
        double actual = condition_distance(cond, xstate(s));
        double expected = grid_distance_1d(a, y0, cmp, a * (s - y0));
        CHECK(std::fabs(actual - expected) <= 1e-6);
        ++done;
    }

    std::uniform_int_distribution<int> p16(-4 * 16, 4 * 16);
    done = 0;
    while (done < 15) { // two-variable psi, root planted on the grid
        double a1 = coef(rng) / 4.0, a2 = coef(rng) / 4.0;
        if (a1 == 0.0 || a2 == 0.0)
            continue;
        double p1 = p16(rng) / 16.0, p2 = p16(rng) / 16.0;
        double b = -(a1 * p1 + a2 * p2);
        double s1 = p16(rng) / 16.0, s2 = p16(rng) / 16.0;
        Comparator cmp = comparators[cmp_pick(rng)];
        auto psi = Expr::add(Expr::add(Expr::mul(Expr::constant(a1), Expr::var("x")),
                                       Expr::mul(Expr::constant(a2), Expr::var("y"))),
                             Expr::constant(b));
        auto cond = GoalCondition::numeric(psi, cmp);
        auto state = map_state({{"x", Value(s1)}, {"y", Value(s2)}});
        double actual = condition_distance(cond, state);
        double expected = grid_distance_2d(a1, a2, b, cmp, a1 * s1 + a2 * s2 + b);
        CHECK(std::fabs(actual - expected) <= 1e-6);
        ++done;
    }
}
