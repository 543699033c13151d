#include "doctest.h"

#include <random>

#include "planner/heuristics.hpp"
#include "planner/search.hpp"
#include "planner/validator.hpp"

#include "support/test_support.hpp"

using namespace planner;

TEST_CASE("validate replays a correct plan") {
    auto model = test_support::load_fixture("counters_n2.json");
    auto report = validate(*model, {"inc c1"});
    CHECK(report.valid());
    CHECK(report.trace.size() == 2);
}

TEST_CASE("validate rejects an inapplicable action") {
    auto model = test_support::load_fixture("counters_n2.json");
    auto report = validate(*model, {"dec c1"});
    CHECK(report.verdict == ValidationReport::Verdict::InvalidStep);
    CHECK(report.failed_step == 0);
}

TEST_CASE("validate rejects an empty plan on a non-goal instance") {
    auto model = test_support::load_fixture("counters_n2.json");
    auto report = validate(*model, {});
    CHECK(report.verdict == ValidationReport::Verdict::GoalUnsatisfied);
    CHECK(report.trace.size() == 1);
}

TEST_CASE("every search plan validates across domains and algorithms") {
    std::mt19937_64 rng(31);
    Limits limits;
    limits.wall_clock_seconds = 10.0;
    limits.max_expansions = 30000;
    for (const char* fixture : {"counters_n3.json", "fo_counters_small.json", "pacman_5x5.json",
                                "twinprime_small.json", "pacman_corridor.json"}) {
        auto model = test_support::load_fixture(fixture);
        auto check_plan = [&](const SearchResult& result) {
            if (result.outcome == Outcome::Solved) {
                auto report = validate(*model, result.plan);
                CHECK(report.valid());
                CHECK(report.trace.size() == result.plan.size() + 1);
            }
        };
        check_plan(bfs(*model, limits));
        check_plan(gbfs(*model, h_blind, limits));
        check_plan(gbfs(*model, make_heuristic(HeuristicSpec::hmd(), *model), limits));
    }
}

namespace {

// Independent replay: returns true iff the sequence is applicable and ends
// in a goal state. Shares nothing with validate() internals.
bool replay_is_plan(const TaskModel& model, const std::vector<std::string>& actions) {
    State s = model.initial;
    for (const auto& label : actions) {
        bool applied = false;
        for (const auto& t : model.successors(s))
            if (t.action_label == label) {
                s = t.successor;
                applied = true;
                break;
            }
        if (!applied)
            return false;
    }
    return model.goal_test(s);
}

} // namespace

TEST_CASE("single-action mutations of valid plans are caught") {
    Limits limits;
    limits.max_expansions = 200000;

    // Plans of length >= 2. Order-sensitive domains (pacman ghost timing,
    // twinprime arithmetic, bound-tight counters) carry most of the mutation
    // mass; free-moving counters plans commute under swaps by construction.
    std::vector<std::pair<TaskModelPtr, std::vector<std::string>>> corpus;
    auto add_plans = [&](const char* fixture) {
        auto model = test_support::load_fixture(fixture);
        auto guided = gbfs(*model, make_heuristic(HeuristicSpec::hmd(), *model), limits);
        REQUIRE(guided.outcome == Outcome::Solved);
        if (guided.plan.size() >= 2)
            corpus.push_back({model, guided.plan});
        auto blind = bfs(*model, limits);
        if (blind.outcome == Outcome::Solved && blind.plan.size() >= 2 &&
            blind.plan != guided.plan)
            corpus.push_back({model, blind.plan});
    };
    add_plans("pacman_5x5.json");
    add_plans("pacman_patrol.json");
    add_plans("twinprime_chain.json");
    add_plans("counters_tight.json");
    add_plans("fo_counters_small.json");
    REQUIRE(corpus.size() >= 4);

    int total = 0, caught = 0;
    for (const auto& [model, plan] : corpus) {
        auto try_mutation = [&](std::vector<std::string> mutated) {
            ++total;
            auto report = validate(*model, mutated);
            // the verdict must agree with an independent replay, always
            CHECK(report.valid() == replay_is_plan(*model, mutated));
            if (!report.valid())
                ++caught;
        };
        for (std::size_t i = 0; i < plan.size(); ++i) {
            auto deleted = plan;
            deleted.erase(deleted.begin() + i);
            try_mutation(deleted);

            auto duplicated = plan;
            duplicated.insert(duplicated.begin() + i, plan[i]);
            try_mutation(duplicated);

            if (i + 1 < plan.size() && plan[i] != plan[i + 1]) {
                auto swapped = plan;
                std::swap(swapped[i], swapped[i + 1]);
                try_mutation(swapped);
            }
        }
    }
    // a small share of mutations legitimately remain valid plans
    CHECK(caught * 100 >= total * 95);
}
