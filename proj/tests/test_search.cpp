#include "doctest.h"

#include <chrono>
#include <cmath>
#include <random>

#include "planner/errors.hpp"
#include "planner/heuristics.hpp"
#include "planner/search.hpp"
#include "planner/validator.hpp"

#include "support/test_support.hpp"

using namespace planner;

TEST_CASE("bfs solves counters n=2 with a minimal plan") {
    auto model = test_support::load_fixture("counters_n2.json");
    auto result = bfs(*model, Limits{});
    REQUIRE(result.outcome == Outcome::Solved);
    auto oracle = test_support::counters_shortest_path(2, 10, {0, 0});
    REQUIRE(oracle.has_value());
    CHECK(result.plan.size() == static_cast<std::size_t>(*oracle));
    CHECK(result.plan.size() == 1);
    CHECK(validate(*model, result.plan).valid());
}

TEST_CASE("bfs on a goal initial state expands exactly once") {
    auto model = test_support::counters_model(3, 10, {0, 1, 2});
    auto result = bfs(*model, Limits{});
    REQUIRE(result.outcome == Outcome::Solved);
    CHECK(result.plan.empty());
    CHECK(result.stats.expanded == 1);
}

TEST_CASE("bfs exhausts a space with no applicable increments") {
    auto model = test_support::load_fixture("counters_n2_max0.json");
    auto result = bfs(*model, Limits{});
    CHECK(result.outcome == Outcome::Exhausted);
    CHECK(result.stats.expanded == 1);
}

TEST_CASE("bfs plan lengths match the shortest-path oracle on random instances") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<int> npick(1, 3), maxpick(0, 5);
        int n = npick(rng), maxv = maxpick(rng);
        std::vector<std::int64_t> values;
        std::uniform_int_distribution<std::int64_t> vpick(0, maxv);
        for (int i = 0; i < n; ++i)
            values.push_back(vpick(rng));
        auto model = test_support::counters_model(n, maxv, values);
        auto result = bfs(*model, Limits{});
        auto oracle = test_support::counters_shortest_path(n, maxv, values);
        if (oracle) {
            REQUIRE(result.outcome == Outcome::Solved);
            CHECK(result.plan.size() == static_cast<std::size_t>(*oracle));
        } else {
            CHECK(result.outcome == Outcome::Exhausted);
        }
    }
}

TEST_CASE("gbfs with the zero heuristic expands in bfs order") {
    auto model = test_support::load_fixture("counters_n3.json");
    Limits limits;
    limits.max_expansions = 2000;
    test_support::ExpansionTrace bfs_trace, gbfs_trace;
    (void)bfs(*model, limits, &bfs_trace);
    (void)gbfs(*model, h_blind, limits, &gbfs_trace);
    CHECK(bfs_trace.hashes == gbfs_trace.hashes);
}

TEST_CASE("gbfs with h^md solves counters n=3 at most as slowly as bfs") {
    auto model = test_support::load_fixture("counters_n3.json");
    auto blind = bfs(*model, Limits{});
    auto guided = gbfs(*model, make_heuristic(HeuristicSpec::hmd(), *model), Limits{});
    REQUIRE(blind.outcome == Outcome::Solved);
    REQUIRE(guided.outcome == Outcome::Solved);
    CHECK(validate(*model, guided.plan).valid());
    CHECK(guided.stats.expanded <= blind.stats.expanded);
}

TEST_CASE("heuristic failures become HeuristicError outcomes") {
    auto model = test_support::load_fixture("counters_n2.json");
    auto nan_result = gbfs(*model, [](const State&) { return std::nan(""); }, Limits{});
    CHECK(nan_result.outcome == Outcome::HeuristicError);
    auto throw_result =
        gbfs(*model, [](const State&) -> double { throw std::runtime_error("boom"); }, Limits{});
    CHECK(throw_result.outcome == Outcome::HeuristicError);
    CHECK(throw_result.detail == "boom");
}

TEST_CASE("identical runs produce identical plans and statistics") {
    auto model = test_support::load_fixture("counters_n3.json");
    auto h = make_heuristic(HeuristicSpec::hmd(), *model);
    auto a = gbfs(*model, h, Limits{});
    auto b = gbfs(*model, h, Limits{});
    CHECK(a.plan == b.plan);
    CHECK(a.stats.expanded == b.stats.expanded);
    CHECK(a.stats.generated == b.stats.generated);
    CHECK(a.stats.duplicates == b.stats.duplicates);
    CHECK(a.stats.peak_open == b.stats.peak_open);
}

TEST_CASE("wall clock budget halts an unbounded search promptly") {
    auto model = test_support::load_fixture("twinprime_unbounded.json");
    Limits limits;
    limits.wall_clock_seconds = 2.0;
    auto start = std::chrono::steady_clock::now();
    auto result = bfs(*model, limits);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(result.outcome == Outcome::TimedOut);
    CHECK(elapsed <= 3.0);
}

TEST_CASE("expansion cap stops the search") {
    auto model = test_support::load_fixture("counters_n3.json");
    Limits limits;
    limits.max_expansions = 10;
    auto result = bfs(*model, limits);
    CHECK(result.outcome == Outcome::TimedOut);
    CHECK(result.stats.expanded == 10);
}

TEST_CASE("memory budget stops the search") {
    auto model = test_support::load_fixture("counters_n20.json");
    Limits limits;
    limits.memory_bytes = 1024 * 1024; // far below what this space needs
    auto result = bfs(*model, limits);
    CHECK(result.outcome == Outcome::MemoryOut);
}

TEST_CASE("result wire format round-trips") {
    auto model = test_support::load_fixture("counters_n3.json");
    auto result = gbfs(*model, make_heuristic(HeuristicSpec::hmd(), *model), Limits{});
    auto back = result_from_json(result_to_json(result));
    CHECK(back.outcome == result.outcome);
    CHECK(back.plan == result.plan);
    CHECK(back.stats.expanded == result.stats.expanded);
    CHECK(back.stats.elapsed_seconds == doctest::Approx(result.stats.elapsed_seconds));
    CHECK_THROWS_AS((void)result_from_json("{\"outcome\":\"nope\"}"), ParseError);
    CHECK_THROWS_AS((void)result_from_json("not json"), ParseError);
}
