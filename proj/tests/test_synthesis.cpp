#include "doctest.h"

#include <chrono>
#include <filesystem>

#include "planner/errors.hpp"
#include "planner/synthesis.hpp"

#include "support/test_support.hpp"

using namespace planner;
using namespace planner::synthesis;

namespace {

ToolchainConfig test_toolchain(const std::string& tag) {
    auto tc = ToolchainConfig::detect();
    tc.work_dir = test_support::binary_dir() + "/synthwork/" + tag;
    return tc;
}

std::string good_counters_source() {
    LlmConfig config = LlmConfig::offline(test_support::fixture_root("good"));
    PromptOptions options;
    options.strategize = false;
    auto bundle = build_prompts("// domain source", std::nullopt, options);
    return request_heuristic(config, bundle, "counters", 1).source;
}

} // namespace

TEST_CASE("build_prompts phase selection") {
    PromptOptions none;
    none.strategize = false;
    none.refine = false;
    auto bare = build_prompts("// src", std::nullopt, none);
    CHECK_FALSE(bare.phase1_strategize.has_value());
    CHECK_FALSE(bare.phase3_refine.has_value());
    CHECK(bare.phase2_unrefined.find("// src") != std::string::npos);
    CHECK(bare.phase2_unrefined.find(worker_heuristic_signature()) != std::string::npos);

    PromptOptions all;
    all.strategize = true;
    all.refine = true;
    auto full = build_prompts("// src", std::string("{\"domain\":\"counters\"}"), all);
    CHECK(full.phase1_strategize.has_value());
    CHECK(full.phase3_refine.has_value());
    CHECK(full.phase1_strategize->find("// src") != std::string::npos);
    CHECK(full.phase3_refine->find("{\"domain\":\"counters\"}") != std::string::npos);

    PromptOptions refine_only;
    refine_only.strategize = false;
    refine_only.refine = true;
    CHECK_THROWS_AS((void)build_prompts("// src", std::nullopt, refine_only), MissingInstance);
}

TEST_CASE("phase 2 prompt carries the search guidelines") {
    PromptOptions options;
    options.strategize = false;
    auto bundle = build_prompts("// src", std::nullopt, options);
    const std::string& p2 = bundle.phase2_unrefined;
    CHECK(p2.find("admissibility") != std::string::npos);
    CHECK(p2.find("monotonous decrease") != std::string::npos);
    CHECK(p2.find("compilation errors") != std::string::npos);
    CHECK(p2.find("clarification") != std::string::npos);
}

TEST_CASE("extract_code takes the last fenced block") {
    CHECK(extract_code("```\nfn h\n```") == "fn h\n");
    CHECK(extract_code("prose\n```cpp\nfirst\n```\nmore\n```cpp\nsecond\n```\n") == "second\n");
    CHECK_THROWS_AS((void)extract_code("no code here at all"), NoCodeBlock);
    CHECK_THROWS_AS((void)extract_code("unterminated\n```cpp\nbody\n"), NoCodeBlock);
}

TEST_CASE("offline provider replays fixtures with usage accounting") {
    LlmConfig config = LlmConfig::offline(test_support::fixture_root("good"));
    PromptOptions options; // strategize on, refine off
    auto bundle = build_prompts("// domain source", std::nullopt, options);
    auto response = request_heuristic(config, bundle, "counters", 1);
    REQUIRE(response.transcripts.size() == 2);
    CHECK(response.transcripts[0].phase == Phase::Strategize);
    CHECK(response.transcripts[0].usage_missing); // prose fixture has no sidecar
    CHECK(response.transcripts[1].phase == Phase::Unrefined);
    CHECK(response.transcripts[1].input_tokens == 1342);
    CHECK(response.transcripts[1].output_tokens == 187);
    CHECK(response.source.find("double heuristic(const plnr_state* state)") != std::string::npos);

    CHECK_THROWS_AS((void)request_heuristic(config, bundle, "counters", 9), FixtureMissing);
    CHECK_THROWS_AS((void)request_heuristic(config, bundle, "nosuchdomain", 1), FixtureMissing);
}

TEST_CASE("offline pipeline is reproducible across runs") {
    LlmConfig config = LlmConfig::offline(test_support::fixture_root("good"));
    PromptOptions options;
    options.refine = true;
    auto bundle = build_prompts("// domain source", std::string("{}"), options);
    auto a = request_heuristic(config, bundle, "counters", 1);
    auto b = request_heuristic(config, bundle, "counters", 1);
    CHECK(a.source == b.source);
    REQUIRE(a.transcripts.size() == b.transcripts.size());
    for (std::size_t i = 0; i < a.transcripts.size(); ++i) {
        CHECK(a.transcripts[i].input_tokens == b.transcripts[i].input_tokens);
        CHECK(a.transcripts[i].latency_seconds == b.transcripts[i].latency_seconds);
        CHECK(a.transcripts[i].timestamp == b.transcripts[i].timestamp);
    }
}

TEST_CASE("compile_heuristic builds a runnable worker from good source") {
    auto artifact = compile_heuristic(good_counters_source(), test_toolchain("compile_good"), 1,
                                      Phase::Unrefined);
    REQUIRE(artifact.compile_status.ok);
    CHECK(std::filesystem::exists(artifact.compile_status.worker_path));
    auto perms = std::filesystem::status(artifact.compile_status.worker_path).permissions();
    CHECK((perms & std::filesystem::perms::owner_exec) != std::filesystem::perms::none);

    Limits slice;
    slice.wall_clock_seconds = 30.0;
    slice.memory_bytes = 1ULL << 30;
    auto run = run_worker(artifact.compile_status.worker_path,
                          test_support::instance_path("counters_n2.json"), "gbfs", slice);
    CHECK(run.result.outcome == Outcome::Solved);
    CHECK(run.result.plan.size() == 1);
}

TEST_CASE("compile_heuristic surfaces diagnostics for bad source") {
    auto syntax = compile_heuristic("double heuristic(const plnr_state* s) { return 0.0 }",
                                    test_toolchain("compile_syntax"), 1, Phase::Unrefined);
    CHECK_FALSE(syntax.compile_status.ok);
    CHECK_FALSE(syntax.compile_status.diagnostics.empty());

    auto wrong_sig = compile_heuristic("double heuristic(double x) { return x; }",
                                       test_toolchain("compile_sig"), 2, Phase::Unrefined);
    CHECK_FALSE(wrong_sig.compile_status.ok);
    CHECK_FALSE(wrong_sig.compile_status.diagnostics.empty());

    ToolchainConfig missing = test_toolchain("compile_missing");
    missing.compiler = "no-such-compiler-on-path";
    CHECK_THROWS_AS((void)compile_heuristic("double heuristic;", missing, 3, Phase::Unrefined),
                    ToolchainMissing);
}

TEST_CASE("run_worker maps adversarial workers to the right outcomes") {
    LlmConfig config = LlmConfig::offline(test_support::fixture_root("adversarial"));
    PromptOptions options;
    options.strategize = false;
    auto bundle = build_prompts("// domain source", std::nullopt, options);
    auto toolchain = test_toolchain("adversarial");
    std::string instance = test_support::instance_path("counters_n3.json");

    SUBCASE("looping heuristic is killed at the wall clock") {
        auto artifact = compile_heuristic(request_heuristic(config, bundle, "counters", 1).source,
                                          toolchain, 1, Phase::Unrefined);
        REQUIRE(artifact.compile_status.ok);
        Limits slice;
        slice.wall_clock_seconds = 1.0;
        slice.memory_bytes = 1ULL << 30;
        auto start = std::chrono::steady_clock::now();
        auto run = run_worker(artifact.compile_status.worker_path, instance, "gbfs", slice);
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(run.result.outcome == Outcome::TimedOut);
        CHECK(elapsed <= 2.0);
    }

    SUBCASE("startup crash maps to HeuristicError") {
        auto artifact = compile_heuristic(request_heuristic(config, bundle, "counters", 2).source,
                                          toolchain, 2, Phase::Unrefined);
        REQUIRE(artifact.compile_status.ok);
        Limits slice;
        slice.wall_clock_seconds = 10.0;
        slice.memory_bytes = 1ULL << 30;
        auto run = run_worker(artifact.compile_status.worker_path, instance, "gbfs", slice);
        CHECK(run.result.outcome == Outcome::HeuristicError);
    }

    SUBCASE("allocation far beyond the cap maps to MemoryOut") {
        auto artifact = compile_heuristic(request_heuristic(config, bundle, "counters", 3).source,
                                          toolchain, 3, Phase::Unrefined);
        REQUIRE(artifact.compile_status.ok);
        Limits slice;
        slice.wall_clock_seconds = 10.0;
        slice.memory_bytes = 256ULL * 1024 * 1024; // fixture allocates 512 MiB
        auto run = run_worker(artifact.compile_status.worker_path, instance, "gbfs", slice);
        CHECK(run.result.outcome == Outcome::MemoryOut);
    }

    SUBCASE("missing worker binary maps to HeuristicError") {
        Limits slice;
        slice.wall_clock_seconds = 5.0;
        auto run = run_worker("/no/such/worker", instance, "gbfs", slice);
        CHECK(run.result.outcome == Outcome::HeuristicError);
    }
}
