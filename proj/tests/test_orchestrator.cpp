#include "doctest.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "planner/errors.hpp"
#include "planner/orchestrator.hpp"
#include "planner/validator.hpp"

#include "support/test_support.hpp"

using namespace planner;
using namespace planner::orchestrator;

namespace {

SynthJob make_job(const std::string& instance_fixture) {
    SynthJob job;
    job.instance_path = test_support::instance_path(instance_fixture);
    job.model = load_instance_file(job.instance_path, builtin_registry());
    {
        std::ifstream in(job.instance_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        job.instance_text = buf.str();
    }
    std::string stem = job.model->domain_name;
    for (char& c : stem)
        if (c == '-')
            c = '_';
    std::ifstream src(synthesis::default_domain_source_dir() + "/" + stem + ".cpp");
    std::ostringstream buf;
    buf << src.rdbuf();
    job.domain_source = buf.str();
    REQUIRE(!job.domain_source.empty());
    return job;
}

SynthSettings make_settings(const std::string& schedule, const std::string& tag) {
    SynthSettings settings;
    settings.llm = synthesis::LlmConfig::offline(test_support::fixture_root(schedule));
    settings.prompts.strategize = false;
    settings.prompts.refine = false;
    settings.toolchain = synthesis::ToolchainConfig::detect();
    settings.toolchain.work_dir = test_support::binary_dir() + "/orchwork/" + tag;
    return settings;
}

} // namespace

TEST_CASE("run_builtin wraps searches in validated run records") {
    auto counters = test_support::load_fixture("counters_n2.json");
    auto bfs_record = run_builtin(*counters, HeuristicSpec::blind(), Algorithm::Bfs, Limits{},
                                  "counters_n2");
    CHECK(bfs_record.solved);
    CHECK(bfs_record.plan_validated);
    CHECK(bfs_record.plan.size() == 1);
    CHECK(bfs_record.configuration == "bfs+blind");
    CHECK(bfs_record.final_outcome == "solved");

    auto gbfs_record = run_builtin(*counters, HeuristicSpec::hmd(), Algorithm::Gbfs, Limits{});
    CHECK(gbfs_record.solved);
    CHECK(gbfs_record.configuration == "gbfs+hmd");

    auto dead = test_support::load_fixture("pacman_unavoidable.json");
    auto dead_record = run_builtin(*dead, HeuristicSpec::blind(), Algorithm::Bfs, Limits{});
    CHECK_FALSE(dead_record.solved);
    CHECK(dead_record.final_outcome == "exhausted");

    CHECK_THROWS_AS((void)run_builtin(*counters, HeuristicSpec::plugin("w"), Algorithm::Gbfs,
                                      Limits{}),
                    PlannerError);
}

TEST_CASE("run_fc retries compiles until the first success") {
    auto job = make_job("counters_n2.json");
    auto settings = make_settings("broken_then_good", "fc_retry");
    auto record = run_fc(job, settings);
    CHECK(record.solved);
    CHECK(record.plan_validated);
    CHECK(record.final_outcome == "solved");
    REQUIRE(record.attempts.size() == 3);
    CHECK_FALSE(record.attempts[0].compiled);
    CHECK_FALSE(record.attempts[1].compiled);
    CHECK(record.attempts[2].compiled);
    CHECK(record.compile_attempts == 3);
    CHECK(record.compile_failures == 2);
    CHECK(validate(*job.model, record.plan).valid());
}

TEST_CASE("run_fc stops at max_compile_retries on an all-broken schedule") {
    auto job = make_job("counters_n2.json");
    auto settings = make_settings("all_broken", "fc_allbroken");
    settings.budget.max_compile_retries = 3;
    auto record = run_fc(job, settings);
    CHECK_FALSE(record.solved);
    CHECK(record.final_outcome == "compile_exhausted");
    CHECK(record.attempts.size() == 3); // fixture 4.md exists but is never requested
    CHECK(record.compile_failures == 3);
}

TEST_CASE("run_fc gives the first compiled heuristic the remaining budget") {
    auto job = make_job("counters_n3.json");
    auto settings = make_settings("good", "fc_good");
    auto record = run_fc(job, settings);
    CHECK(record.solved);
    REQUIRE(record.attempts.size() == 1);
    CHECK(record.attempts[0].worker_outcome == "solved");
    CHECK(record.input_tokens == 1342);
    CHECK(record.output_tokens == 187);
}

TEST_CASE("run_tsr restarts with a fresh heuristic after a timed-out slice") {
    auto job = make_job("counters_n3.json");
    auto settings = make_settings("tsr_loop_good", "tsr_loop");
    settings.budget.slice_seconds = 1.5;
    settings.budget.total_seconds = 60.0;
    auto record = run_tsr(job, settings);
    CHECK(record.solved);
    REQUIRE(record.attempts.size() == 2);
    CHECK(record.attempts[0].worker_outcome == "timed_out");
    CHECK(record.attempts[1].worker_outcome == "solved");
    CHECK(record.attempts[0].search_seconds <= settings.budget.slice_seconds + 1.0);
}

TEST_CASE("run_tsr stops after one solving attempt") {
    auto job = make_job("counters_n3.json");
    auto settings = make_settings("good", "tsr_good");
    auto record = run_tsr(job, settings);
    CHECK(record.solved);
    CHECK(record.attempts.size() == 1);
}

TEST_CASE("run_tsr respects the heuristic slot cap") {
    auto job = make_job("counters_n3.json");
    auto settings = make_settings("tsr_all_loop", "tsr_cap");
    settings.budget.slice_seconds = 0.5;
    settings.budget.total_seconds = 60.0;
    settings.budget.max_heuristics = 2;
    auto record = run_tsr(job, settings);
    CHECK_FALSE(record.solved);
    CHECK(record.attempts.size() == 2);
    CHECK(record.final_outcome == "timed_out");
}

TEST_CASE("token accounting accumulates across attempts") {
    auto job = make_job("counters_n2.json");
    auto settings = make_settings("usage", "usage");
    auto record = run_fc(job, settings);
    CHECK(record.solved);
    CHECK(record.input_tokens == 4000);
    CHECK(record.output_tokens == 400);
    CHECK(record.compile_attempts == 2);
    CHECK(record.compile_failures == 1);
}

TEST_CASE("run records serialize and round-trip") {
    auto counters = test_support::load_fixture("counters_n2.json");
    auto record = run_builtin(*counters, HeuristicSpec::hmd(), Algorithm::Gbfs, Limits{}, "id-1");
    auto back = RunRecord::from_json(record.to_json());
    CHECK(back.instance_id == record.instance_id);
    CHECK(back.configuration == record.configuration);
    CHECK(back.solved == record.solved);
    CHECK(back.plan == record.plan);
    CHECK(back.attempts.size() == record.attempts.size());
    CHECK(back.attempts[0].worker_outcome == record.attempts[0].worker_outcome);
    CHECK_THROWS_AS((void)RunRecord::from_json("nonsense"), ParseError);
}

TEST_CASE("report aggregates by domain and configuration") {
    RunRecord a;
    a.domain = "counters";
    a.configuration = "tsr";
    a.solved = true;
    a.input_tokens = 1000;
    a.output_tokens = 100;
    a.compile_attempts = 2;
    a.compile_failures = 1;
    a.api_seconds = 4.0;
    RunRecord b = a;
    b.solved = false;
    b.input_tokens = 3000;
    b.output_tokens = 300;
    b.compile_attempts = 1;
    b.compile_failures = 0;
    b.api_seconds = 2.0;
    RunRecord c;
    c.domain = "pacman";
    c.configuration = "fc";
    c.solved = true;
    c.compile_attempts = 1;

    auto csv = report_csv({a, b, c});
    CHECK(csv.find("domain,configuration,solved,attempted,") == 0);
    CHECK(csv.find("counters,tsr,1,2,3,") != std::string::npos); // mean api = (4+2)/2
    CHECK(csv.find(",2000,") != std::string::npos);              // mean input tokens
    CHECK(csv.find("pacman,fc,1,1,") != std::string::npos);
    // compile failure rate = 1 failure / 3 attempts
    CHECK(csv.find("0.3333333333333333") != std::string::npos);

    CHECK_THROWS_AS((void)report_csv({}), PlannerError);

    std::filesystem::create_directories(test_support::binary_dir() + "/orchwork");
    std::string path = test_support::binary_dir() + "/orchwork/report_test.csv";
    report({a, b, c}, path);
    std::ifstream in(path);
    CHECK(in.good());
    CHECK_THROWS_AS(report({a}, "/no/such/dir/report.csv"), PlannerError);
}
