// Command line front end. Links only the public C API; JSON here is client
// plumbing for plan files and bench configs.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <planner/planner.h>

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitNotSolved = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

int fail(plnr_status status) {
    std::cerr << "error: " << plnr_last_error() << "\n";
    switch (status) {
    case PLNR_ERR_INVALID_ARGUMENT:
    case PLNR_ERR_UNKNOWN_DOMAIN:
    case PLNR_ERR_SCHEMA:
    case PLNR_ERR_UNBOUND_VARIABLE:
        return kExitUsage;
    default:
        return kExitInternal;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool check_domain_flag(const std::string& expected, plnr_task* task) {
    if (expected.empty())
        return true;
    return expected == plnr_task_domain(task);
}

struct SolveArgs {
    std::string domain;
    std::string instance;
    std::string algorithm = "bfs";
    std::string heuristic = "blind";
    double time_limit = 600.0;
    std::uint64_t memory_limit = 8ULL * 1024 * 1024 * 1024;
    std::uint64_t max_expansions = 0;
    std::string plan_out;
};

int cmd_solve(const SolveArgs& args) {
    plnr_limits limits;
    plnr_limits_default(&limits);
    limits.wall_clock_seconds = args.time_limit;
    limits.memory_bytes = args.memory_limit;
    limits.max_expansions = args.max_expansions;

    plnr_result* result = nullptr;
    plnr_status status;
    std::string domain_name = args.domain;

    if (args.heuristic.rfind("plugin:", 0) == 0) {
        std::string worker = args.heuristic.substr(7);
        status = plnr_run_plugin_worker(worker.c_str(), args.instance.c_str(),
                                        args.algorithm.c_str(), &limits, &result);
        if (status != PLNR_OK)
            return fail(status);
    } else {
        plnr_task* task = nullptr;
        status = plnr_task_load_file(args.instance.c_str(), &task);
        if (status != PLNR_OK)
            return fail(status);
        if (!check_domain_flag(args.domain, task)) {
            std::cerr << "error: --domain " << args.domain << " does not match instance domain "
                      << plnr_task_domain(task) << "\n";
            plnr_task_free(task);
            return kExitUsage;
        }
        domain_name = plnr_task_domain(task);
        status = plnr_solve(task, args.algorithm.c_str(), args.heuristic.c_str(), &limits, &result);
        plnr_task_free(task);
        if (status != PLNR_OK)
            return fail(status);
    }

    char* json = nullptr;
    if (plnr_result_to_json(result, &json) != PLNR_OK) {
        plnr_result_free(result);
        return kExitInternal;
    }
    std::cout << json << "\n";
    plnr_string_free(json);

    int solved = plnr_result_solved(result);
    if (solved && !args.plan_out.empty()) {
        nlohmann::json plan_doc;
        plan_doc["domain"] = domain_name;
        plan_doc["instance"] = args.instance;
        auto plan = nlohmann::json::array();
        for (size_t i = 0; i < plnr_result_plan_length(result); ++i)
            plan.push_back(plnr_result_plan_action(result, i));
        plan_doc["plan"] = plan;
        std::ofstream out(args.plan_out);
        out << plan_doc.dump(2) << "\n";
        if (!out.good()) {
            std::cerr << "error: cannot write plan file " << args.plan_out << "\n";
            plnr_result_free(result);
            return kExitInternal;
        }
    }
    plnr_result_free(result);
    return solved ? kExitSolved : kExitNotSolved;
}

struct ValidateArgs {
    std::string domain;
    std::string instance;
    std::string plan_file;
};

int cmd_validate(const ValidateArgs& args) {
    nlohmann::json plan_doc;
    try {
        plan_doc = nlohmann::json::parse(read_file(args.plan_file));
    } catch (const std::exception& e) {
        std::cerr << "error: bad plan file: " << e.what() << "\n";
        return kExitUsage;
    }
    std::string instance = args.instance;
    if (instance.empty())
        instance = plan_doc.value("instance", "");
    if (instance.empty()) {
        std::cerr << "error: no instance given (flag or plan file)\n";
        return kExitUsage;
    }
    std::vector<std::string> actions;
    if (plan_doc.contains("plan"))
        actions = plan_doc["plan"].get<std::vector<std::string>>();

    plnr_task* task = nullptr;
    plnr_status status = plnr_task_load_file(instance.c_str(), &task);
    if (status != PLNR_OK)
        return fail(status);
    if (!check_domain_flag(args.domain, task)) {
        std::cerr << "error: --domain " << args.domain << " does not match instance domain "
                  << plnr_task_domain(task) << "\n";
        plnr_task_free(task);
        return kExitUsage;
    }

    std::vector<const char*> raw;
    raw.reserve(actions.size());
    for (const auto& a : actions)
        raw.push_back(a.c_str());

    plnr_validation* validation = nullptr;
    status = plnr_validate(task, raw.data(), raw.size(), &validation);
    plnr_task_free(task);
    if (status != PLNR_OK)
        return fail(status);

    char* json = nullptr;
    plnr_validation_to_json(validation, &json);
    std::cout << json << "\n";
    plnr_string_free(json);
    int valid = plnr_validation_valid(validation);
    plnr_validation_free(validation);
    return valid ? kExitSolved : kExitNotSolved;
}

struct SynthArgs {
    std::string domain;
    std::string instance;
    std::string strategy = "fc";
    std::string model;
    std::string provider = "offline";
    std::string fixtures;
    bool strategize = true;
    bool refine = false;
    double budget = 600.0;
    double slice = 100.0;
    std::uint64_t memory_limit = 8ULL * 1024 * 1024 * 1024;
    int max_heuristics = 5;
    int max_compile_retries = 10;
    std::string work_dir;
    std::string record_out;
};

int cmd_synth(const SynthArgs& args) {
    plnr_synth_options options;
    plnr_synth_options_default(&options);
    options.strategy = args.strategy.c_str();
    options.provider = args.provider.c_str();
    if (!args.model.empty())
        options.model_id = args.model.c_str();
    if (!args.fixtures.empty())
        options.fixtures_dir = args.fixtures.c_str();
    options.strategize = args.strategize ? 1 : 0;
    options.refine = args.refine ? 1 : 0;
    options.total_seconds = args.budget;
    options.slice_seconds = args.slice;
    options.memory_bytes = args.memory_limit;
    options.max_heuristics = args.max_heuristics;
    options.max_compile_retries = args.max_compile_retries;
    if (!args.work_dir.empty())
        options.work_dir = args.work_dir.c_str();

    plnr_run_record* record = nullptr;
    plnr_status status = plnr_synth_run(args.instance.c_str(), &options, &record);
    if (status != PLNR_OK)
        return fail(status);

    char* json = nullptr;
    plnr_run_record_to_json(record, &json);
    std::cout << json << "\n";
    if (!args.record_out.empty()) {
        std::ofstream out(args.record_out);
        out << json << "\n";
    }
    plnr_string_free(json);
    int solved = plnr_run_record_solved(record);
    plnr_run_record_free(record);
    return solved ? kExitSolved : kExitNotSolved;
}

struct BenchArgs {
    std::string suite;
    std::string config;
    std::string report = "report.csv";
    int jobs = 1;
};

int cmd_bench(const BenchArgs& args) {
    nlohmann::json config;
    try {
        config = nlohmann::json::parse(read_file(args.config));
    } catch (const std::exception& e) {
        std::cerr << "error: bad config file: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<std::string> instances;
    {
        namespace fs = std::filesystem;
        if (!fs::is_directory(args.suite)) {
            std::cerr << "error: suite directory not found: " << args.suite << "\n";
            return kExitUsage;
        }
        for (const auto& entry : fs::directory_iterator(args.suite))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                instances.push_back(entry.path().string());
        std::sort(instances.begin(), instances.end());
    }
    if (instances.empty()) {
        std::cerr << "error: no .json instances under " << args.suite << "\n";
        return kExitUsage;
    }

    std::string mode = config.value("mode", "builtin");
    std::vector<std::string> records(instances.size());
    std::vector<int> solved(instances.size(), 0);
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex log_mutex;

    auto run_one = [&](size_t idx) {
        const std::string& instance = instances[idx];
        plnr_run_record* record = nullptr;
        plnr_status status;
        if (mode == "synth") {
            plnr_synth_options options;
            plnr_synth_options_default(&options);
            std::string strategy = config.value("strategy", "fc");
            std::string provider = config.value("provider", "offline");
            std::string model = config.value("model", "");
            std::string fixtures = config.value("fixtures", "");
            options.strategy = strategy.c_str();
            options.provider = provider.c_str();
            if (!model.empty())
                options.model_id = model.c_str();
            if (!fixtures.empty())
                options.fixtures_dir = fixtures.c_str();
            options.strategize = config.value("strategize", true) ? 1 : 0;
            options.refine = config.value("refine", false) ? 1 : 0;
            options.total_seconds = config.value("budget", 600.0);
            options.slice_seconds = config.value("slice", 100.0);
            options.memory_bytes = config.value("memory_limit", 8ULL * 1024 * 1024 * 1024);
            options.max_heuristics = config.value("max_heuristics", 5);
            options.max_compile_retries = config.value("max_compile_retries", 10);
            status = plnr_synth_run(instance.c_str(), &options, &record);
        } else {
            plnr_limits limits;
            plnr_limits_default(&limits);
            limits.wall_clock_seconds = config.value("time_limit", 600.0);
            limits.memory_bytes = config.value("memory_limit", 8ULL * 1024 * 1024 * 1024);
            limits.max_expansions = config.value("max_expansions", 0ULL);
            std::string algorithm = config.value("algorithm", "gbfs");
            std::string heuristic = config.value("heuristic", "hmd");
            status = plnr_run_builtin(instance.c_str(), algorithm.c_str(), heuristic.c_str(),
                                      &limits, &record);
        }
        std::lock_guard<std::mutex> lock(log_mutex);
        if (status != PLNR_OK) {
            std::cerr << "error on " << instance << ": " << plnr_last_error() << "\n";
            failed = true;
            return;
        }
        char* json = nullptr;
        plnr_run_record_to_json(record, &json);
        records[idx] = json;
        plnr_string_free(json);
        solved[idx] = plnr_run_record_solved(record);
        std::cout << instance << ": " << plnr_run_record_outcome(record) << "\n";
        plnr_run_record_free(record);
    };

    auto worker = [&] {
        for (;;) {
            size_t idx = next.fetch_add(1);
            if (idx >= instances.size())
                return;
            run_one(idx);
        }
    };
    int jobs = std::max(1, args.jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    if (failed)
        return kExitInternal;

    std::vector<const char*> raw;
    raw.reserve(records.size());
    for (const auto& r : records)
        raw.push_back(r.c_str());
    plnr_status status = plnr_report_csv(raw.data(), raw.size(), args.report.c_str());
    if (status != PLNR_OK)
        return fail(status);
    std::cout << "report written to " << args.report << "\n";

    for (int s : solved)
        if (!s)
            return kExitNotSolved;
    return kExitSolved;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planner: budgeted search over executable planning tasks"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "run BFS/GBFS with a built-in or plugin heuristic");
    solve->add_option("--domain", solve_args.domain, "expected domain name (cross-check)");
    solve->add_option("--instance", solve_args.instance, "instance JSON file")->required();
    solve->add_option("--algorithm", solve_args.algorithm, "bfs | gbfs")
        ->check(CLI::IsMember({"bfs", "gbfs"}));
    solve->add_option("--heuristic", solve_args.heuristic, "blind | hmd | plugin:PATH");
    solve->add_option("--time-limit", solve_args.time_limit, "wall clock seconds");
    solve->add_option("--memory-limit", solve_args.memory_limit, "bytes");
    solve->add_option("--max-expansions", solve_args.max_expansions, "0 = unlimited");
    solve->add_option("--plan-out", solve_args.plan_out, "write the plan file here when solved");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "replay a plan and check the goal");
    validate->add_option("--domain", validate_args.domain, "expected domain name (cross-check)");
    validate->add_option("--instance", validate_args.instance,
                         "instance JSON file (defaults to the plan file's)");
    validate->add_option("--plan", validate_args.plan_file, "plan JSON file")->required();

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "synthesize a heuristic and search with it");
    synth->add_option("--domain", synth_args.domain, "expected domain name (cross-check)");
    synth->add_option("--instance", synth_args.instance, "instance JSON file")->required();
    synth->add_option("--strategy", synth_args.strategy, "fc | tsr")
        ->check(CLI::IsMember({"fc", "tsr"}));
    synth->add_option("--model", synth_args.model, "model id");
    synth->add_option("--provider", synth_args.provider, "http | offline")
        ->check(CLI::IsMember({"http", "offline"}));
    synth->add_option("--fixtures", synth_args.fixtures, "fixture root for the offline provider");
    synth->add_flag("--strategize,!--no-strategize", synth_args.strategize,
                    "include the strategizing phase");
    synth->add_flag("--refine,!--no-refine", synth_args.refine, "include the refinement phase");
    synth->add_option("--budget", synth_args.budget, "total seconds (search + API + compile)");
    synth->add_option("--slice", synth_args.slice, "per-heuristic seconds (tsr)");
    synth->add_option("--memory-limit", synth_args.memory_limit, "bytes per worker");
    synth->add_option("--max-heuristics", synth_args.max_heuristics, "tsr heuristic slots");
    synth->add_option("--max-compile-retries", synth_args.max_compile_retries,
                      "stop after this many failed compiles");
    synth->add_option("--work-dir", synth_args.work_dir, "scratch directory");
    synth->add_option("--record-out", synth_args.record_out, "write the run record JSON here");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "run a suite of instances and write a CSV report");
    bench->add_option("--suite", bench_args.suite, "directory of instance JSON files")->required();
    bench->add_option("--config", bench_args.config, "bench config JSON file")->required();
    bench->add_option("--report", bench_args.report, "output CSV path");
    bench->add_option("--jobs", bench_args.jobs, "parallel runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (solve->parsed())
            return cmd_solve(solve_args);
        if (validate->parsed())
            return cmd_validate(validate_args);
        if (synth->parsed())
            return cmd_synth(synth_args);
        if (bench->parsed())
            return cmd_bench(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
