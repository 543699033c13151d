#include <algorithm>
#include <chrono>

#include "json.hpp"

#include "planner/errors.hpp"
#include "planner/orchestrator.hpp"
#include "planner/validator.hpp"

namespace planner::orchestrator {

namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json stats_to_json(const SearchStats& s) {
    return {{"expanded", s.expanded},         {"generated", s.generated},
            {"duplicates", s.duplicates},     {"elapsed_seconds", s.elapsed_seconds},
            {"peak_open", s.peak_open},       {"peak_closed", s.peak_closed}};
}

SearchStats stats_from_json(const nlohmann::json& j) {
    SearchStats s;
    s.expanded = j.value("expanded", 0ULL);
    s.generated = j.value("generated", 0ULL);
    s.duplicates = j.value("duplicates", 0ULL);
    s.elapsed_seconds = j.value("elapsed_seconds", 0.0);
    s.peak_open = j.value("peak_open", 0ULL);
    s.peak_closed = j.value("peak_closed", 0ULL);
    return s;
}

// Shared attempt loop driver for both strategies.
struct StrategyRun {
    const SynthJob& job;
    const SynthSettings& settings;
    RunRecord record;
    Clock::time_point start = Clock::now();
    int attempt_index = 0;

    explicit StrategyRun(const SynthJob& j, const SynthSettings& s) : job(j), settings(s) {
        record.instance_id = j.instance_path;
        record.domain = j.model ? j.model->domain_name : "";
    }

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
    double remaining() const { return settings.budget.total_seconds - elapsed(); }

    // Requests and compiles the next heuristic. Returns the attempt record;
    // sets `stop_outcome` when the strategy must end instead.
    std::optional<synthesis::HeuristicArtifact> next_artifact(std::string& stop_outcome,
                                                              AttemptRecord& attempt) {
        ++attempt_index;
        attempt.attempt_index = attempt_index;
        attempt.phase =
            settings.prompts.refine ? synthesis::Phase::Refine : synthesis::Phase::Unrefined;

        synthesis::PromptBundle bundle;
        try {
            bundle = synthesis::build_prompts(
                job.domain_source,
                job.instance_text.empty() ? std::nullopt
                                          : std::make_optional(job.instance_text),
                settings.prompts);
        } catch (const PlannerError& e) {
            stop_outcome = "provider_error";
            record.final_outcome = stop_outcome;
            attempt.compile_diagnostics = e.what();
            return std::nullopt;
        }

        auto api_start = Clock::now();
        synthesis::LlmResponse response;
        try {
            response = synthesis::request_heuristic(settings.llm, bundle,
                                                    job.model->domain_name, attempt_index);
        } catch (const NoCodeBlock& e) {
            attempt.api_seconds =
                std::chrono::duration<double>(Clock::now() - api_start).count();
            record.api_seconds += attempt.api_seconds;
            attempt.compiled = false;
            attempt.compile_diagnostics = e.what();
            ++record.compile_attempts;
            ++record.compile_failures;
            return synthesis::HeuristicArtifact{}; // counted as a failed attempt
        } catch (const PlannerError& e) {
            stop_outcome = "provider_error";
            record.final_outcome = stop_outcome;
            attempt.compile_diagnostics = e.what();
            return std::nullopt;
        }
        attempt.api_seconds = std::chrono::duration<double>(Clock::now() - api_start).count();
        record.api_seconds += attempt.api_seconds;
        for (const auto& t : response.transcripts) {
            attempt.input_tokens += t.input_tokens;
            attempt.output_tokens += t.output_tokens;
        }
        record.input_tokens += attempt.input_tokens;
        record.output_tokens += attempt.output_tokens;

        auto artifact = synthesis::compile_heuristic(
            response.source, settings.toolchain, attempt_index,
            settings.prompts.refine ? synthesis::Phase::Refine : synthesis::Phase::Unrefined);
        artifact.transcripts = response.transcripts;
        attempt.compile_seconds = artifact.compile_status.seconds;
        record.compile_seconds += attempt.compile_seconds;
        ++record.compile_attempts;
        attempt.compiled = artifact.compile_status.ok;
        if (!artifact.compile_status.ok) {
            ++record.compile_failures;
            attempt.compile_diagnostics = artifact.compile_status.diagnostics.substr(0, 2000);
        }
        return artifact;
    }

    // Runs a compiled worker for `slice_seconds`, validates solved plans.
    void run_slice(const synthesis::HeuristicArtifact& artifact, double slice_seconds,
                   AttemptRecord& attempt) {
        Limits slice;
        slice.wall_clock_seconds = slice_seconds;
        slice.memory_bytes = settings.budget.memory_bytes;
        auto run = synthesis::run_worker(artifact.compile_status.worker_path, job.instance_path,
                                         "gbfs", slice);
        attempt.search_seconds = run.wall_seconds;
        record.search_seconds += run.wall_seconds;
        attempt.worker_outcome = outcome_name(run.result.outcome);
        attempt.worker_stats = run.result.stats;
        record.final_outcome = attempt.worker_outcome;

        if (run.result.solved()) {
            // mirror of the verification step: never report an unchecked plan
            auto report = validate(*job.model, run.result.plan);
            if (report.valid()) {
                record.solved = true;
                record.plan_validated = true;
                record.plan = run.result.plan;
            } else {
                record.final_outcome = "invalid_plan";
                attempt.worker_outcome = "invalid_plan";
            }
        }
    }

    RunRecord finish() {
        record.total_seconds = elapsed();
        return record;
    }
};

} // namespace

RunRecord run_fc(const SynthJob& job, const SynthSettings& settings) {
    StrategyRun run(job, settings);
    run.record.configuration = "fc";
    run.record.final_outcome = "budget_exhausted";

    while (run.remaining() > 0.0) {
        AttemptRecord attempt;
        std::string stop;
        auto artifact = run.next_artifact(stop, attempt);
        run.record.attempts.push_back(attempt);
        if (!artifact)
            break;
        if (!artifact->compile_status.ok) {
            if (run.record.compile_failures >= settings.budget.max_compile_retries) {
                run.record.final_outcome = "compile_exhausted";
                break;
            }
            continue;
        }
        // first compilable heuristic gets all remaining time
        double slice = std::min(run.remaining(), settings.budget.total_seconds);
        if (slice <= 0.0) {
            run.record.final_outcome = "budget_exhausted";
            break;
        }
        run.run_slice(*artifact, slice, run.record.attempts.back());
        break;
    }
    return run.finish();
}

RunRecord run_tsr(const SynthJob& job, const SynthSettings& settings) {
    StrategyRun run(job, settings);
    run.record.configuration = "tsr";
    run.record.final_outcome = "budget_exhausted";

    int workers_run = 0;
    while (workers_run < settings.budget.max_heuristics && run.remaining() > 0.0) {
        AttemptRecord attempt;
        std::string stop;
        auto artifact = run.next_artifact(stop, attempt);
        run.record.attempts.push_back(attempt);
        if (!artifact)
            break;
        if (!artifact->compile_status.ok) {
            // compile failures consume retries and time, not heuristic slots
            if (run.record.compile_failures >= settings.budget.max_compile_retries) {
                run.record.final_outcome = "compile_exhausted";
                break;
            }
            continue;
        }
        double slice = std::min(settings.budget.slice_seconds, run.remaining());
        if (slice <= 0.0)
            break;
        run.run_slice(*artifact, slice, run.record.attempts.back());
        ++workers_run;
        if (run.record.solved)
            break;
    }
    return run.finish();
}

RunRecord run_builtin(const TaskModel& model, const HeuristicSpec& heuristic, Algorithm algorithm,
                      const Limits& limits, const std::string& instance_id) {
    RunRecord record;
    record.instance_id = instance_id;
    record.domain = model.domain_name;

    std::string heuristic_name;
    SearchResult result;
    if (algorithm == Algorithm::Bfs) {
        heuristic_name = "blind";
        record.configuration = "bfs+blind";
        result = bfs(model, limits);
    } else {
        switch (heuristic.kind) {
        case HeuristicSpec::Kind::Blind:
            heuristic_name = "blind";
            break;
        case HeuristicSpec::Kind::Hmd:
            heuristic_name = "hmd";
            break;
        case HeuristicSpec::Kind::Plugin:
            throw PlannerError("run_builtin does not accept plugin heuristics");
        }
        record.configuration = "gbfs+" + heuristic_name;
        HeuristicFn h;
        try {
            h = make_heuristic(heuristic, model);
        } catch (const PlannerError& e) {
            result.outcome = Outcome::HeuristicError;
            result.detail = e.what();
            h = nullptr;
        }
        if (h)
            result = gbfs(model, h, limits);
    }

    AttemptRecord attempt;
    attempt.attempt_index = 1;
    attempt.compiled = true;
    attempt.search_seconds = result.stats.elapsed_seconds;
    attempt.worker_outcome = outcome_name(result.outcome);
    attempt.worker_stats = result.stats;
    record.attempts.push_back(attempt);
    record.search_seconds = result.stats.elapsed_seconds;
    record.total_seconds = result.stats.elapsed_seconds;
    record.final_outcome = outcome_name(result.outcome);
    if (result.solved()) {
        auto report = validate(model, result.plan);
        if (report.valid()) {
            record.solved = true;
            record.plan_validated = true;
            record.plan = result.plan;
        } else {
            record.final_outcome = "invalid_plan";
        }
    }
    return record;
}

// ---- serialization --------------------------------------------------------

std::string RunRecord::to_json() const {
    nlohmann::json j;
    j["instance_id"] = instance_id;
    j["configuration"] = configuration;
    j["domain"] = domain;
    j["final_outcome"] = final_outcome;
    j["solved"] = solved;
    j["plan_validated"] = plan_validated;
    j["plan"] = plan;
    j["api_seconds"] = api_seconds;
    j["compile_seconds"] = compile_seconds;
    j["search_seconds"] = search_seconds;
    j["total_seconds"] = total_seconds;
    j["input_tokens"] = input_tokens;
    j["output_tokens"] = output_tokens;
    j["compile_failures"] = compile_failures;
    j["compile_attempts"] = compile_attempts;
    auto attempts_json = nlohmann::json::array();
    for (const auto& a : attempts) {
        attempts_json.push_back({{"attempt_index", a.attempt_index},
                                 {"phase", synthesis::phase_name(a.phase)},
                                 {"compiled", a.compiled},
                                 {"compile_diagnostics", a.compile_diagnostics},
                                 {"api_seconds", a.api_seconds},
                                 {"compile_seconds", a.compile_seconds},
                                 {"search_seconds", a.search_seconds},
                                 {"input_tokens", a.input_tokens},
                                 {"output_tokens", a.output_tokens},
                                 {"worker_outcome", a.worker_outcome},
                                 {"worker_stats", stats_to_json(a.worker_stats)}});
    }
    j["attempts"] = attempts_json;
    return j.dump();
}

RunRecord RunRecord::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad run record: ") + e.what());
    }
    RunRecord r;
    r.instance_id = j.value("instance_id", "");
    r.configuration = j.value("configuration", "");
    r.domain = j.value("domain", "");
    r.final_outcome = j.value("final_outcome", "");
    r.solved = j.value("solved", false);
    r.plan_validated = j.value("plan_validated", false);
    if (j.contains("plan"))
        r.plan = j["plan"].get<std::vector<std::string>>();
    r.api_seconds = j.value("api_seconds", 0.0);
    r.compile_seconds = j.value("compile_seconds", 0.0);
    r.search_seconds = j.value("search_seconds", 0.0);
    r.total_seconds = j.value("total_seconds", 0.0);
    r.input_tokens = j.value("input_tokens", 0ULL);
    r.output_tokens = j.value("output_tokens", 0ULL);
    r.compile_failures = j.value("compile_failures", 0);
    r.compile_attempts = j.value("compile_attempts", 0);
    for (const auto& a : j.value("attempts", nlohmann::json::array())) {
        AttemptRecord attempt;
        attempt.attempt_index = a.value("attempt_index", 0);
        std::string phase = a.value("phase", "unrefined");
        attempt.phase = phase == "refine" ? synthesis::Phase::Refine
                        : phase == "strategize" ? synthesis::Phase::Strategize
                                                : synthesis::Phase::Unrefined;
        attempt.compiled = a.value("compiled", false);
        attempt.compile_diagnostics = a.value("compile_diagnostics", "");
        attempt.api_seconds = a.value("api_seconds", 0.0);
        attempt.compile_seconds = a.value("compile_seconds", 0.0);
        attempt.search_seconds = a.value("search_seconds", 0.0);
        attempt.input_tokens = a.value("input_tokens", 0ULL);
        attempt.output_tokens = a.value("output_tokens", 0ULL);
        attempt.worker_outcome = a.value("worker_outcome", "");
        if (a.contains("worker_stats"))
            attempt.worker_stats = stats_from_json(a["worker_stats"]);
        r.attempts.push_back(std::move(attempt));
    }
    return r;
}

} // namespace planner::orchestrator
