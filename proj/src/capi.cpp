#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "planner/planner.h"

#include "planner/domains.hpp"
#include "planner/errors.hpp"
#include "planner/heuristics.hpp"
#include "planner/orchestrator.hpp"
#include "planner/registry.hpp"
#include "planner/search.hpp"
#include "planner/synthesis.hpp"
#include "planner/validator.hpp"

using planner::State;

namespace {

thread_local std::string tl_error;

void set_error(const std::string& message) { tl_error = message; }

template <typename Fn>
plnr_status guard(Fn&& fn) {
    try {
        return fn();
    } catch (const planner::UnknownDomain& e) {
        set_error(e.what());
        return PLNR_ERR_UNKNOWN_DOMAIN;
    } catch (const planner::SchemaViolation& e) {
        set_error(e.what());
        return PLNR_ERR_SCHEMA;
    } catch (const planner::UnboundVariable& e) {
        set_error(e.what());
        return PLNR_ERR_UNBOUND_VARIABLE;
    } catch (const planner::EvalError& e) {
        set_error(e.what());
        return PLNR_ERR_EVAL;
    } catch (const planner::ParseError& e) {
        set_error(e.what());
        return PLNR_ERR_PARSE;
    } catch (const planner::SynthesisError& e) {
        set_error(e.what());
        return PLNR_ERR_SYNTHESIS;
    } catch (const planner::LoadError& e) {
        set_error(e.what());
        return PLNR_ERR_IO;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return PLNR_ERR_OUT_OF_MEMORY;
    } catch (const std::exception& e) {
        set_error(e.what());
        return PLNR_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown internal error");
        return PLNR_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

struct plnr_state {
    State state;
    // lazily built index used by plnr_state_fluent_name
    mutable std::vector<std::string> names;

    const std::vector<std::string>& name_index() const {
        if (names.empty()) {
            state.payload().for_each_fluent(
                [this](const std::string& n, const planner::Value&) { names.push_back(n); });
        }
        return names;
    }
};

struct plnr_task {
    planner::TaskModelPtr model;
    plnr_state initial;
};

struct plnr_result {
    planner::SearchResult result;
};

struct plnr_validation {
    planner::ValidationReport report;
};

struct plnr_run_record {
    planner::orchestrator::RunRecord record;
};

extern "C" {

const char* plnr_version(void) { return "0.1.0"; }

const char* plnr_last_error(void) { return tl_error.c_str(); }

void plnr_string_free(char* s) { std::free(s); }

/* ---- tasks ---------------------------------------------------------- */

plnr_status plnr_task_load_file(const char* path, plnr_task** out) {
    return guard([&]() -> plnr_status {
        if (!path || !out) {
            set_error("path and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        auto model = planner::load_instance_file(path, planner::builtin_registry());
        auto* task = new plnr_task{model, {model->initial, {}}};
        *out = task;
        return PLNR_OK;
    });
}

plnr_status plnr_task_load_json(const char* json_text, plnr_task** out) {
    return guard([&]() -> plnr_status {
        if (!json_text || !out) {
            set_error("json_text and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        auto model = planner::load_instance_text(json_text, planner::builtin_registry());
        auto* task = new plnr_task{model, {model->initial, {}}};
        *out = task;
        return PLNR_OK;
    });
}

void plnr_task_free(plnr_task* task) { delete task; }

const char* plnr_task_domain(const plnr_task* task) {
    return task ? task->model->domain_name.c_str() : nullptr;
}

const plnr_state* plnr_task_initial_state(const plnr_task* task) {
    return task ? &task->initial : nullptr;
}

size_t plnr_domain_count(void) { return planner::builtin_registry().names().size(); }

const char* plnr_domain_name(size_t index) {
    static thread_local std::string holder;
    auto names = planner::builtin_registry().names();
    if (index >= names.size())
        return nullptr;
    holder = names[index];
    return holder.c_str();
}

/* ---- states ---------------------------------------------------------- */

size_t plnr_state_fluent_count(const plnr_state* s) {
    return s ? s->state.payload().fluent_count() : 0;
}

const char* plnr_state_fluent_name(const plnr_state* s, size_t index) {
    if (!s)
        return nullptr;
    const auto& names = s->name_index();
    return index < names.size() ? names[index].c_str() : nullptr;
}

int plnr_state_has_fluent(const plnr_state* s, const char* name) {
    if (!s || !name)
        return 0;
    return s->state.fluent(name).has_value() ? 1 : 0;
}

double plnr_state_real(const plnr_state* s, const char* name) {
    if (!s || !name)
        return NAN;
    auto v = s->state.fluent(name);
    if (!v || !v->is_numeric())
        return NAN;
    return v->to_real();
}

int64_t plnr_state_int(const plnr_state* s, const char* name, int* found) {
    if (found)
        *found = 0;
    if (!s || !name)
        return 0;
    auto v = s->state.fluent(name);
    if (!v || !v->is_int())
        return 0;
    if (found)
        *found = 1;
    return v->as_int();
}

int plnr_state_bool(const plnr_state* s, const char* name) {
    if (!s || !name)
        return -1;
    auto v = s->state.fluent(name);
    if (!v || !v->is_bool())
        return -1;
    return v->as_bool() ? 1 : 0;
}

uint64_t plnr_state_hash(const plnr_state* s) { return s ? s->state.hash() : 0; }

plnr_status plnr_state_to_json(const plnr_state* s, char** out) {
    return guard([&]() -> plnr_status {
        if (!s || !out) {
            set_error("state and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        *out = dup_string(s->state.to_json_text());
        return PLNR_OK;
    });
}

/* ---- search ----------------------------------------------------------- */

void plnr_limits_default(plnr_limits* limits) {
    if (!limits)
        return;
    planner::Limits defaults;
    limits->wall_clock_seconds = defaults.wall_clock_seconds;
    limits->memory_bytes = defaults.memory_bytes;
    limits->max_expansions = 0;
}

namespace {

planner::Limits to_limits(const plnr_limits* limits) {
    planner::Limits l;
    if (limits) {
        l.wall_clock_seconds = limits->wall_clock_seconds;
        l.memory_bytes = limits->memory_bytes;
        if (limits->max_expansions > 0)
            l.max_expansions = limits->max_expansions;
    }
    return l;
}

} // namespace

plnr_status plnr_solve(const plnr_task* task, const char* algorithm, const char* heuristic,
                       const plnr_limits* limits, plnr_result** out) {
    return guard([&]() -> plnr_status {
        if (!task || !algorithm || !out) {
            set_error("task, algorithm, and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        std::string algo = algorithm;
        planner::Limits l = to_limits(limits);
        planner::SearchResult result;
        if (algo == "bfs") {
            result = planner::bfs(*task->model, l);
        } else if (algo == "gbfs") {
            std::string h = heuristic ? heuristic : "blind";
            planner::HeuristicSpec spec;
            if (h == "blind")
                spec = planner::HeuristicSpec::blind();
            else if (h == "hmd")
                spec = planner::HeuristicSpec::hmd();
            else {
                set_error("unknown heuristic '" + h + "' (expected blind or hmd)");
                return PLNR_ERR_INVALID_ARGUMENT;
            }
            planner::HeuristicFn fn;
            try {
                fn = planner::make_heuristic(spec, *task->model);
            } catch (const planner::PlannerError& e) {
                result.outcome = planner::Outcome::HeuristicError;
                result.detail = e.what();
            }
            if (fn)
                result = planner::gbfs(*task->model, fn, l);
        } else {
            set_error("unknown algorithm '" + algo + "' (expected bfs or gbfs)");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        *out = new plnr_result{std::move(result)};
        return PLNR_OK;
    });
}

plnr_status plnr_solve_with_heuristic(const plnr_task* task, const char* algorithm,
                                      plnr_heuristic_fn heuristic, void* user,
                                      const plnr_limits* limits, plnr_result** out) {
    return guard([&]() -> plnr_status {
        if (!task || !out) {
            set_error("task and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        std::string algo = algorithm ? algorithm : "gbfs";
        planner::Limits l = to_limits(limits);
        planner::SearchResult result;
        if (algo == "bfs") {
            result = planner::bfs(*task->model, l);
        } else if (algo == "gbfs") {
            if (!heuristic) {
                set_error("heuristic callback must be non-null for gbfs");
                return PLNR_ERR_INVALID_ARGUMENT;
            }
            auto fn = [heuristic, user](const State& s) {
                plnr_state view{s, {}};
                return heuristic(&view, user);
            };
            result = planner::gbfs(*task->model, fn, l);
        } else {
            set_error("unknown algorithm '" + algo + "'");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        *out = new plnr_result{std::move(result)};
        return PLNR_OK;
    });
}

plnr_status plnr_run_plugin_worker(const char* worker_path, const char* instance_path,
                                   const char* algorithm, const plnr_limits* limits,
                                   plnr_result** out) {
    return guard([&]() -> plnr_status {
        if (!worker_path || !instance_path || !out) {
            set_error("worker_path, instance_path, and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        auto run = planner::synthesis::run_worker(worker_path, instance_path,
                                                  algorithm ? algorithm : "gbfs",
                                                  to_limits(limits));
        *out = new plnr_result{std::move(run.result)};
        return PLNR_OK;
    });
}

const char* plnr_result_outcome(const plnr_result* r) {
    return r ? planner::outcome_name(r->result.outcome) : nullptr;
}

int plnr_result_solved(const plnr_result* r) { return r && r->result.solved() ? 1 : 0; }

size_t plnr_result_plan_length(const plnr_result* r) { return r ? r->result.plan.size() : 0; }

const char* plnr_result_plan_action(const plnr_result* r, size_t index) {
    if (!r || index >= r->result.plan.size())
        return nullptr;
    return r->result.plan[index].c_str();
}

double plnr_result_stat(const plnr_result* r, const char* key) {
    if (!r || !key)
        return NAN;
    const auto& s = r->result.stats;
    std::string k = key;
    if (k == "expanded")
        return static_cast<double>(s.expanded);
    if (k == "generated")
        return static_cast<double>(s.generated);
    if (k == "duplicates")
        return static_cast<double>(s.duplicates);
    if (k == "elapsed_seconds")
        return s.elapsed_seconds;
    if (k == "peak_open")
        return static_cast<double>(s.peak_open);
    if (k == "peak_closed")
        return static_cast<double>(s.peak_closed);
    return NAN;
}

plnr_status plnr_result_to_json(const plnr_result* r, char** out) {
    return guard([&]() -> plnr_status {
        if (!r || !out) {
            set_error("result and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        *out = dup_string(planner::result_to_json(r->result));
        return PLNR_OK;
    });
}

void plnr_result_free(plnr_result* r) { delete r; }

/* ---- validation -------------------------------------------------------- */

plnr_status plnr_validate(const plnr_task* task, const char* const* actions, size_t n,
                          plnr_validation** out) {
    return guard([&]() -> plnr_status {
        if (!task || !out || (n > 0 && !actions)) {
            set_error("task, actions, and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        std::vector<std::string> plan(actions, actions + n);
        *out = new plnr_validation{planner::validate(*task->model, plan)};
        return PLNR_OK;
    });
}

int plnr_validation_valid(const plnr_validation* v) { return v && v->report.valid() ? 1 : 0; }

const char* plnr_validation_verdict(const plnr_validation* v) {
    return v ? planner::verdict_name(v->report.verdict) : nullptr;
}

plnr_status plnr_validation_to_json(const plnr_validation* v, char** out) {
    return guard([&]() -> plnr_status {
        if (!v || !out) {
            set_error("validation and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        std::ostringstream json;
        json << "{\"verdict\":\"" << planner::verdict_name(v->report.verdict) << "\"";
        if (v->report.verdict == planner::ValidationReport::Verdict::InvalidStep)
            json << ",\"failed_step\":" << v->report.failed_step;
        if (!v->report.reason.empty())
            json << ",\"reason\":\"" << v->report.reason << "\"";
        json << ",\"trace\":[";
        for (std::size_t i = 0; i < v->report.trace.size(); ++i)
            json << (i ? "," : "") << v->report.trace[i];
        json << "]}";
        *out = dup_string(json.str());
        return PLNR_OK;
    });
}

void plnr_validation_free(plnr_validation* v) { delete v; }

/* ---- synthesis strategies ---------------------------------------------- */

void plnr_synth_options_default(plnr_synth_options* options) {
    if (!options)
        return;
    std::memset(options, 0, sizeof *options);
    options->strategy = "fc";
    options->provider = "offline";
    options->strategize = 1;
    options->refine = 0;
}

plnr_status plnr_synth_run(const char* instance_path, const plnr_synth_options* options,
                           plnr_run_record** out) {
    return guard([&]() -> plnr_status {
        if (!instance_path || !options || !out) {
            set_error("instance_path, options, and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }

        namespace orch = planner::orchestrator;
        namespace synth = planner::synthesis;

        orch::SynthJob job;
        job.model = planner::load_instance_file(instance_path, planner::builtin_registry());
        job.instance_path = instance_path;
        {
            std::ifstream in(instance_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            job.instance_text = buf.str();
        }

        // domain implementation file shown to the model
        std::string stem = job.model->domain_name;
        for (char& c : stem)
            if (c == '-')
                c = '_';
        std::filesystem::path source_path =
            std::filesystem::path(synth::default_domain_source_dir()) / (stem + ".cpp");
        {
            std::ifstream in(source_path);
            if (!in)
                throw planner::SynthesisError("cannot read domain source: " +
                                              source_path.string());
            std::ostringstream buf;
            buf << in.rdbuf();
            job.domain_source = buf.str();
        }

        orch::SynthSettings settings;
        std::string provider = options->provider ? options->provider : "offline";
        if (provider == "offline") {
            if (!options->fixtures_dir) {
                set_error("offline provider requires fixtures_dir");
                return PLNR_ERR_INVALID_ARGUMENT;
            }
            if (!std::filesystem::is_directory(options->fixtures_dir)) {
                set_error(std::string("fixtures_dir does not exist: ") + options->fixtures_dir);
                return PLNR_ERR_INVALID_ARGUMENT;
            }
            settings.llm = synth::LlmConfig::offline(options->fixtures_dir);
            if (options->model_id)
                settings.llm.model_id = options->model_id;
        } else if (provider == "http") {
            settings.llm = synth::LlmConfig::from_environment();
            if (options->model_id)
                settings.llm.model_id = options->model_id;
        } else {
            set_error("unknown provider '" + provider + "' (expected http or offline)");
            return PLNR_ERR_INVALID_ARGUMENT;
        }

        settings.prompts.strategize = options->strategize != 0;
        settings.prompts.refine = options->refine != 0;
        settings.toolchain = synth::ToolchainConfig::detect();
        if (options->template_dir)
            settings.toolchain.template_dir = options->template_dir;
        if (options->include_dir)
            settings.toolchain.include_dir = options->include_dir;
        if (options->lib_dir)
            settings.toolchain.lib_dir = options->lib_dir;
        if (options->work_dir)
            settings.toolchain.work_dir = options->work_dir;

        if (options->total_seconds > 0)
            settings.budget.total_seconds = options->total_seconds;
        if (options->slice_seconds > 0)
            settings.budget.slice_seconds = options->slice_seconds;
        if (options->memory_bytes > 0)
            settings.budget.memory_bytes = options->memory_bytes;
        if (options->max_heuristics > 0)
            settings.budget.max_heuristics = options->max_heuristics;
        if (options->max_compile_retries > 0)
            settings.budget.max_compile_retries = options->max_compile_retries;

        std::string strategy = options->strategy ? options->strategy : "fc";
        orch::RunRecord record;
        if (strategy == "fc")
            record = orch::run_fc(job, settings);
        else if (strategy == "tsr")
            record = orch::run_tsr(job, settings);
        else {
            set_error("unknown strategy '" + strategy + "' (expected fc or tsr)");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        *out = new plnr_run_record{std::move(record)};
        return PLNR_OK;
    });
}

plnr_status plnr_run_builtin(const char* instance_path, const char* algorithm,
                             const char* heuristic, const plnr_limits* limits,
                             plnr_run_record** out) {
    return guard([&]() -> plnr_status {
        if (!instance_path || !algorithm || !out) {
            set_error("instance_path, algorithm, and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        auto model = planner::load_instance_file(instance_path, planner::builtin_registry());
        std::string algo = algorithm;
        std::string h = heuristic ? heuristic : "blind";
        planner::HeuristicSpec spec;
        if (h == "blind")
            spec = planner::HeuristicSpec::blind();
        else if (h == "hmd")
            spec = planner::HeuristicSpec::hmd();
        else {
            set_error("unknown heuristic '" + h + "' (expected blind or hmd)");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        planner::orchestrator::Algorithm a;
        if (algo == "bfs")
            a = planner::orchestrator::Algorithm::Bfs;
        else if (algo == "gbfs")
            a = planner::orchestrator::Algorithm::Gbfs;
        else {
            set_error("unknown algorithm '" + algo + "' (expected bfs or gbfs)");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        auto record =
            planner::orchestrator::run_builtin(*model, spec, a, to_limits(limits), instance_path);
        *out = new plnr_run_record{std::move(record)};
        return PLNR_OK;
    });
}

int plnr_run_record_solved(const plnr_run_record* r) { return r && r->record.solved ? 1 : 0; }

const char* plnr_run_record_outcome(const plnr_run_record* r) {
    return r ? r->record.final_outcome.c_str() : nullptr;
}

size_t plnr_run_record_plan_length(const plnr_run_record* r) {
    return r ? r->record.plan.size() : 0;
}

const char* plnr_run_record_plan_action(const plnr_run_record* r, size_t index) {
    if (!r || index >= r->record.plan.size())
        return nullptr;
    return r->record.plan[index].c_str();
}

plnr_status plnr_run_record_to_json(const plnr_run_record* r, char** out) {
    return guard([&]() -> plnr_status {
        if (!r || !out) {
            set_error("record and out must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        *out = dup_string(r->record.to_json());
        return PLNR_OK;
    });
}

void plnr_run_record_free(plnr_run_record* r) { delete r; }

/* ---- reporting ---------------------------------------------------------- */

plnr_status plnr_report_csv(const char* const* record_json, size_t n, const char* out_path) {
    return guard([&]() -> plnr_status {
        if (!record_json || !out_path) {
            set_error("record_json and out_path must be non-null");
            return PLNR_ERR_INVALID_ARGUMENT;
        }
        std::vector<planner::orchestrator::RunRecord> records;
        records.reserve(n);
        for (size_t i = 0; i < n; ++i)
            records.push_back(planner::orchestrator::RunRecord::from_json(record_json[i]));
        planner::orchestrator::report(records, out_path);
        return PLNR_OK;
    });
}

} // extern "C"
