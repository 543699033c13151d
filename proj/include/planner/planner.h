/*
 * planner.h - C API for the planner shared library.
 *
 * The core is C++; this header is the stable surface consumed by the CLI
 * and by generated worker executables. Handles are opaque; functions
 * return plnr_status and report detail through plnr_last_error(), which
 * is thread local. Strings returned as `char**` are heap-allocated and
 * must be released with plnr_string_free(); `const char*` getters stay
 * valid while the owning handle lives.
 */

#ifndef PLANNER_PLANNER_H
#define PLANNER_PLANNER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plnr_status {
    PLNR_OK = 0,
    PLNR_ERR_INVALID_ARGUMENT = 1,
    PLNR_ERR_UNKNOWN_DOMAIN = 2,
    PLNR_ERR_SCHEMA = 3,
    PLNR_ERR_UNBOUND_VARIABLE = 4,
    PLNR_ERR_EVAL = 5,
    PLNR_ERR_IO = 6,
    PLNR_ERR_PARSE = 7,
    PLNR_ERR_SYNTHESIS = 8,
    PLNR_ERR_OUT_OF_MEMORY = 9,
    PLNR_ERR_INTERNAL = 10
} plnr_status;

typedef struct plnr_task plnr_task;
typedef struct plnr_state plnr_state;
typedef struct plnr_result plnr_result;
typedef struct plnr_validation plnr_validation;
typedef struct plnr_run_record plnr_run_record;

const char* plnr_version(void);

/* Last error message for the calling thread; never NULL. */
const char* plnr_last_error(void);

void plnr_string_free(char* s);

/* ---- tasks ---------------------------------------------------------- */

plnr_status plnr_task_load_file(const char* path, plnr_task** out);
plnr_status plnr_task_load_json(const char* json_text, plnr_task** out);
void plnr_task_free(plnr_task* task);

const char* plnr_task_domain(const plnr_task* task);
/* Owned by the task; do not free. */
const plnr_state* plnr_task_initial_state(const plnr_task* task);

/* Number of registered built-in domains / their names. */
size_t plnr_domain_count(void);
const char* plnr_domain_name(size_t index);

/* ---- states ---------------------------------------------------------- */

size_t plnr_state_fluent_count(const plnr_state* s);
/* NULL when index is out of range. */
const char* plnr_state_fluent_name(const plnr_state* s, size_t index);
int plnr_state_has_fluent(const plnr_state* s, const char* name);
/* Numeric fluent as double (ints coerce exactly); NaN when the fluent is
 * missing or boolean. */
double plnr_state_real(const plnr_state* s, const char* name);
/* Integer fluent; `found` (optional) receives 0/1. */
int64_t plnr_state_int(const plnr_state* s, const char* name, int* found);
/* Boolean fluent: 0/1, or -1 when missing or not boolean. */
int plnr_state_bool(const plnr_state* s, const char* name);
uint64_t plnr_state_hash(const plnr_state* s);
plnr_status plnr_state_to_json(const plnr_state* s, char** out);

/* ---- search ----------------------------------------------------------- */

typedef struct plnr_limits {
    double wall_clock_seconds;
    uint64_t memory_bytes;
    uint64_t max_expansions; /* 0 = unlimited */
} plnr_limits;

void plnr_limits_default(plnr_limits* limits);

/* algorithm: "bfs" | "gbfs"; heuristic: "blind" | "hmd". */
plnr_status plnr_solve(const plnr_task* task, const char* algorithm, const char* heuristic,
                       const plnr_limits* limits, plnr_result** out);

/* GBFS guided by a caller-supplied heuristic; the state pointer is valid
 * only during the call. Return NaN to abort with a heuristic error. */
typedef double (*plnr_heuristic_fn)(const plnr_state* state, void* user);
plnr_status plnr_solve_with_heuristic(const plnr_task* task, const char* algorithm,
                                      plnr_heuristic_fn heuristic, void* user,
                                      const plnr_limits* limits, plnr_result** out);

/* Runs a compiled plugin worker on an instance under the given slice. */
plnr_status plnr_run_plugin_worker(const char* worker_path, const char* instance_path,
                                   const char* algorithm, const plnr_limits* limits,
                                   plnr_result** out);

/* "solved", "exhausted", "timed_out", "memory_out", "heuristic_error". */
const char* plnr_result_outcome(const plnr_result* r);
int plnr_result_solved(const plnr_result* r);
size_t plnr_result_plan_length(const plnr_result* r);
const char* plnr_result_plan_action(const plnr_result* r, size_t index);
/* keys: expanded, generated, duplicates, elapsed_seconds, peak_open,
 * peak_closed; returns NaN for unknown keys. */
double plnr_result_stat(const plnr_result* r, const char* key);
/* Wire format: {"outcome": ..., "plan": [...], "stats": {...}}. */
plnr_status plnr_result_to_json(const plnr_result* r, char** out);
void plnr_result_free(plnr_result* r);

/* ---- validation -------------------------------------------------------- */

plnr_status plnr_validate(const plnr_task* task, const char* const* actions, size_t n,
                          plnr_validation** out);
int plnr_validation_valid(const plnr_validation* v);
/* "valid", "invalid_step", "goal_unsatisfied". */
const char* plnr_validation_verdict(const plnr_validation* v);
plnr_status plnr_validation_to_json(const plnr_validation* v, char** out);
void plnr_validation_free(plnr_validation* v);

/* ---- synthesis strategies ---------------------------------------------- */

typedef struct plnr_synth_options {
    const char* strategy;     /* "fc" | "tsr" */
    const char* provider;     /* "http" | "offline" */
    const char* model_id;     /* may be NULL */
    const char* fixtures_dir; /* offline mode fixture root */
    int strategize;           /* phase 1 on/off */
    int refine;               /* phase 3 on/off */
    double total_seconds;     /* <= 0 selects the default 600 */
    double slice_seconds;     /* <= 0 selects the default 100 */
    uint64_t memory_bytes;    /* 0 selects the default 8 GiB */
    int max_heuristics;       /* <= 0 selects the default 5 */
    int max_compile_retries;  /* <= 0 selects the default 10 */
    const char* work_dir;     /* scratch dir; NULL = temp */
    const char* template_dir; /* worker template override */
    const char* include_dir;  /* header dir override */
    const char* lib_dir;      /* libplanner dir override */
} plnr_synth_options;

void plnr_synth_options_default(plnr_synth_options* options);

plnr_status plnr_synth_run(const char* instance_path, const plnr_synth_options* options,
                           plnr_run_record** out);

/* Single in-process search with a built-in heuristic, wrapped in a run
 * record (plan re-validated before it is reported solved). */
plnr_status plnr_run_builtin(const char* instance_path, const char* algorithm,
                             const char* heuristic, const plnr_limits* limits,
                             plnr_run_record** out);

int plnr_run_record_solved(const plnr_run_record* r);
const char* plnr_run_record_outcome(const plnr_run_record* r);
size_t plnr_run_record_plan_length(const plnr_run_record* r);
const char* plnr_run_record_plan_action(const plnr_run_record* r, size_t index);
plnr_status plnr_run_record_to_json(const plnr_run_record* r, char** out);
void plnr_run_record_free(plnr_run_record* r);

/* ---- reporting ---------------------------------------------------------- */

/* Aggregates run-record JSON documents into the coverage/cost CSV. */
plnr_status plnr_report_csv(const char* const* record_json, size_t n, const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PLANNER_PLANNER_H */
