// Worker executable template. The synthesis pipeline replaces the slot
// marker below with a generated heuristic implementing:
//
//     double heuristic(const plnr_state* state)
//
// and compiles this file against libplanner. The worker loads one instance,
// runs the requested search under the given limits, and prints the result
// document as a single JSON line on stdout. Exit code 0 means solved.

#include <planner/planner.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

// @@PLNR_HEURISTIC_SOURCE@@

namespace {

double heuristic_thunk(const plnr_state* state, void*) { return heuristic(state); }

int fail_internal(const char* detail) {
    std::fprintf(stdout, "{\"outcome\":\"heuristic_error\",\"plan\":[],\"detail\":\"%s\"}\n",
                 detail);
    return 3;
}

} // namespace

int main(int argc, char** argv) {
    const char* instance = nullptr;
    const char* algorithm = "gbfs";
    plnr_limits limits;
    plnr_limits_default(&limits);

    for (int i = 1; i < argc; ++i) {
        auto has_value = [&](const char* flag) {
            return std::strcmp(argv[i], flag) == 0 && i + 1 < argc;
        };
        if (has_value("--instance"))
            instance = argv[++i];
        else if (has_value("--algorithm"))
            algorithm = argv[++i];
        else if (has_value("--time-limit"))
            limits.wall_clock_seconds = std::atof(argv[++i]);
        else if (has_value("--memory-limit"))
            limits.memory_bytes = std::strtoull(argv[++i], nullptr, 10);
        else if (has_value("--max-expansions"))
            limits.max_expansions = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::fprintf(stderr, "unknown or incomplete argument: %s\n", argv[i]);
            return 2;
        }
    }
    if (!instance) {
        std::fprintf(stderr, "usage: worker --instance FILE [--algorithm bfs|gbfs] "
                             "[--time-limit S] [--memory-limit BYTES] [--max-expansions N]\n");
        return 2;
    }

    plnr_task* task = nullptr;
    plnr_result* result = nullptr;
    try {
        if (plnr_task_load_file(instance, &task) != PLNR_OK)
            return fail_internal(plnr_last_error());

        plnr_status status;
        if (std::strcmp(algorithm, "bfs") == 0)
            status = plnr_solve(task, "bfs", "blind", &limits, &result);
        else
            status = plnr_solve_with_heuristic(task, "gbfs", heuristic_thunk, nullptr, &limits,
                                               &result);
        if (status != PLNR_OK) {
            plnr_task_free(task);
            return status == PLNR_ERR_OUT_OF_MEMORY
                       ? (std::fputs("{\"outcome\":\"memory_out\",\"plan\":[]}\n", stdout), 1)
                       : fail_internal(plnr_last_error());
        }

        char* json = nullptr;
        if (plnr_result_to_json(result, &json) != PLNR_OK)
            return fail_internal(plnr_last_error());
        std::fputs(json, stdout);
        std::fputc('\n', stdout);
        std::fflush(stdout);

        int solved = plnr_result_solved(result);
        plnr_string_free(json);
        plnr_result_free(result);
        plnr_task_free(task);
        return solved ? 0 : 1;
    } catch (const std::bad_alloc&) {
        // keep this path allocation-free
        std::fputs("{\"outcome\":\"memory_out\",\"plan\":[]}\n", stdout);
        std::fflush(stdout);
        return 1;
    } catch (...) {
        std::fputs("{\"outcome\":\"heuristic_error\",\"plan\":[],\"detail\":\"worker exception\"}\n",
                   stdout);
        std::fflush(stdout);
        return 1;
    }
}
