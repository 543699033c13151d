#include "planner/errors.hpp"
#include "planner/synthesis.hpp"

namespace planner::synthesis {

const char* phase_name(Phase p) {
    switch (p) {
    case Phase::Strategize:
        return "strategize";
    case Phase::Unrefined:
        return "unrefined";
    case Phase::Refine:
        return "refine";
    }
    return "?";
}

const char* worker_heuristic_signature() { return "double heuristic(const plnr_state* state)"; }

namespace {

const char* kStateApiNotes =
    "The state is opaque; read fluents through this C API (declared in <planner/planner.h>,\n"
    "already included for you):\n"
    "  size_t      plnr_state_fluent_count(const plnr_state* s);\n"
    "  const char* plnr_state_fluent_name(const plnr_state* s, size_t index);\n"
    "  int         plnr_state_has_fluent(const plnr_state* s, const char* name);\n"
    "  double      plnr_state_real(const plnr_state* s, const char* name);   /* numeric fluents */\n"
    "  int64_t     plnr_state_int(const plnr_state* s, const char* name, int* found);\n"
    "  int         plnr_state_bool(const plnr_state* s, const char* name);   /* 0/1, -1 missing */\n";

} // namespace

PromptBundle build_prompts(const std::string& domain_source,
                           const std::optional<std::string>& instance_json,
                           const PromptOptions& options) {
    if (domain_source.empty())
        throw SynthesisError("domain source must not be empty");
    if (options.refine && !instance_json)
        throw MissingInstance();

    PromptBundle bundle;
    bundle.domain_source = domain_source;
    bundle.instance_json = instance_json;

    if (options.strategize) {
        bundle.phase1_strategize =
            "You are designing search guidance for a deterministic planning task.\n"
            "Below is the C++ implementation of the task: its successor generator and its\n"
            "goal test, which together define how states evolve and when the task is done.\n\n"
            "```cpp\n" +
            domain_source +
            "```\n\n"
            "Describe, in English only, a heuristic that would solve this task effectively\n"
            "when used with greedy best-first search (GBFS). Ignore strict theoretical\n"
            "properties such as admissibility or consistency; aim only at facilitating the\n"
            "search, by approximating a monotonous decrease of the heuristic value as the\n"
            "given state gets closer to the goal. Do not write any code yet.";
    }

    std::string phase2 =
        "Implement the heuristic for the planning task below as C++ code.\n\n"
        "Task implementation (successor generator and goal test):\n\n"
        "```cpp\n" +
        domain_source +
        "```\n\n"
        "Required signature - implement exactly this function:\n\n"
        "```cpp\n" +
        std::string(worker_heuristic_signature()) +
        "\n```\n\n" +
        kStateApiNotes +
        "\nGuidelines:\n"
        "1. Ignore admissibility and other strict theoretical properties; aim only at\n"
        "   facilitating the search, by approximating a monotonous decrease of the value\n"
        "   as the given state gets closer to the goal, so that it guides GBFS well.\n"
        "2. Return smaller values for states closer to the goal; return 0.0 is fine for\n"
        "   goal states. Never return NaN.\n"
        "3. Avoid compilation errors: write complete, self-contained standard C++ (C++20).\n"
        "   Use only the C API above and the standard library. Define any helpers you need\n"
        "   above the function. Do not use placeholder comments or leave anything\n"
        "   unimplemented.\n"
        "4. Do not ask for further specification or clarification, and do not ask me to\n"
        "   complete any part of the code.\n"
        "5. Keep the heuristic fast: it runs once per generated state.\n"
        "6. Reply with the full implementation in a single fenced code block.\n";
    if (options.strategize)
        phase2 =
            "Now implement the heuristic you described, following the requirements below.\n\n" +
            phase2;
    bundle.phase2_unrefined = phase2;

    if (options.refine) {
        bundle.phase3_refine =
            "Here is the concrete problem instance this heuristic will run on, as JSON:\n\n"
            "```json\n" +
            *instance_json +
            "```\n\n"
            "First think through how you would change the heuristic given these exact\n"
            "details and parameters (sizes, bounds, layout): simplify parts that cannot\n"
            "matter for this instance, tune coefficients, and exploit any solution\n"
            "structure that is obvious from the initial state. Then implement the refined\n"
            "heuristic. Reply with the full revised implementation, same signature, in a\n"
            "single fenced code block.";
    }
    return bundle;
}

} // namespace planner::synthesis
