#ifndef PLANNER_SYNTHESIS_HPP
#define PLANNER_SYNTHESIS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "planner/search.hpp"

namespace planner::synthesis {

enum class Phase { Strategize, Unrefined, Refine };
const char* phase_name(Phase p); // "strategize", "unrefined", "refine"

struct PromptOptions {
    bool strategize = true;
    bool refine = false;
};

// The three-phase conversation sent to the model. Phase 2 is always present;
// phase 3 exists only when an instance document was provided.
struct PromptBundle {
    std::optional<std::string> phase1_strategize;
    std::string phase2_unrefined;
    std::optional<std::string> phase3_refine;
    std::string domain_source;
    std::optional<std::string> instance_json;
};

// Exact function signature a generated heuristic must implement; embedded
// verbatim in the phase 2 prompt and expected by the worker template.
const char* worker_heuristic_signature();

// Builds the enabled phases. Throws MissingInstance when refinement is
// requested without an instance document.
PromptBundle build_prompts(const std::string& domain_source,
                           const std::optional<std::string>& instance_json,
                           const PromptOptions& options);

enum class ProviderKind { HttpApi, OfflineFixtures };

struct LlmConfig {
    ProviderKind provider = ProviderKind::OfflineFixtures;
    std::string model_id;
    // http: endpoint base URL and API key, normally from PLNR_API_BASE /
    // PLNR_API_KEY; flavor selects the request adapter.
    std::string endpoint;
    std::string api_key;
    std::string api_flavor = "openai"; // "openai" | "anthropic"
    // offline: root directory laid out as <domain>/<phase>/<attempt>.md
    std::string fixtures_dir;
    // decoding knobs passed through to the provider request body verbatim
    std::map<std::string, double> decoding;

    static LlmConfig offline(std::string fixtures_dir, std::string model_id = "offline");
    static LlmConfig from_environment(); // reads PLNR_API_* variables
};

struct TranscriptRecord {
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    double latency_seconds = 0.0;
    std::string model_id;
    Phase phase = Phase::Unrefined;
    std::string timestamp; // ISO-8601 UTC; fixed "offline" for fixtures
    bool usage_missing = false;
};

struct LlmResponse {
    std::string source; // extracted from the final phase's reply
    std::vector<std::string> raw_replies;
    std::vector<TranscriptRecord> transcripts;
};

// Runs the enabled phases as one conversation (each phase sees the prior
// turns) and extracts the final phase's code block. Offline mode replays
// fixture files keyed by (domain, phase, attempt). Throws ProviderError,
// FixtureMissing, NoCodeBlock.
LlmResponse request_heuristic(const LlmConfig& config, const PromptBundle& bundle,
                              const std::string& domain, int attempt_index);

// Returns the contents of the last fenced code block, fence info stripped.
// Throws NoCodeBlock.
std::string extract_code(const std::string& response);

// Toolchain and layout used to turn heuristic source into a worker binary.
// Defaults resolve to this build tree; PLNR_TEMPLATE_DIR, PLNR_INCLUDE_DIR,
// PLNR_LIB_DIR and CXX override them.
struct ToolchainConfig {
    std::string template_dir;  // contains worker_main.cpp with the slot marker
    std::string include_dir;   // public headers for the worker build
    std::string lib_dir;       // directory holding libplanner
    std::string compiler;      // default "c++"
    std::string work_dir;      // scratch; one subdirectory per attempt
    double compile_timeout_seconds = 120.0;
    std::vector<std::string> extra_flags;

    static ToolchainConfig detect(); // compiled-in defaults + environment
};

// Directory holding the domain implementation files shown to the model
// (PLNR_DOMAIN_SRC_DIR overrides the compiled-in default).
std::string default_domain_source_dir();

struct CompileStatus {
    bool ok = false;
    std::string worker_path;  // exists and is executable iff ok
    std::string diagnostics;  // compiler output captured verbatim on failure
    double seconds = 0.0;
};

struct HeuristicArtifact {
    std::string source;
    Phase phase = Phase::Unrefined;
    CompileStatus compile_status;
    int attempt_index = 0;
    std::vector<TranscriptRecord> transcripts;
};

// Injects `source` into the worker template's heuristic slot and invokes the
// host toolchain. Compile failures are captured in the artifact, not thrown;
// a missing compiler throws ToolchainMissing.
HeuristicArtifact compile_heuristic(const std::string& source, const ToolchainConfig& toolchain,
                                    int attempt_index, Phase phase);

struct WorkerRun {
    SearchResult result;
    double wall_seconds = 0.0;
    int exit_code = -1;
    int term_signal = 0;
};

// Executes a compiled worker as an isolated child process under OS-enforced
// wall clock and memory caps. A killed or crashed worker maps into the
// result outcome (TimedOut / MemoryOut / HeuristicError); nothing propagates
// as an exception.
WorkerRun run_worker(const std::string& worker_path, const std::string& instance_path,
                     const std::string& algorithm, const Limits& slice);

} // namespace planner::synthesis

#endif
