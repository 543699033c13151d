#include <cstdlib>
#include <dlfcn.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "planner/errors.hpp"
#include "planner/synthesis.hpp"

#include "build_paths.hpp"
#include "process.hpp"

namespace planner::synthesis {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSlotMarker = "// @@PLNR_HEURISTIC_SOURCE@@";

std::string env_or(const char* name, std::string fallback) {
    if (const char* v = std::getenv(name))
        return v;
    return fallback;
}

// Directory of the loaded libplanner (or of the executable when static).
std::string loaded_library_dir() {
    Dl_info info;
    if (dladdr(reinterpret_cast<void*>(&loaded_library_dir), &info) && info.dli_fname)
        return fs::path(info.dli_fname).parent_path().string();
    return {};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

std::string default_domain_source_dir() {
    return env_or("PLNR_DOMAIN_SRC_DIR", PLNR_BUILD_DOMAIN_SRC_DIR);
}

ToolchainConfig ToolchainConfig::detect() {
    ToolchainConfig tc;
    tc.template_dir = env_or("PLNR_TEMPLATE_DIR", PLNR_BUILD_TEMPLATE_DIR);
    tc.include_dir = env_or("PLNR_INCLUDE_DIR", PLNR_BUILD_INCLUDE_DIR);
    tc.lib_dir = env_or("PLNR_LIB_DIR", loaded_library_dir());
    tc.compiler = env_or("CXX", "c++");
    tc.work_dir =
        (fs::temp_directory_path() / ("plnr-synth-" + std::to_string(getpid()))).string();
    return tc;
}

HeuristicArtifact compile_heuristic(const std::string& source, const ToolchainConfig& toolchain,
                                    int attempt_index, Phase phase) {
    HeuristicArtifact artifact;
    artifact.source = source;
    artifact.phase = phase;
    artifact.attempt_index = attempt_index;

    fs::path template_file = fs::path(toolchain.template_dir) / "worker_main.cpp";
    if (!fs::exists(template_file))
        throw ToolchainMissing("worker template not found: " + template_file.string());
    std::string text = read_file(template_file);
    std::size_t slot = text.find(kSlotMarker);
    if (slot == std::string::npos)
        throw ToolchainMissing("worker template has no heuristic slot marker: " +
                               template_file.string());
    text.replace(slot, std::string(kSlotMarker).size(), source);

    fs::path dir = fs::path(toolchain.work_dir) / ("attempt_" + std::to_string(attempt_index));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw ToolchainMissing("cannot create work dir " + dir.string() + ": " + ec.message());

    fs::path cpp = dir / "worker.cpp";
    fs::path bin = dir / "worker";
    {
        std::ofstream out(cpp);
        out << text;
    }

    std::vector<std::string> argv = {toolchain.compiler, "-std=c++20", "-O1",
                                     "-I" + toolchain.include_dir};
    for (const auto& flag : toolchain.extra_flags)
        argv.push_back(flag);
    argv.push_back(cpp.string());
    argv.push_back("-o");
    argv.push_back(bin.string());
    if (!toolchain.lib_dir.empty()) {
        argv.push_back("-L" + toolchain.lib_dir);
        argv.push_back("-Wl,-rpath," + toolchain.lib_dir);
    }
    argv.push_back("-lplanner");

    ProcessOptions opts;
    opts.timeout_seconds = toolchain.compile_timeout_seconds;
    ProcessResult res = run_process(argv, opts);

    artifact.compile_status.seconds = res.elapsed_seconds;
    if (!res.started)
        throw ToolchainMissing("cannot invoke compiler '" + toolchain.compiler +
                               "': " + res.spawn_error);
    if (res.exit_code == 127)
        throw ToolchainMissing("compiler not found: " + toolchain.compiler);

    if (res.timed_out) {
        artifact.compile_status.ok = false;
        artifact.compile_status.diagnostics = "compile timed out";
    } else if (res.exit_code == 0 && fs::exists(bin)) {
        artifact.compile_status.ok = true;
        artifact.compile_status.worker_path = bin.string();
    } else {
        artifact.compile_status.ok = false;
        artifact.compile_status.diagnostics = res.err.empty() ? res.out : res.err;
        if (artifact.compile_status.diagnostics.empty())
            artifact.compile_status.diagnostics =
                "compiler exited with status " + std::to_string(res.exit_code);
    }
    return artifact;
}

} // namespace planner::synthesis
