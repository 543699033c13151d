#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "planner/errors.hpp"
#include "planner/orchestrator.hpp"

namespace planner::orchestrator {

namespace {

struct Aggregate {
    int attempted = 0;
    int solved = 0;
    double api_seconds = 0.0;
    double compile_seconds = 0.0;
    double search_seconds = 0.0;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    int compile_failures = 0;
    int compile_attempts = 0;
};

std::string num(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

} // namespace

std::string report_csv(const std::vector<RunRecord>& records) {
    if (records.empty())
        throw PlannerError("cannot build a report from zero run records");

    std::map<std::pair<std::string, std::string>, Aggregate> groups;
    for (const auto& r : records) {
        Aggregate& g = groups[{r.domain, r.configuration}];
        ++g.attempted;
        if (r.solved)
            ++g.solved;
        g.api_seconds += r.api_seconds;
        g.compile_seconds += r.compile_seconds;
        g.search_seconds += r.search_seconds;
        g.input_tokens += r.input_tokens;
        g.output_tokens += r.output_tokens;
        g.compile_failures += r.compile_failures;
        g.compile_attempts += r.compile_attempts;
    }

    std::ostringstream out;
    out << "domain,configuration,solved,attempted,mean_api_seconds,mean_compile_seconds,"
           "mean_search_seconds,mean_input_tokens,mean_output_tokens,compile_failure_rate\n";
    for (const auto& [key, g] : groups) {
        double n = g.attempted;
        double failure_rate =
            g.compile_attempts > 0 ? static_cast<double>(g.compile_failures) / g.compile_attempts
                                   : 0.0;
        out << key.first << ',' << key.second << ',' << g.solved << ',' << g.attempted << ','
            << num(g.api_seconds / n) << ',' << num(g.compile_seconds / n) << ','
            << num(g.search_seconds / n) << ',' << num(static_cast<double>(g.input_tokens) / n)
            << ',' << num(static_cast<double>(g.output_tokens) / n) << ',' << num(failure_rate)
            << '\n';
    }
    return out.str();
}

void report(const std::vector<RunRecord>& records, const std::string& out_path) {
    std::string csv = report_csv(records);
    std::ofstream out(out_path);
    if (!out)
        throw PlannerError("cannot open report file for writing: " + out_path);
    out << csv;
    if (!out.good())
        throw PlannerError("failed writing report file: " + out_path);
}

} // namespace planner::orchestrator
