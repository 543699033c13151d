#include <string>
#include <vector>

#include "planner/errors.hpp"
#include "planner/synthesis.hpp"

namespace planner::synthesis {

namespace {

bool is_fence_line(const std::string& line, std::size_t& indent) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
        ++i;
    if (line.compare(i, 3, "```") != 0)
        return false;
    indent = i;
    return true;
}

} // namespace

std::string extract_code(const std::string& response) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= response.size()) {
        std::size_t nl = response.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(response.substr(pos));
            break;
        }
        lines.push_back(response.substr(pos, nl - pos));
        pos = nl + 1;
    }

    // models often restate partial snippets first; the last complete block wins
    std::string best;
    bool found = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::size_t indent = 0;
        if (!is_fence_line(lines[i], indent))
            continue;
        std::string body;
        bool closed = false;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            std::size_t close_indent = 0;
            if (is_fence_line(lines[j], close_indent)) {
                closed = true;
                i = j; // continue scanning after the closing fence
                break;
            }
            body += lines[j];
            body += '\n';
        }
        if (closed) {
            best = body;
            found = true;
        }
    }
    if (!found)
        throw NoCodeBlock();
    return best;
}

} // namespace planner::synthesis
