#include "planner/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <queue>
#include <unordered_map>

#include "json.hpp"

#include "planner/errors.hpp"

namespace planner {

const char* outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Solved:
        return "solved";
    case Outcome::Exhausted:
        return "exhausted";
    case Outcome::TimedOut:
        return "timed_out";
    case Outcome::MemoryOut:
        return "memory_out";
    case Outcome::HeuristicError:
        return "heuristic_error";
    }
    return "?";
}

std::optional<Outcome> outcome_from_name(std::string_view name) {
    if (name == "solved")
        return Outcome::Solved;
    if (name == "exhausted")
        return Outcome::Exhausted;
    if (name == "timed_out")
        return Outcome::TimedOut;
    if (name == "memory_out")
        return Outcome::MemoryOut;
    if (name == "heuristic_error")
        return Outcome::HeuristicError;
    return std::nullopt;
}

std::string result_to_json(const SearchResult& r) {
    nlohmann::json j;
    j["outcome"] = outcome_name(r.outcome);
    j["plan"] = r.plan;
    j["stats"] = {{"expanded", r.stats.expanded},
                  {"generated", r.stats.generated},
                  {"duplicates", r.stats.duplicates},
                  {"elapsed_seconds", r.stats.elapsed_seconds},
                  {"peak_open", r.stats.peak_open},
                  {"peak_closed", r.stats.peak_closed}};
    if (!r.detail.empty())
        j["detail"] = r.detail;
    return j.dump();
}

SearchResult result_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad result document: ") + e.what());
    }
    SearchResult r;
    auto outcome = outcome_from_name(j.value("outcome", ""));
    if (!outcome)
        throw ParseError("bad result document: unknown outcome '" + j.value("outcome", "") + "'");
    r.outcome = *outcome;
    if (j.contains("plan"))
        r.plan = j["plan"].get<std::vector<std::string>>();
    if (j.contains("stats")) {
        const auto& s = j["stats"];
        r.stats.expanded = s.value("expanded", 0ULL);
        r.stats.generated = s.value("generated", 0ULL);
        r.stats.duplicates = s.value("duplicates", 0ULL);
        r.stats.elapsed_seconds = s.value("elapsed_seconds", 0.0);
        r.stats.peak_open = s.value("peak_open", 0ULL);
        r.stats.peak_closed = s.value("peak_closed", 0ULL);
    }
    r.detail = j.value("detail", "");
    return r;
}

// ---- engine -------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    State state;
    std::uint64_t parent;
    std::string action;
};

constexpr std::uint64_t kNoParent = ~0ULL;

// Bookkeeping overhead per stored node beyond the state payload itself
// (node struct, dedup map entry, open handle).
constexpr std::size_t kNodeOverheadBytes = 120;

struct Engine {
    const TaskModel& model;
    const Limits& limits;
    SearchObserver* observer;

    std::deque<Node> nodes;
    std::unordered_map<State, std::uint64_t, StateHash> seen;
    SearchStats stats;
    Clock::time_point start = Clock::now();
    std::size_t per_node_bytes;

    Engine(const TaskModel& m, const Limits& l, SearchObserver* obs)
        : model(m), limits(l), observer(obs) {
        per_node_bytes = m.initial.payload().approx_bytes() + kNodeOverheadBytes;
    }

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }

    bool over_time() { return elapsed() >= limits.wall_clock_seconds; }

    bool over_memory() const {
        return nodes.size() * per_node_bytes > limits.memory_bytes;
    }

    std::uint64_t intern_initial() {
        nodes.push_back({model.initial, kNoParent, {}});
        seen.emplace(model.initial, 0);
        return 0;
    }

    std::vector<std::string> extract_plan(std::uint64_t id) const {
        std::vector<std::string> plan;
        for (std::uint64_t n = id; nodes[n].parent != kNoParent; n = nodes[n].parent)
            plan.push_back(nodes[n].action);
        std::reverse(plan.begin(), plan.end());
        return plan;
    }

    SearchResult finish(Outcome outcome, std::vector<std::string> plan = {},
                        std::string detail = {}) {
        SearchResult r;
        r.outcome = outcome;
        r.plan = std::move(plan);
        r.detail = std::move(detail);
        stats.elapsed_seconds = elapsed();
        stats.peak_closed = stats.expanded;
        r.stats = stats;
        return r;
    }
};

} // namespace

SearchResult bfs(const TaskModel& model, const Limits& limits, SearchObserver* observer) {
    Engine eng(model, limits, observer);
    std::deque<std::uint64_t> open;
    open.push_back(eng.intern_initial());

    while (!open.empty()) {
        if (eng.over_time())
            return eng.finish(Outcome::TimedOut);
        if (limits.max_expansions && eng.stats.expanded >= *limits.max_expansions)
            return eng.finish(Outcome::TimedOut, {}, "expansion limit reached");
        if ((eng.stats.expanded & 1023) == 0 && eng.over_memory())
            return eng.finish(Outcome::MemoryOut);

        std::uint64_t id = open.front();
        open.pop_front();
        State state = eng.nodes[id].state;
        ++eng.stats.expanded;
        if (observer)
            observer->on_expand(state);
        if (model.goal_test(state))
            return eng.finish(Outcome::Solved, eng.extract_plan(id));

        for (Transition& t : model.successors(state)) {
            ++eng.stats.generated;
            auto [it, fresh] = eng.seen.try_emplace(t.successor, eng.nodes.size());
            if (!fresh) {
                ++eng.stats.duplicates;
                continue;
            }
            eng.nodes.push_back({std::move(t.successor), id, std::move(t.action_label)});
            open.push_back(it->second);
        }
        eng.stats.peak_open = std::max<std::uint64_t>(eng.stats.peak_open, open.size());
    }
    return eng.finish(Outcome::Exhausted);
}

SearchResult gbfs(const TaskModel& model, const HeuristicFn& h, const Limits& limits,
                  SearchObserver* observer) {
    Engine eng(model, limits, observer);

    struct Entry {
        double h;
        std::uint64_t seq; // FIFO tie-break
        std::uint64_t id;
        bool operator>(const Entry& o) const {
            if (h != o.h)
                return h > o.h;
            return seq > o.seq;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::uint64_t seq = 0;

    auto evaluate = [&](const State& s, double& out, SearchResult& err) {
        try {
            out = h(s);
        } catch (const std::bad_alloc&) {
            err = eng.finish(Outcome::MemoryOut, {}, "heuristic allocation failure");
            return false;
        } catch (const std::exception& e) {
            err = eng.finish(Outcome::HeuristicError, {}, e.what());
            return false;
        } catch (...) {
            err = eng.finish(Outcome::HeuristicError, {}, "unknown heuristic failure");
            return false;
        }
        if (std::isnan(out)) {
            err = eng.finish(Outcome::HeuristicError, {}, "heuristic returned NaN");
            return false;
        }
        return true;
    };

    double h0 = 0.0;
    SearchResult err;
    if (!evaluate(model.initial, h0, err))
        return err;
    open.push({h0, seq++, eng.intern_initial()});

    while (!open.empty()) {
        if (eng.over_time())
            return eng.finish(Outcome::TimedOut);
        if (limits.max_expansions && eng.stats.expanded >= *limits.max_expansions)
            return eng.finish(Outcome::TimedOut, {}, "expansion limit reached");
        if ((eng.stats.expanded & 1023) == 0 && eng.over_memory())
            return eng.finish(Outcome::MemoryOut);

        Entry top = open.top();
        open.pop();
        State state = eng.nodes[top.id].state;
        ++eng.stats.expanded;
        if (observer)
            observer->on_expand(state);
        if (model.goal_test(state))
            return eng.finish(Outcome::Solved, eng.extract_plan(top.id));

        for (Transition& t : model.successors(state)) {
            ++eng.stats.generated;
            auto [it, fresh] = eng.seen.try_emplace(t.successor, eng.nodes.size());
            if (!fresh) {
                ++eng.stats.duplicates;
                continue;
            }
            double hv = 0.0;
            if (!evaluate(t.successor, hv, err))
                return err;
            eng.nodes.push_back({std::move(t.successor), top.id, std::move(t.action_label)});
            open.push({hv, seq++, it->second});
        }
        eng.stats.peak_open = std::max<std::uint64_t>(eng.stats.peak_open, open.size());
    }
    return eng.finish(Outcome::Exhausted);
}

} // namespace planner
