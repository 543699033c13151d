#include <charconv>

#include "json.hpp"

#include "planner/domains.hpp"
#include "planner/errors.hpp"

namespace planner::domains {

namespace {

// "c<k>" -> k, or -1
int counter_index(std::string_view name, char prefix, std::int64_t n) {
    if (name.size() < 2 || name[0] != prefix)
        return -1;
    int idx = -1;
    auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    if (ec != std::errc() || p != name.data() + name.size())
        return -1;
    return (idx >= 0 && idx < n) ? idx : -1;
}

std::uint64_t hash_values(std::uint64_t seed, const std::vector<std::int64_t>& values) {
    std::uint64_t h = seed;
    for (std::int64_t v : values)
        h = hashing::mix(h, static_cast<std::uint64_t>(v));
    return h;
}

} // namespace

CountersState::CountersState(std::shared_ptr<const CountersProblem> p,
                             std::vector<std::int64_t> values)
    : problem_(std::move(p)), values_(std::move(values)), hash_(hash_values(0x5eedc0de, values_)) {}

std::optional<Value> CountersState::fluent(std::string_view name) const {
    int idx = counter_index(name, 'c', problem_->n);
    if (idx < 0)
        return std::nullopt;
    return Value(values_[idx]);
}

void CountersState::for_each_fluent(
    const std::function<void(const std::string&, const Value&)>& fn) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        fn("c" + std::to_string(i), Value(values_[i]));
}

bool CountersState::equals(const StatePayload& other) const {
    return values_ == static_cast<const CountersState&>(other).values_;
}

std::string CountersState::to_json_text() const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < values_.size(); ++i)
        j["c" + std::to_string(i)] = values_[i];
    return j.dump();
}

std::size_t CountersState::approx_bytes() const {
    return sizeof(CountersState) + values_.size() * sizeof(std::int64_t) + 32;
}

int CountersState::fluent_slot(std::string_view name) const {
    return counter_index(name, 'c', problem_->n);
}

Value CountersState::fluent_by_slot(int slot) const { return Value(values_[slot]); }

void CountersState::slot_values(double* out) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        out[i] = static_cast<double>(values_[i]);
}

std::vector<Transition> counters_successors(const State& state) {
    const auto& s = state.as<CountersState>();
    const auto& prob = s.problem();
    const auto& v = s.values();
    std::vector<Transition> out;
    out.reserve(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < prob.max_value) {
            auto next = v;
            ++next[i];
            out.push_back({prob.inc_labels[i], 1.0,
                           State(std::make_shared<CountersState>(s.problem_ptr(), std::move(next)))});
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0) {
            auto next = v;
            --next[i];
            out.push_back({prob.dec_labels[i], 1.0,
                           State(std::make_shared<CountersState>(s.problem_ptr(), std::move(next)))});
        }
    }
    return out;
}

namespace {

std::vector<GoalCondition> counters_chain_goal(std::int64_t n) {
    // c_i + 1 <= c_{i+1}, normalized to (c_i + 1 - c_{i+1}) <= 0
    std::vector<GoalCondition> goal;
    for (std::int64_t i = 0; i + 1 < n; ++i) {
        Expr::Ptr psi = Expr::sub(Expr::add(Expr::var("c" + std::to_string(i)), Expr::constant(1.0)),
                                  Expr::var("c" + std::to_string(i + 1)));
        goal.push_back(GoalCondition::numeric(psi, Comparator::LessEq));
    }
    return goal;
}

std::int64_t require_int(const nlohmann::json& obj, const std::string& key,
                         const std::string& path) {
    if (!obj.contains(key) || !obj[key].is_number_integer())
        throw SchemaViolation(path + "." + key, "missing or non-integer");
    return obj[key].get<std::int64_t>();
}

} // namespace

DomainFactory counters_factory() {
    DomainFactory f;
    f.name = "counters";
    f.build = [](const nlohmann::json& params, const nlohmann::json& initial,
                 const std::vector<GoalCondition>* explicit_goal) {
        auto prob = std::make_shared<CountersProblem>();
        prob->n = require_int(params, "n", "parameters");
        prob->max_value = require_int(params, "max_value", "parameters");
        if (prob->n < 1)
            throw SchemaViolation("parameters.n", "must be >= 1");
        if (prob->max_value < 0)
            throw SchemaViolation("parameters.max_value", "must be >= 0");
        for (std::int64_t i = 0; i < prob->n; ++i) {
            prob->inc_labels.push_back("inc c" + std::to_string(i));
            prob->dec_labels.push_back("dec c" + std::to_string(i));
        }

        std::vector<std::int64_t> values(static_cast<std::size_t>(prob->n), 0);
        if (params.contains("values")) {
            if (!params["values"].is_array() ||
                params["values"].size() != static_cast<std::size_t>(prob->n))
                throw SchemaViolation("parameters.values", "must be an array of length n");
            for (std::size_t i = 0; i < values.size(); ++i)
                values[i] = params["values"][i].get<std::int64_t>();
        }
        for (auto it = initial.begin(); it != initial.end(); ++it) {
            int idx = counter_index(it.key(), 'c', prob->n);
            if (idx < 0)
                throw SchemaViolation("initial_state." + it.key(), "unknown fluent");
            if (!it.value().is_number_integer())
                throw SchemaViolation("initial_state." + it.key(), "must be an integer");
            values[idx] = it.value().get<std::int64_t>();
        }
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] < 0 || values[i] > prob->max_value)
                throw SchemaViolation("initial_state.c" + std::to_string(i),
                                      "outside [0, max_value]");

        TaskModel model;
        model.domain_name = "counters";
        model.initial = State(std::make_shared<CountersState>(prob, std::move(values)));
        model.goal = explicit_goal ? *explicit_goal : counters_chain_goal(prob->n);
        model.successors = counters_successors;
        if (explicit_goal) {
            auto goal = model.goal;
            model.goal_test = [goal](const State& s) { return check_all(goal, s); };
        } else {
            model.goal_test = [](const State& s) {
                const auto& v = s.as<CountersState>().values();
                for (std::size_t i = 0; i + 1 < v.size(); ++i)
                    if (v[i] + 1 > v[i + 1])
                        return false;
                return true;
            };
        }
        model.state_from_json = [prob](const std::string& text) {
            nlohmann::json j = nlohmann::json::parse(text);
            std::vector<std::int64_t> vals(static_cast<std::size_t>(prob->n), 0);
            for (std::size_t i = 0; i < vals.size(); ++i)
                vals[i] = j.at("c" + std::to_string(i)).get<std::int64_t>();
            return State(std::make_shared<CountersState>(prob, std::move(vals)));
        };
        return model;
    };
    return f;
}

} // namespace planner::domains
