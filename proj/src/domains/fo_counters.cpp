#include <charconv>

#include "json.hpp"

#include "planner/domains.hpp"
#include "planner/errors.hpp"

namespace planner::domains {

namespace {

int indexed_name(std::string_view name, char prefix, std::int64_t n) {
    if (name.size() < 2 || name[0] != prefix)
        return -1;
    int idx = -1;
    auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    if (ec != std::errc() || p != name.data() + name.size())
        return -1;
    return (idx >= 0 && idx < n) ? idx : -1;
}

} // namespace

FoCountersState::FoCountersState(std::shared_ptr<const FoCountersProblem> p,
                                 std::vector<std::int64_t> values,
                                 std::vector<std::int64_t> rates)
    : problem_(std::move(p)), values_(std::move(values)), rates_(std::move(rates)) {
    std::uint64_t h = 0xf0c0de;
    for (std::int64_t v : values_)
        h = hashing::mix(h, static_cast<std::uint64_t>(v));
    for (std::int64_t r : rates_)
        h = hashing::mix(h, static_cast<std::uint64_t>(r));
    hash_ = h;
}

std::optional<Value> FoCountersState::fluent(std::string_view name) const {
    int idx = indexed_name(name, 'c', problem_->n);
    if (idx >= 0)
        return Value(values_[idx]);
    idx = indexed_name(name, 'r', problem_->n);
    if (idx >= 0)
        return Value(rates_[idx]);
    return std::nullopt;
}

void FoCountersState::for_each_fluent(
    const std::function<void(const std::string&, const Value&)>& fn) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        fn("c" + std::to_string(i), Value(values_[i]));
    for (std::size_t i = 0; i < rates_.size(); ++i)
        fn("r" + std::to_string(i), Value(rates_[i]));
}

bool FoCountersState::equals(const StatePayload& other) const {
    const auto& o = static_cast<const FoCountersState&>(other);
    return values_ == o.values_ && rates_ == o.rates_;
}

std::string FoCountersState::to_json_text() const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < values_.size(); ++i)
        j["c" + std::to_string(i)] = values_[i];
    for (std::size_t i = 0; i < rates_.size(); ++i)
        j["r" + std::to_string(i)] = rates_[i];
    return j.dump();
}

std::size_t FoCountersState::approx_bytes() const {
    return sizeof(FoCountersState) + (values_.size() + rates_.size()) * sizeof(std::int64_t) + 48;
}

int FoCountersState::fluent_slot(std::string_view name) const {
    int idx = indexed_name(name, 'c', problem_->n);
    if (idx >= 0)
        return idx;
    idx = indexed_name(name, 'r', problem_->n);
    if (idx >= 0)
        return static_cast<int>(problem_->n) + idx;
    return -1;
}

Value FoCountersState::fluent_by_slot(int slot) const {
    auto n = static_cast<int>(problem_->n);
    return slot < n ? Value(values_[slot]) : Value(rates_[slot - n]);
}

void FoCountersState::slot_values(double* out) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        out[i] = static_cast<double>(values_[i]);
    for (std::size_t i = 0; i < rates_.size(); ++i)
        out[values_.size() + i] = static_cast<double>(rates_[i]);
}

std::vector<Transition> fo_counters_successors(const State& state) {
    const auto& s = state.as<FoCountersState>();
    const auto& prob = s.problem();
    const auto& v = s.values();
    const auto& r = s.rates();
    std::vector<Transition> out;

    auto emit = [&](const std::string& label, std::vector<std::int64_t> nv,
                    std::vector<std::int64_t> nr) {
        out.push_back({label, 1.0,
                       State(std::make_shared<FoCountersState>(s.problem_ptr(), std::move(nv),
                                                               std::move(nr)))});
    };

    for (std::size_t i = 0; i < v.size(); ++i) {
        // zero-rate value changes are no-ops and not emitted
        if (r[i] > 0 && v[i] + r[i] <= prob.max_value) {
            auto nv = v;
            nv[i] += r[i];
            emit("increase_value c" + std::to_string(i), std::move(nv), r);
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (r[i] > 0 && v[i] - r[i] >= 0) {
            auto nv = v;
            nv[i] -= r[i];
            emit("decrease_value c" + std::to_string(i), std::move(nv), r);
        }
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < prob.max_rate) {
            auto nr = r;
            ++nr[i];
            emit("increase_rate c" + std::to_string(i), v, std::move(nr));
        }
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] > 0) {
            auto nr = r;
            --nr[i];
            emit("decrease_rate c" + std::to_string(i), v, std::move(nr));
        }
    }
    return out;
}

namespace {

std::vector<GoalCondition> chain_goal(std::int64_t n) {
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

std::vector<std::int64_t> read_array(const nlohmann::json& params, const nlohmann::json& initial,
                                     const std::string& params_key, char fluent_prefix,
                                     std::int64_t n) {
    std::vector<std::int64_t> out(static_cast<std::size_t>(n), 0);
    if (params.contains(params_key)) {
        if (!params[params_key].is_array() || params[params_key].size() != out.size())
            throw SchemaViolation("parameters." + params_key, "must be an array of length n");
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = params[params_key][i].get<std::int64_t>();
    }
    for (auto it = initial.begin(); it != initial.end(); ++it) {
        if (it.key().empty() || it.key()[0] != fluent_prefix)
            continue;
        int idx = indexed_name(it.key(), fluent_prefix, n);
        if (idx < 0)
            throw SchemaViolation("initial_state." + it.key(), "unknown fluent");
        out[idx] = it.value().get<std::int64_t>();
    }
    return out;
}

} // namespace

DomainFactory fo_counters_factory() {
    DomainFactory f;
    f.name = "fo-counters";
    f.build = [](const nlohmann::json& params, const nlohmann::json& initial,
                 const std::vector<GoalCondition>* explicit_goal) {
        auto prob = std::make_shared<FoCountersProblem>();
        prob->n = require_int(params, "n", "parameters");
        prob->max_value = require_int(params, "max_value", "parameters");
        prob->max_rate = require_int(params, "max_rate", "parameters");
        if (prob->n < 1)
            throw SchemaViolation("parameters.n", "must be >= 1");
        if (prob->max_value < 0 || prob->max_rate < 0)
            throw SchemaViolation("parameters", "max_value and max_rate must be >= 0");

        for (auto it = initial.begin(); it != initial.end(); ++it)
            if (indexed_name(it.key(), 'c', prob->n) < 0 && indexed_name(it.key(), 'r', prob->n) < 0)
                throw SchemaViolation("initial_state." + it.key(), "unknown fluent");

        auto values = read_array(params, initial, "values", 'c', prob->n);
        auto rates = read_array(params, initial, "rates", 'r', prob->n);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] < 0 || values[i] > prob->max_value)
                throw SchemaViolation("initial_state.c" + std::to_string(i),
                                      "outside [0, max_value]");
            if (rates[i] < 0 || rates[i] > prob->max_rate)
                throw SchemaViolation("initial_state.r" + std::to_string(i),
                                      "outside [0, max_rate]");
        }

        TaskModel model;
        model.domain_name = "fo-counters";
        model.initial =
            State(std::make_shared<FoCountersState>(prob, std::move(values), std::move(rates)));
        model.goal = explicit_goal ? *explicit_goal : chain_goal(prob->n);
        model.successors = fo_counters_successors;
        if (explicit_goal) {
            auto goal = model.goal;
            model.goal_test = [goal](const State& s) { return check_all(goal, s); };
        } else {
            model.goal_test = [](const State& s) {
                const auto& v = s.as<FoCountersState>().values();
                for (std::size_t i = 0; i + 1 < v.size(); ++i)
                    if (v[i] + 1 > v[i + 1])
                        return false;
                return true;
            };
        }
        model.state_from_json = [prob](const std::string& text) {
            nlohmann::json j = nlohmann::json::parse(text);
            std::vector<std::int64_t> vals(static_cast<std::size_t>(prob->n), 0);
            std::vector<std::int64_t> rates(static_cast<std::size_t>(prob->n), 0);
            for (std::size_t i = 0; i < vals.size(); ++i) {
                vals[i] = j.at("c" + std::to_string(i)).get<std::int64_t>();
                rates[i] = j.at("r" + std::to_string(i)).get<std::int64_t>();
            }
            return State(std::make_shared<FoCountersState>(prob, std::move(vals), std::move(rates)));
        };
        return model;
    };
    return f;
}

} // namespace planner::domains
