#include "planner/registry.hpp"

#include <fstream>
#include <sstream>

#include "planner/domains.hpp"
#include "planner/errors.hpp"

namespace planner {

void DomainRegistry::add(DomainFactory factory) {
    factories_[factory.name] = std::move(factory);
}

bool DomainRegistry::contains(const std::string& name) const {
    return factories_.count(name) != 0;
}

const DomainFactory& DomainRegistry::at(const std::string& name) const {
    auto it = factories_.find(name);
    if (it == factories_.end())
        throw UnknownDomain(name);
    return it->second;
}

std::vector<std::string> DomainRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : factories_)
        out.push_back(name);
    return out;
}

const DomainRegistry& builtin_registry() {
    static const DomainRegistry registry = [] {
        DomainRegistry r;
        r.add(domains::counters_factory());
        r.add(domains::fo_counters_factory());
        r.add(domains::pacman_factory());
        r.add(domains::twinprime_factory());
        return r;
    }();
    return registry;
}

namespace {

std::vector<GoalCondition> parse_goal_array(const nlohmann::json& goal) {
    std::vector<GoalCondition> out;
    for (std::size_t i = 0; i < goal.size(); ++i) {
        const auto& entry = goal[i];
        std::string path = "goal[" + std::to_string(i) + "]";
        if (!entry.is_object())
            throw SchemaViolation(path, "goal entries must be objects");
        if (entry.contains("prop")) {
            if (!entry["prop"].is_string())
                throw SchemaViolation(path + ".prop", "must be a string");
            bool expected = true;
            if (entry.contains("value")) {
                if (!entry["value"].is_boolean())
                    throw SchemaViolation(path + ".value", "must be a boolean");
                expected = entry["value"].get<bool>();
            }
            out.push_back(GoalCondition::prop(entry["prop"].get<std::string>(), expected));
        } else if (entry.contains("expr")) {
            if (!entry["expr"].is_string())
                throw SchemaViolation(path + ".expr", "must be a string");
            std::string cmp;
            if (entry.contains("cmp")) {
                if (!entry["cmp"].is_string())
                    throw SchemaViolation(path + ".cmp", "must be a string");
                cmp = entry["cmp"].get<std::string>();
            }
            try {
                out.push_back(parse_numeric_goal(entry["expr"].get<std::string>(), cmp));
            } catch (const ParseError& e) {
                throw SchemaViolation(path, e.what());
            }
        } else {
            throw SchemaViolation(path, "expected a 'prop' or 'expr' entry");
        }
    }
    return out;
}

void check_goal_variables(const TaskModel& model) {
    for (const auto& cond : model.goal) {
        if (cond.kind == GoalCondition::Kind::Prop) {
            if (!model.initial.fluent(cond.prop_name))
                throw UnboundVariable(cond.prop_name);
            continue;
        }
        std::vector<std::string> vars;
        cond.expr->collect_vars(vars);
        for (const auto& v : vars)
            if (!model.initial.fluent(v))
                throw UnboundVariable(v);
    }
}

} // namespace

TaskModelPtr load_instance(const nlohmann::json& doc, const DomainRegistry& registry) {
    if (!doc.is_object())
        throw SchemaViolation("$", "instance document must be a JSON object");
    if (!doc.contains("domain") || !doc["domain"].is_string())
        throw SchemaViolation("domain", "missing or non-string");
    const DomainFactory& factory = registry.at(doc["domain"].get<std::string>());

    nlohmann::json params = doc.value("parameters", nlohmann::json::object());
    if (!params.is_object())
        throw SchemaViolation("parameters", "must be an object");
    nlohmann::json initial = doc.value("initial_state", nlohmann::json::object());
    if (!initial.is_object())
        throw SchemaViolation("initial_state", "must be an object");

    std::vector<GoalCondition> explicit_goal;
    bool builtin_goal = false;
    if (!doc.contains("goal")) {
        builtin_goal = true; // domains supply their structural goal
    } else if (doc["goal"].is_string()) {
        if (doc["goal"].get<std::string>() != "builtin")
            throw SchemaViolation("goal", "string form must be \"builtin\"");
        builtin_goal = true;
    } else if (doc["goal"].is_array()) {
        explicit_goal = parse_goal_array(doc["goal"]);
    } else {
        throw SchemaViolation("goal", "must be \"builtin\" or an array of conditions");
    }

    TaskModel model = factory.build(params, initial, builtin_goal ? nullptr : &explicit_goal);
    check_goal_variables(model);
    return std::make_shared<const TaskModel>(std::move(model));
}

TaskModelPtr load_instance_text(const std::string& text, const DomainRegistry& registry) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaViolation("$", std::string("invalid JSON: ") + e.what());
    }
    return load_instance(doc, registry);
}

TaskModelPtr load_instance_file(const std::string& path, const DomainRegistry& registry) {
    std::ifstream in(path);
    if (!in)
        throw LoadError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_instance_text(buf.str(), registry);
}

} // namespace planner
