#ifndef PLANNER_REGISTRY_HPP
#define PLANNER_REGISTRY_HPP

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "planner/task.hpp"

namespace planner {

// Builds a TaskModel from the instance document pieces. `explicit_goal` is
// null when the instance says `"goal": "builtin"`; the factory then installs
// the domain's own declarative goal list and native goal test.
struct DomainFactory {
    std::string name;
    std::function<TaskModel(const nlohmann::json& params, const nlohmann::json& initial_state,
                            const std::vector<GoalCondition>* explicit_goal)>
        build;
};

class DomainRegistry {
public:
    void add(DomainFactory factory);
    bool contains(const std::string& name) const;
    const DomainFactory& at(const std::string& name) const; // throws UnknownDomain
    std::vector<std::string> names() const;

private:
    std::map<std::string, DomainFactory> factories_;
};

// Registry holding the built-in domains (counters, fo-counters, pacman,
// twinprime). Initialized once, safe to read concurrently.
const DomainRegistry& builtin_registry();

// Parses and validates an instance document against the schema:
//   {"domain": ..., "parameters": {...}, "initial_state": {...},
//    "goal": "builtin" | [ {"prop":..., "value":...} | {"expr":..., "cmp":...}, ... ]}
// Throws UnknownDomain, SchemaViolation, UnboundVariable.
TaskModelPtr load_instance(const nlohmann::json& doc, const DomainRegistry& registry);
TaskModelPtr load_instance_text(const std::string& text, const DomainRegistry& registry);
TaskModelPtr load_instance_file(const std::string& path, const DomainRegistry& registry);

} // namespace planner

#endif
