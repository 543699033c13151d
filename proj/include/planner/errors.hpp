#ifndef PLANNER_ERRORS_HPP
#define PLANNER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace planner {

struct PlannerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression evaluation failures. These signal a malformed condition or
// state and abort the evaluation that raised them.
struct EvalError : PlannerError {
    using PlannerError::PlannerError;
};

struct UnboundVariable : EvalError {
    explicit UnboundVariable(const std::string& name)
        : EvalError("unbound variable: " + name), variable(name) {}
    std::string variable;
};

struct DivisionByZero : EvalError {
    DivisionByZero() : EvalError("division by zero") {}
};

struct TypeMismatch : EvalError {
    explicit TypeMismatch(const std::string& what) : EvalError(what) {}
};

// Instance loading failures.
struct LoadError : PlannerError {
    using PlannerError::PlannerError;
};

struct UnknownDomain : LoadError {
    explicit UnknownDomain(const std::string& name)
        : LoadError("unknown domain: " + name), domain(name) {}
    std::string domain;
};

struct SchemaViolation : LoadError {
    SchemaViolation(const std::string& at, const std::string& why)
        : LoadError("schema violation at " + at + ": " + why), path(at), reason(why) {}
    std::string path;
    std::string reason;
};

struct ParseError : LoadError {
    using LoadError::LoadError;
};

// Synthesis pipeline failures.
struct SynthesisError : PlannerError {
    using PlannerError::PlannerError;
};

struct MissingInstance : SynthesisError {
    MissingInstance() : SynthesisError("refinement requested without an instance document") {}
};

struct NoCodeBlock : SynthesisError {
    NoCodeBlock() : SynthesisError("response contains no fenced code block") {}
};

struct FixtureMissing : SynthesisError {
    explicit FixtureMissing(const std::string& key)
        : SynthesisError("fixture missing: " + key), fixture_key(key) {}
    std::string fixture_key;
};

struct ProviderError : SynthesisError {
    ProviderError(int http_status, const std::string& body)
        : SynthesisError("provider error (status " + std::to_string(http_status) + "): " + body),
          status(http_status) {}
    explicit ProviderError(const std::string& detail)
        : SynthesisError("provider error: " + detail), status(0) {}
    int status;
};

struct ToolchainMissing : SynthesisError {
    explicit ToolchainMissing(const std::string& what) : SynthesisError(what) {}
};

} // namespace planner

#endif
