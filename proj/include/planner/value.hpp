#ifndef PLANNER_VALUE_HPP
#define PLANNER_VALUE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace planner {

// Fluent value: Bool, Int (exact 64-bit), or Real (finite double).
// Int and Real never mix silently; to_real() is the one explicit coercion.
class Value {
public:
    Value() : v_(false) {}
    explicit Value(bool b) : v_(b) {}
    explicit Value(std::int64_t i) : v_(i) {}
    explicit Value(double r) : v_(r) {}

    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_real() const { return std::holds_alternative<double>(v_); }

    bool as_bool() const { return std::get<bool>(v_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    double as_real() const { return std::get<double>(v_); }

    // Explicit numeric coercion (Int -> Real is exact for |i| < 2^53;
    // domain integers stay well inside that range).
    double to_real() const {
        if (is_int())
            return static_cast<double>(as_int());
        if (is_real())
            return as_real();
        throw std::logic_error("boolean value used in numeric context");
    }

    bool is_numeric() const { return is_int() || is_real(); }

    // Bit-exact on Real by design: duplicate detection must be deterministic.
    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

    std::string repr() const {
        if (is_bool())
            return as_bool() ? "true" : "false";
        if (is_int())
            return std::to_string(as_int());
        return std::to_string(as_real());
    }

private:
    std::variant<bool, std::int64_t, double> v_;
};

} // namespace planner

#endif
