#ifndef PLANNER_STATE_HPP
#define PLANNER_STATE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "planner/value.hpp"

namespace planner {

// Deterministic 64-bit hashing helpers (FNV-1a style). State hashes must be
// stable across processes and runs; never hash pointers or use seeded hashes.
namespace hashing {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

inline std::uint64_t hash_bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t hash_string(std::string_view s) { return hash_bytes(s.data(), s.size()); }

} // namespace hashing

// Immutable, domain-specific full assignment over the task variables.
// Concrete payloads store a compact representation; the fluent view is how
// generic code (expressions, h^md, plugin heuristics) reads it.
class StatePayload {
public:
    virtual ~StatePayload() = default;

    // Name-indexed access. Returns nullopt when the variable does not exist.
    virtual std::optional<Value> fluent(std::string_view name) const = 0;

    // Enumerates the full assignment in a deterministic order.
    virtual void for_each_fluent(
        const std::function<void(const std::string&, const Value&)>& fn) const = 0;

    virtual std::size_t fluent_count() const = 0;

    // Equality over the full assignment, bit-exact on Reals. `other` is
    // guaranteed to be the same concrete type within one search.
    virtual bool equals(const StatePayload& other) const = 0;

    // Precomputed at construction; equal states hash equally.
    virtual std::uint64_t hash() const = 0;

    // JSON text of the state; decode is domain-specific (see DomainFactory).
    virtual std::string to_json_text() const = 0;

    // Rough live-set footprint used by the search memory estimator.
    virtual std::size_t approx_bytes() const { return 64; }

    // Optional integer slot lookup so hot expression evaluation can skip
    // string parsing. Slot ids are payload-defined; -1 means no slot.
    virtual int fluent_slot(std::string_view) const { return -1; }
    virtual Value fluent_by_slot(int) const { return Value(); }

    // Bulk gather of all slot-addressable numeric fluents, indexed by slot.
    // Zero means the payload has no slot-addressable fluents.
    virtual int slot_count() const { return 0; }
    virtual void slot_values(double*) const {}
};

class State {
public:
    State() = default;
    explicit State(std::shared_ptr<const StatePayload> payload) : payload_(std::move(payload)) {}

    const StatePayload& payload() const { return *payload_; }
    bool valid() const { return payload_ != nullptr; }

    std::optional<Value> fluent(std::string_view name) const { return payload_->fluent(name); }
    std::uint64_t hash() const { return payload_->hash(); }
    std::string to_json_text() const { return payload_->to_json_text(); }

    template <typename T>
    const T& as() const {
        return dynamic_cast<const T&>(*payload_);
    }

    friend bool operator==(const State& a, const State& b) {
        if (a.payload_ == b.payload_)
            return true;
        return a.payload_->hash() == b.payload_->hash() && a.payload_->equals(*b.payload_);
    }
    friend bool operator!=(const State& a, const State& b) { return !(a == b); }

private:
    std::shared_ptr<const StatePayload> payload_;
};

struct StateHash {
    std::size_t operator()(const State& s) const { return static_cast<std::size_t>(s.hash()); }
};

} // namespace planner

#endif
