#ifndef PLANNER_DOMAINS_HPP
#define PLANNER_DOMAINS_HPP

#include <memory>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "planner/registry.hpp"
#include "planner/state.hpp"
#include "planner/task.hpp"

namespace planner::domains {

DomainFactory counters_factory();
DomainFactory fo_counters_factory();
DomainFactory pacman_factory();
DomainFactory twinprime_factory();

// ---- counters ----------------------------------------------------------

struct CountersProblem {
    std::int64_t n = 0;
    std::int64_t max_value = 0;
    // action labels, precomputed once per task
    std::vector<std::string> inc_labels;
    std::vector<std::string> dec_labels;
};

class CountersState : public StatePayload {
public:
    CountersState(std::shared_ptr<const CountersProblem> p, std::vector<std::int64_t> values);

    const std::vector<std::int64_t>& values() const { return values_; }
    const CountersProblem& problem() const { return *problem_; }
    const std::shared_ptr<const CountersProblem>& problem_ptr() const { return problem_; }

    std::optional<Value> fluent(std::string_view name) const override;
    void for_each_fluent(
        const std::function<void(const std::string&, const Value&)>& fn) const override;
    std::size_t fluent_count() const override { return values_.size(); }
    bool equals(const StatePayload& other) const override;
    std::uint64_t hash() const override { return hash_; }
    std::string to_json_text() const override;
    std::size_t approx_bytes() const override;
    int fluent_slot(std::string_view name) const override;
    Value fluent_by_slot(int slot) const override;
    int slot_count() const override { return static_cast<int>(values_.size()); }
    void slot_values(double* out) const override;

private:
    std::shared_ptr<const CountersProblem> problem_;
    std::vector<std::int64_t> values_;
    std::uint64_t hash_;
};

std::vector<Transition> counters_successors(const State& state);

// ---- fo-counters -------------------------------------------------------

struct FoCountersProblem {
    std::int64_t n = 0;
    std::int64_t max_value = 0;
    std::int64_t max_rate = 0;
};

class FoCountersState : public StatePayload {
public:
    FoCountersState(std::shared_ptr<const FoCountersProblem> p, std::vector<std::int64_t> values,
                    std::vector<std::int64_t> rates);

    const std::vector<std::int64_t>& values() const { return values_; }
    const std::vector<std::int64_t>& rates() const { return rates_; }
    const FoCountersProblem& problem() const { return *problem_; }
    const std::shared_ptr<const FoCountersProblem>& problem_ptr() const { return problem_; }

    std::optional<Value> fluent(std::string_view name) const override;
    void for_each_fluent(
        const std::function<void(const std::string&, const Value&)>& fn) const override;
    std::size_t fluent_count() const override { return values_.size() + rates_.size(); }
    bool equals(const StatePayload& other) const override;
    std::uint64_t hash() const override { return hash_; }
    std::string to_json_text() const override;
    std::size_t approx_bytes() const override;
    int fluent_slot(std::string_view name) const override;
    Value fluent_by_slot(int slot) const override;
    int slot_count() const override { return static_cast<int>(values_.size() + rates_.size()); }
    void slot_values(double* out) const override;

private:
    std::shared_ptr<const FoCountersProblem> problem_;
    std::vector<std::int64_t> values_;
    std::vector<std::int64_t> rates_;
    std::uint64_t hash_;
};

std::vector<Transition> fo_counters_successors(const State& state);

// ---- pacman ------------------------------------------------------------

using Cell = std::pair<int, int>; // row, col

enum class Direction { N, E, S, W };
const char* direction_name(Direction d);
std::optional<Direction> direction_from_name(std::string_view name);

struct Ghost {
    Cell pos;
    std::uint32_t script_index = 0;
    bool alive = true;

    bool operator==(const Ghost&) const = default;
};

struct PacmanProblem {
    int rows = 0;
    int cols = 0;
    std::vector<std::string> walls;          // '#' where blocked
    std::vector<std::vector<Direction>> ghost_scripts;
    int power_duration = 10;
    std::vector<Cell> initial_pellets;       // cells that ever held a pellet
    std::vector<Cell> initial_powerups;

    bool wall(int r, int c) const {
        return r < 0 || c < 0 || r >= rows || c >= cols || walls[r][c] == '#';
    }
};

class PacmanState : public StatePayload {
public:
    PacmanState(std::shared_ptr<const PacmanProblem> p, Cell pacman, std::vector<Ghost> ghosts,
                std::set<Cell> pellets, std::set<Cell> powerups, int power_timer, bool dead);

    const PacmanProblem& problem() const { return *problem_; }
    const std::shared_ptr<const PacmanProblem>& problem_ptr() const { return problem_; }
    Cell pacman() const { return pacman_; }
    const std::vector<Ghost>& ghosts() const { return ghosts_; }
    const std::set<Cell>& pellets() const { return pellets_; }
    const std::set<Cell>& powerups() const { return powerups_; }
    int power_timer() const { return power_timer_; }
    bool dead() const { return dead_; }

    std::optional<Value> fluent(std::string_view name) const override;
    void for_each_fluent(
        const std::function<void(const std::string&, const Value&)>& fn) const override;
    std::size_t fluent_count() const override;
    bool equals(const StatePayload& other) const override;
    std::uint64_t hash() const override { return hash_; }
    std::string to_json_text() const override;
    std::size_t approx_bytes() const override;

private:
    std::shared_ptr<const PacmanProblem> problem_;
    Cell pacman_;
    std::vector<Ghost> ghosts_;
    std::set<Cell> pellets_;
    std::set<Cell> powerups_;
    int power_timer_;
    bool dead_;
    std::uint64_t hash_;
};

// Applies one move. Phases: pacman moves, consumes, ghosts move, collision
// check (same cell or swap; banish under power, dead end otherwise), timer
// decrement. Returns nullopt when the target cell is a wall or off-grid.
std::optional<State> pacman_step(const State& state, Direction dir);

std::vector<Transition> pacman_successors(const State& state);

// ---- twinprime ---------------------------------------------------------

struct TwinPrimeProblem {
    std::int64_t threshold = 0;
    std::size_t register_count = 0;
};

class TwinPrimeState : public StatePayload {
public:
    TwinPrimeState(std::shared_ptr<const TwinPrimeProblem> p, std::vector<std::int64_t> registers);

    const std::vector<std::int64_t>& registers() const { return registers_; }
    const TwinPrimeProblem& problem() const { return *problem_; }
    const std::shared_ptr<const TwinPrimeProblem>& problem_ptr() const { return problem_; }
    bool goal_reached() const { return goal_reached_; }

    std::optional<Value> fluent(std::string_view name) const override;
    void for_each_fluent(
        const std::function<void(const std::string&, const Value&)>& fn) const override;
    std::size_t fluent_count() const override { return registers_.size() + 1; }
    bool equals(const StatePayload& other) const override;
    std::uint64_t hash() const override { return hash_; }
    std::string to_json_text() const override;
    std::size_t approx_bytes() const override;
    int fluent_slot(std::string_view name) const override;
    Value fluent_by_slot(int slot) const override;
    int slot_count() const override { return static_cast<int>(registers_.size()); }
    void slot_values(double* out) const override;

private:
    std::shared_ptr<const TwinPrimeProblem> problem_;
    std::vector<std::int64_t> registers_;
    bool goal_reached_;
    std::uint64_t hash_;
};

std::vector<Transition> twinprime_successors(const State& state);

// Deterministic primality (Miller-Rabin with a base set exact for 64-bit).
bool is_prime(std::int64_t n);

// True iff n is prime and n-2 or n+2 is prime.
bool is_twin_prime(std::int64_t n);

} // namespace planner::domains

#endif
