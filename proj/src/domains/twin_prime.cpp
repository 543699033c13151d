#include <charconv>

#include "json.hpp"

#include "planner/domains.hpp"
#include "planner/errors.hpp"

namespace planner::domains {

// ---- primality -----------------------------------------------------------

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1;
    base %= m;
    while (exp) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace

bool is_prime(std::int64_t n) {
    if (n < 2)
        return false;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p)
            return true;
        if (n % p == 0)
            return false;
    }
    // deterministic Miller-Rabin; this witness set is exact for all 64-bit n
    auto u = static_cast<std::uint64_t>(n);
    std::uint64_t d = u - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                            31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, u);
        if (x == 1 || x == u - 1)
            continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, u);
            if (x == u - 1) {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

bool is_twin_prime(std::int64_t n) {
    if (!is_prime(n))
        return false;
    if (is_prime(n - 2))
        return true;
    return n <= INT64_MAX - 2 && is_prime(n + 2);
}

// ---- state ----------------------------------------------------------------

namespace {

bool any_goal_register(const TwinPrimeProblem& prob, const std::vector<std::int64_t>& regs) {
    for (std::int64_t r : regs)
        if (r > prob.threshold && is_twin_prime(r))
            return true;
    return false;
}

int register_index(std::string_view name, std::size_t k) {
    if (name.size() < 2 || name[0] != 'r')
        return -1;
    int idx = -1;
    auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    if (ec != std::errc() || p != name.data() + name.size())
        return -1;
    return (idx >= 0 && static_cast<std::size_t>(idx) < k) ? idx : -1;
}

} // namespace

TwinPrimeState::TwinPrimeState(std::shared_ptr<const TwinPrimeProblem> p,
                               std::vector<std::int64_t> registers)
    : problem_(std::move(p)), registers_(std::move(registers)) {
    goal_reached_ = any_goal_register(*problem_, registers_);
    std::uint64_t h = 0x7419bead;
    for (std::int64_t r : registers_)
        h = hashing::mix(h, static_cast<std::uint64_t>(r));
    hash_ = h;
}

std::optional<Value> TwinPrimeState::fluent(std::string_view name) const {
    if (name == "goal_reached")
        return Value(goal_reached_);
    int idx = register_index(name, registers_.size());
    if (idx < 0)
        return std::nullopt;
    return Value(registers_[idx]);
}

void TwinPrimeState::for_each_fluent(
    const std::function<void(const std::string&, const Value&)>& fn) const {
    for (std::size_t i = 0; i < registers_.size(); ++i)
        fn("r" + std::to_string(i), Value(registers_[i]));
    fn("goal_reached", Value(goal_reached_));
}

bool TwinPrimeState::equals(const StatePayload& other) const {
    return registers_ == static_cast<const TwinPrimeState&>(other).registers_;
}

std::string TwinPrimeState::to_json_text() const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < registers_.size(); ++i)
        j["r" + std::to_string(i)] = registers_[i];
    j["goal_reached"] = goal_reached_;
    return j.dump();
}

std::size_t TwinPrimeState::approx_bytes() const {
    return sizeof(TwinPrimeState) + registers_.size() * sizeof(std::int64_t) + 32;
}

int TwinPrimeState::fluent_slot(std::string_view name) const {
    return register_index(name, registers_.size());
}

Value TwinPrimeState::fluent_by_slot(int slot) const { return Value(registers_[slot]); }

void TwinPrimeState::slot_values(double* out) const {
    for (std::size_t i = 0; i < registers_.size(); ++i)
        out[i] = static_cast<double>(registers_[i]);
}

// ---- transitions ----------------------------------------------------------

std::vector<Transition> twinprime_successors(const State& state) {
    const auto& s = state.as<TwinPrimeState>();
    const auto& regs = s.registers();
    std::vector<Transition> out;

    static const char* op_names[] = {"add", "sub", "mul", "idiv"};
    for (std::size_t i = 0; i < regs.size(); ++i) {
        for (std::size_t j = 0; j < regs.size(); ++j) {
            if (i == j)
                continue;
            for (int op = 0; op < 4; ++op) {
                std::int64_t result = 0;
                bool ok = false;
                switch (op) {
                case 0:
                    ok = !__builtin_add_overflow(regs[i], regs[j], &result);
                    break;
                case 1:
                    ok = !__builtin_sub_overflow(regs[i], regs[j], &result);
                    break;
                case 2:
                    ok = !__builtin_mul_overflow(regs[i], regs[j], &result);
                    break;
                case 3:
                    // truncating division; INT64_MIN / -1 overflows
                    ok = regs[j] != 0 && !(regs[i] == INT64_MIN && regs[j] == -1);
                    if (ok)
                        result = regs[i] / regs[j];
                    break;
                }
                if (!ok)
                    continue;
                auto next = regs;
                next[i] = result;
                out.push_back({std::string(op_names[op]) + " r" + std::to_string(i) + " r" +
                                   std::to_string(j),
                               1.0,
                               State(std::make_shared<TwinPrimeState>(s.problem_ptr(),
                                                                      std::move(next)))});
            }
        }
    }
    return out;
}

DomainFactory twinprime_factory() {
    DomainFactory f;
    f.name = "twinprime";
    f.build = [](const nlohmann::json& params, const nlohmann::json& initial,
                 const std::vector<GoalCondition>* explicit_goal) {
        auto prob = std::make_shared<TwinPrimeProblem>();
        if (!params.contains("threshold") || !params["threshold"].is_number_integer())
            throw SchemaViolation("parameters.threshold", "missing or non-integer");
        prob->threshold = params["threshold"].get<std::int64_t>();

        std::vector<std::int64_t> regs;
        if (params.contains("registers")) {
            if (!params["registers"].is_array() || params["registers"].empty())
                throw SchemaViolation("parameters.registers", "must be a nonempty array");
            for (const auto& v : params["registers"])
                regs.push_back(v.get<std::int64_t>());
        }
        if (!initial.empty()) {
            if (regs.empty())
                regs.resize(initial.size(), 0);
            for (auto it = initial.begin(); it != initial.end(); ++it) {
                int idx = register_index(it.key(), regs.size());
                if (idx < 0)
                    throw SchemaViolation("initial_state." + it.key(), "unknown fluent");
                regs[idx] = it.value().get<std::int64_t>();
            }
        }
        if (regs.empty())
            throw SchemaViolation("parameters.registers", "no registers specified");
        prob->register_count = regs.size();

        TaskModel model;
        model.domain_name = "twinprime";
        model.initial = State(std::make_shared<TwinPrimeState>(prob, std::move(regs)));
        if (explicit_goal) {
            model.goal = *explicit_goal;
            auto goal = model.goal;
            model.goal_test = [goal](const State& s) { return check_all(goal, s); };
        } else {
            // the structural goal (some register holds a twin prime above the
            // threshold) is mirrored by the derived goal_reached fluent
            model.goal = {GoalCondition::prop("goal_reached", true)};
            model.goal_test = [](const State& s) { return s.as<TwinPrimeState>().goal_reached(); };
        }
        model.successors = twinprime_successors;
        model.state_from_json = [prob](const std::string& text) {
            nlohmann::json j = nlohmann::json::parse(text);
            std::vector<std::int64_t> regs(prob->register_count, 0);
            for (std::size_t i = 0; i < regs.size(); ++i)
                regs[i] = j.at("r" + std::to_string(i)).get<std::int64_t>();
            return State(std::make_shared<TwinPrimeState>(prob, std::move(regs)));
        };
        return model;
    };
    return f;
}

} // namespace planner::domains
