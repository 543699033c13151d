#include <charconv>

#include "json.hpp"

#include "planner/domains.hpp"
#include "planner/errors.hpp"

namespace planner::domains {

const char* direction_name(Direction d) {
    switch (d) {
    case Direction::N:
        return "N";
    case Direction::E:
        return "E";
    case Direction::S:
        return "S";
    case Direction::W:
        return "W";
    }
    return "?";
}

std::optional<Direction> direction_from_name(std::string_view name) {
    if (name == "N")
        return Direction::N;
    if (name == "E")
        return Direction::E;
    if (name == "S")
        return Direction::S;
    if (name == "W")
        return Direction::W;
    return std::nullopt;
}

namespace {

Cell step_cell(Cell c, Direction d) {
    switch (d) {
    case Direction::N:
        return {c.first - 1, c.second};
    case Direction::E:
        return {c.first, c.second + 1};
    case Direction::S:
        return {c.first + 1, c.second};
    case Direction::W:
        return {c.first, c.second - 1};
    }
    return c;
}

bool parse_indexed_cell(std::string_view name, std::string_view prefix, Cell& out) {
    // "<prefix>_<row>_<col>"
    if (name.size() <= prefix.size() + 1 || name.substr(0, prefix.size()) != prefix ||
        name[prefix.size()] != '_')
        return false;
    std::string_view rest = name.substr(prefix.size() + 1);
    std::size_t sep = rest.find('_');
    if (sep == std::string_view::npos)
        return false;
    int r = 0, c = 0;
    auto [p1, e1] = std::from_chars(rest.data(), rest.data() + sep, r);
    if (e1 != std::errc() || p1 != rest.data() + sep)
        return false;
    std::string_view ctext = rest.substr(sep + 1);
    auto [p2, e2] = std::from_chars(ctext.data(), ctext.data() + ctext.size(), c);
    if (e2 != std::errc() || p2 != ctext.data() + ctext.size())
        return false;
    out = {r, c};
    return true;
}

} // namespace

PacmanState::PacmanState(std::shared_ptr<const PacmanProblem> p, Cell pacman,
                         std::vector<Ghost> ghosts, std::set<Cell> pellets,
                         std::set<Cell> powerups, int power_timer, bool dead)
    : problem_(std::move(p)), pacman_(pacman), ghosts_(std::move(ghosts)),
      pellets_(std::move(pellets)), powerups_(std::move(powerups)), power_timer_(power_timer),
      dead_(dead) {
    std::uint64_t h = 0x9ac3a11;
    h = hashing::mix(h, static_cast<std::uint64_t>(pacman_.first) << 32 |
                            static_cast<std::uint32_t>(pacman_.second));
    for (const Ghost& g : ghosts_) {
        h = hashing::mix(h, static_cast<std::uint64_t>(g.pos.first) << 32 |
                                static_cast<std::uint32_t>(g.pos.second));
        h = hashing::mix(h, (static_cast<std::uint64_t>(g.script_index) << 1) | (g.alive ? 1 : 0));
    }
    for (const Cell& c : pellets_)
        h = hashing::mix(h, 0x11ULL + (static_cast<std::uint64_t>(c.first) << 16) + c.second);
    for (const Cell& c : powerups_)
        h = hashing::mix(h, 0x22ULL + (static_cast<std::uint64_t>(c.first) << 16) + c.second);
    h = hashing::mix(h, static_cast<std::uint64_t>(power_timer_));
    h = hashing::mix(h, dead_ ? 0xdeadULL : 0);
    hash_ = h;
}

std::optional<Value> PacmanState::fluent(std::string_view name) const {
    if (name == "pacman_row")
        return Value(static_cast<std::int64_t>(pacman_.first));
    if (name == "pacman_col")
        return Value(static_cast<std::int64_t>(pacman_.second));
    if (name == "power_timer")
        return Value(static_cast<std::int64_t>(power_timer_));
    if (name == "dead")
        return Value(dead_);
    if (name.substr(0, 5) == "ghost") {
        std::size_t sep = name.find('_');
        if (sep == std::string_view::npos)
            return std::nullopt;
        int idx = -1;
        auto num = name.substr(5, sep - 5);
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), idx);
        if (ec != std::errc() || p != num.data() + num.size() || idx < 0 ||
            static_cast<std::size_t>(idx) >= ghosts_.size())
            return std::nullopt;
        std::string_view field = name.substr(sep + 1);
        const Ghost& g = ghosts_[idx];
        if (field == "row")
            return Value(static_cast<std::int64_t>(g.pos.first));
        if (field == "col")
            return Value(static_cast<std::int64_t>(g.pos.second));
        if (field == "script")
            return Value(static_cast<std::int64_t>(g.script_index));
        if (field == "alive")
            return Value(g.alive);
        return std::nullopt;
    }
    Cell cell;
    if (parse_indexed_cell(name, "pellet", cell)) {
        for (const Cell& c : problem_->initial_pellets)
            if (c == cell)
                return Value(pellets_.count(cell) != 0);
        return std::nullopt;
    }
    if (parse_indexed_cell(name, "powerup", cell)) {
        for (const Cell& c : problem_->initial_powerups)
            if (c == cell)
                return Value(powerups_.count(cell) != 0);
        return std::nullopt;
    }
    return std::nullopt;
}

void PacmanState::for_each_fluent(
    const std::function<void(const std::string&, const Value&)>& fn) const {
    fn("pacman_row", Value(static_cast<std::int64_t>(pacman_.first)));
    fn("pacman_col", Value(static_cast<std::int64_t>(pacman_.second)));
    fn("power_timer", Value(static_cast<std::int64_t>(power_timer_)));
    fn("dead", Value(dead_));
    for (std::size_t i = 0; i < ghosts_.size(); ++i) {
        std::string base = "ghost" + std::to_string(i);
        fn(base + "_row", Value(static_cast<std::int64_t>(ghosts_[i].pos.first)));
        fn(base + "_col", Value(static_cast<std::int64_t>(ghosts_[i].pos.second)));
        fn(base + "_script", Value(static_cast<std::int64_t>(ghosts_[i].script_index)));
        fn(base + "_alive", Value(ghosts_[i].alive));
    }
    for (const Cell& c : problem_->initial_pellets)
        fn("pellet_" + std::to_string(c.first) + "_" + std::to_string(c.second),
           Value(pellets_.count(c) != 0));
    for (const Cell& c : problem_->initial_powerups)
        fn("powerup_" + std::to_string(c.first) + "_" + std::to_string(c.second),
           Value(powerups_.count(c) != 0));
}

std::size_t PacmanState::fluent_count() const {
    return 4 + 4 * ghosts_.size() + problem_->initial_pellets.size() +
           problem_->initial_powerups.size();
}

bool PacmanState::equals(const StatePayload& other) const {
    const auto& o = static_cast<const PacmanState&>(other);
    return pacman_ == o.pacman_ && power_timer_ == o.power_timer_ && dead_ == o.dead_ &&
           ghosts_ == o.ghosts_ && pellets_ == o.pellets_ && powerups_ == o.powerups_;
}

std::string PacmanState::to_json_text() const {
    nlohmann::json j;
    j["pacman"] = {pacman_.first, pacman_.second};
    auto ghosts = nlohmann::json::array();
    for (const Ghost& g : ghosts_)
        ghosts.push_back({{"pos", {g.pos.first, g.pos.second}},
                          {"script_index", g.script_index},
                          {"alive", g.alive}});
    j["ghosts"] = ghosts;
    auto pellets = nlohmann::json::array();
    for (const Cell& c : pellets_)
        pellets.push_back({c.first, c.second});
    j["pellets"] = pellets;
    auto powerups = nlohmann::json::array();
    for (const Cell& c : powerups_)
        powerups.push_back({c.first, c.second});
    j["powerups"] = powerups;
    j["power_timer"] = power_timer_;
    j["dead"] = dead_;
    return j.dump();
}

std::size_t PacmanState::approx_bytes() const {
    return sizeof(PacmanState) + ghosts_.size() * sizeof(Ghost) +
           (pellets_.size() + powerups_.size()) * 48;
}

std::optional<State> pacman_step(const State& state, Direction dir) {
    const auto& s = state.as<PacmanState>();
    const PacmanProblem& prob = s.problem();
    if (s.dead())
        return std::nullopt;

    // 1. pacman moves
    Cell from = s.pacman();
    Cell to = step_cell(from, dir);
    if (prob.wall(to.first, to.second))
        return std::nullopt;

    // 2. consume pellet / power-up on entry
    auto pellets = s.pellets();
    auto powerups = s.powerups();
    int timer = s.power_timer();
    pellets.erase(to);
    if (powerups.erase(to) > 0)
        timer = prob.power_duration;

    // 3. ghosts move along their scripts; blocked moves skip but advance
    auto ghosts = s.ghosts();
    std::vector<Cell> old_pos(ghosts.size());
    for (std::size_t i = 0; i < ghosts.size(); ++i) {
        Ghost& g = ghosts[i];
        old_pos[i] = g.pos;
        if (!g.alive)
            continue;
        const auto& script = prob.ghost_scripts[i];
        if (script.empty())
            continue;
        Direction gd = script[g.script_index % script.size()];
        Cell target = step_cell(g.pos, gd);
        if (!prob.wall(target.first, target.second))
            g.pos = target;
        g.script_index = static_cast<std::uint32_t>((g.script_index + 1) % script.size());
    }

    // 4. collisions: same cell, or swapped cells this turn
    bool dead = false;
    for (std::size_t i = 0; i < ghosts.size(); ++i) {
        Ghost& g = ghosts[i];
        if (!g.alive)
            continue;
        bool same_cell = g.pos == to;
        bool swapped = g.pos == from && old_pos[i] == to;
        if (same_cell || swapped) {
            if (timer > 0)
                g.alive = false; // banished
            else
                dead = true;
        }
    }

    // 5. timer runs down
    if (timer > 0)
        --timer;

    return State(std::make_shared<PacmanState>(s.problem_ptr(), to, std::move(ghosts),
                                               std::move(pellets), std::move(powerups), timer,
                                               dead));
}

std::vector<Transition> pacman_successors(const State& state) {
    const auto& s = state.as<PacmanState>();
    if (s.dead())
        return {}; // dead end
    std::vector<Transition> out;
    for (Direction d : {Direction::N, Direction::E, Direction::S, Direction::W}) {
        if (auto next = pacman_step(state, d))
            out.push_back({direction_name(d), 1.0, std::move(*next)});
    }
    return out;
}

// ---- instance loading ------------------------------------------------------

DomainFactory pacman_factory() {
    DomainFactory f;
    f.name = "pacman";
    f.build = [](const nlohmann::json& params, const nlohmann::json& initial,
                 const std::vector<GoalCondition>* explicit_goal) {
        if (!params.contains("grid") || !params["grid"].is_array() || params["grid"].empty())
            throw SchemaViolation("parameters.grid", "missing or empty");

        auto prob = std::make_shared<PacmanProblem>();
        std::vector<std::string> rows = params["grid"].get<std::vector<std::string>>();
        prob->rows = static_cast<int>(rows.size());
        prob->cols = static_cast<int>(rows[0].size());
        prob->power_duration = params.value("power_duration", 10);
        if (prob->power_duration < 0)
            throw SchemaViolation("parameters.power_duration", "must be >= 0");

        Cell pacman{-1, -1};
        std::vector<Ghost> ghosts;
        std::set<Cell> pellets;
        std::set<Cell> powerups;
        prob->walls.assign(prob->rows, std::string(prob->cols, ' '));
        for (int r = 0; r < prob->rows; ++r) {
            if (static_cast<int>(rows[r].size()) != prob->cols)
                throw SchemaViolation("parameters.grid[" + std::to_string(r) + "]",
                                      "rows must have equal length");
            for (int c = 0; c < prob->cols; ++c) {
                switch (rows[r][c]) {
                case '#':
                    prob->walls[r][c] = '#';
                    break;
                case '.':
                    pellets.insert({r, c});
                    break;
                case 'o':
                    powerups.insert({r, c});
                    break;
                case 'P':
                    if (pacman.first >= 0)
                        throw SchemaViolation("parameters.grid", "more than one Pacman");
                    pacman = {r, c};
                    break;
                case 'G':
                    ghosts.push_back({{r, c}, 0, true});
                    break;
                case ' ':
                    break;
                default:
                    throw SchemaViolation("parameters.grid",
                                          std::string("unknown cell character '") + rows[r][c] +
                                              "'");
                }
            }
        }
        if (pacman.first < 0)
            throw SchemaViolation("parameters.grid", "no Pacman cell");

        prob->ghost_scripts.assign(ghosts.size(), {});
        if (params.contains("ghost_scripts")) {
            const auto& scripts = params["ghost_scripts"];
            if (!scripts.is_array() || scripts.size() > ghosts.size())
                throw SchemaViolation("parameters.ghost_scripts",
                                      "must be an array with one entry per ghost");
            for (std::size_t i = 0; i < scripts.size(); ++i) {
                for (const auto& step : scripts[i]) {
                    auto d = direction_from_name(step.get<std::string>());
                    if (!d)
                        throw SchemaViolation("parameters.ghost_scripts[" + std::to_string(i) + "]",
                                              "directions must be N/E/S/W");
                    prob->ghost_scripts[i].push_back(*d);
                }
            }
        }
        prob->initial_pellets.assign(pellets.begin(), pellets.end());
        prob->initial_powerups.assign(powerups.begin(), powerups.end());

        int timer = 0;
        for (auto it = initial.begin(); it != initial.end(); ++it) {
            if (it.key() == "power_timer") {
                timer = it.value().get<int>();
                if (timer < 0 || timer > prob->power_duration)
                    throw SchemaViolation("initial_state.power_timer",
                                          "outside [0, power_duration]");
            } else {
                throw SchemaViolation("initial_state." + it.key(),
                                      "pacman state is defined by the grid");
            }
        }

        TaskModel model;
        model.domain_name = "pacman";
        model.initial = State(std::make_shared<PacmanState>(prob, pacman, std::move(ghosts),
                                                            std::move(pellets), std::move(powerups),
                                                            timer, false));
        if (explicit_goal) {
            model.goal = *explicit_goal;
            auto goal = model.goal;
            model.goal_test = [goal](const State& s) { return check_all(goal, s); };
        } else {
            // all pellets cleared, and not caught
            std::vector<GoalCondition> goal;
            for (const Cell& c : prob->initial_pellets)
                goal.push_back(GoalCondition::prop(
                    "pellet_" + std::to_string(c.first) + "_" + std::to_string(c.second), false));
            goal.push_back(GoalCondition::prop("dead", false));
            model.goal = std::move(goal);
            model.goal_test = [](const State& s) {
                const auto& p = s.as<PacmanState>();
                return p.pellets().empty() && !p.dead();
            };
        }
        model.successors = pacman_successors;
        model.state_from_json = [prob](const std::string& text) {
            nlohmann::json j = nlohmann::json::parse(text);
            Cell pac{j.at("pacman")[0].get<int>(), j.at("pacman")[1].get<int>()};
            std::vector<Ghost> ghosts;
            for (const auto& g : j.at("ghosts"))
                ghosts.push_back({{g.at("pos")[0].get<int>(), g.at("pos")[1].get<int>()},
                                  g.at("script_index").get<std::uint32_t>(),
                                  g.at("alive").get<bool>()});
            std::set<Cell> pellets;
            for (const auto& c : j.at("pellets"))
                pellets.insert({c[0].get<int>(), c[1].get<int>()});
            std::set<Cell> powerups;
            for (const auto& c : j.at("powerups"))
                powerups.insert({c[0].get<int>(), c[1].get<int>()});
            return State(std::make_shared<PacmanState>(prob, pac, std::move(ghosts),
                                                       std::move(pellets), std::move(powerups),
                                                       j.at("power_timer").get<int>(),
                                                       j.at("dead").get<bool>()));
        };
        return model;
    };
    return f;
}

} // namespace planner::domains
