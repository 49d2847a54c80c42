#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causalq/common.hpp"
#include "causalq/env_common.hpp"
#include "causalq/rng.hpp"

namespace causalq {

/// Grid actions, in tie-break order.
enum class GridAction : int { MoveNorth = 0, MoveSouth, MoveEast, MoveWest, Pickup, Dropoff };

inline const char* to_string(GridAction a) {
    switch (a) {
        case GridAction::MoveNorth: return "MoveNorth";
        case GridAction::MoveSouth: return "MoveSouth";
        case GridAction::MoveEast: return "MoveEast";
        case GridAction::MoveWest: return "MoveWest";
        case GridAction::Pickup: return "Pickup";
        default: return "Dropoff";
    }
}

struct Cell {
    int row = 0;
    int col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Wall between two adjacent cells, stored with endpoints ordered.
struct Wall {
    Cell a, b;
    Wall() = default;
    Wall(Cell x, Cell y) {
        if (y < x) std::swap(x, y);
        a = x;
        b = y;
    }
    friend bool operator==(const Wall&, const Wall&) = default;
    friend auto operator<=>(const Wall&, const Wall&) = default;
};

/// Pickup-and-delivery grid configuration. A generalization of the classic
/// 5x5 four-depot taxi task to n x m grids with arbitrary depots and walls.
struct GridConfig {
    int rows = 5;
    int cols = 5;
    std::vector<Cell> depots;
    std::set<Wall> walls;
    int reward_step = -1;
    int reward_dropoff = 20;
    int reward_illegal = -10;
    int max_steps_per_episode = 0;  // 0 -> default 10*(rows+cols)

    int max_steps() const { return max_steps_per_episode > 0 ? max_steps_per_episode : 10 * (rows + cols); }
    int n_cells() const { return rows * cols; }
    int n_depots() const { return static_cast<int>(depots.size()); }
};

/// Passenger-location sentinel: values 0..n_depots-1 are depot indices.
inline constexpr int kInTaxi = -1;

struct EnvState {
    int taxi_row = 0;
    int taxi_col = 0;
    int passenger_location = 0;  // depot index or kInTaxi
    int destination = 0;         // depot index
    bool done = false;
    friend bool operator==(const EnvState&, const EnvState&) = default;
};

/// The classic 5x5 map: four corner-ish depots and six one-cell wall slabs.
inline GridConfig default_taxi_config() {
    GridConfig cfg;
    cfg.rows = 5;
    cfg.cols = 5;
    cfg.depots = {{0, 0}, {0, 4}, {4, 0}, {4, 3}};
    cfg.walls = {Wall({0, 1}, {0, 2}), Wall({1, 1}, {1, 2}), Wall({3, 0}, {3, 1}),
                 Wall({3, 2}, {3, 3}), Wall({4, 0}, {4, 1}), Wall({4, 2}, {4, 3})};
    return cfg;
}

namespace detail {

inline bool adjacent(const Cell& a, const Cell& b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
}

inline bool grid_connected(const GridConfig& cfg) {
    const int n = cfg.n_cells();
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int visited = 1;
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        const Cell c{cur / cfg.cols, cur % cfg.cols};
        for (int k = 0; k < 4; ++k) {
            const Cell t{c.row + dr[k], c.col + dc[k]};
            if (t.row < 0 || t.row >= cfg.rows || t.col < 0 || t.col >= cfg.cols) continue;
            if (cfg.walls.count(Wall(c, t))) continue;
            const int ti = t.row * cfg.cols + t.col;
            if (!seen[ti]) {
                seen[ti] = 1;
                ++visited;
                queue.push_back(t.row * cfg.cols + t.col);
            }
        }
    }
    return visited == n;
}

}  // namespace detail

inline void validate(const GridConfig& cfg) {
    if (cfg.rows < 1 || cfg.cols < 1) throw ConfigError("grid: rows and cols must be positive");
    if (cfg.n_depots() < 2) throw ConfigError("grid: need at least 2 depots");
    std::set<Cell> uniq;
    for (const Cell& d : cfg.depots) {
        if (d.row < 0 || d.row >= cfg.rows || d.col < 0 || d.col >= cfg.cols)
            throw ConfigError("grid: depot outside the grid");
        if (!uniq.insert(d).second) throw ConfigError("grid: duplicate depot");
    }
    for (const Wall& w : cfg.walls) {
        auto inside = [&](const Cell& c) {
            return c.row >= 0 && c.row < cfg.rows && c.col >= 0 && c.col < cfg.cols;
        };
        if (!inside(w.a) || !inside(w.b) || !detail::adjacent(w.a, w.b))
            throw ConfigError("grid: wall must join two adjacent in-grid cells");
    }
}

/// Procedurally generated n x m map: depots at the four corners, floor(n*m/25)
/// short vertical wall segments placed by the seeded procedure. Segments that
/// would disconnect the grid are skipped, so every generated map stays
/// fully reachable.
inline GridConfig make_grid_config(int rows, int cols, std::uint64_t wall_seed) {
    GridConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.depots = {{0, 0}, {0, cols - 1}, {rows - 1, 0}, {rows - 1, cols - 1}};
    {
        std::set<Cell> uniq(cfg.depots.begin(), cfg.depots.end());
        if (uniq.size() != cfg.depots.size())
            throw ConfigError("grid: corner depots collide; grid too small for generated map");
    }
    const int segments = (rows * cols) / 25;
    Rng rng(wall_seed);
    for (int i = 0; i < segments && cols >= 2; ++i) {
        const int r = rng.uniform_index(rows);
        const int c = rng.uniform_index(cols - 1);
        const int len = 1 + rng.uniform_index(2);
        std::vector<Wall> seg;
        for (int k = 0; k < len && r + k < rows; ++k)
            seg.emplace_back(Cell{r + k, c}, Cell{r + k, c + 1});
        for (const Wall& w : seg) cfg.walls.insert(w);
        if (!detail::grid_connected(cfg))
            for (const Wall& w : seg) cfg.walls.erase(w);
    }
    validate(cfg);
    return cfg;
}

/// Plain-text map format: "rows cols", then "depot r c" and "wall r1 c1 r2 c2" lines.
inline GridConfig load_map(std::istream& in) {
    GridConfig cfg;
    cfg.depots.clear();
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("map: empty file");
    {
        std::istringstream head(line);
        if (!(head >> cfg.rows >> cfg.cols)) throw ConfigError("map: first line must be 'rows cols'");
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "depot") {
            Cell c;
            if (!(ls >> c.row >> c.col)) throw ConfigError("map: bad depot line: " + line);
            cfg.depots.push_back(c);
        } else if (kind == "wall") {
            Cell a, b;
            if (!(ls >> a.row >> a.col >> b.row >> b.col)) throw ConfigError("map: bad wall line: " + line);
            cfg.walls.insert(Wall(a, b));
        } else {
            throw ConfigError("map: unknown directive: " + kind);
        }
    }
    validate(cfg);
    return cfg;
}

inline GridConfig load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("map: cannot open " + path);
    return load_map(in);
}

inline void save_map(const GridConfig& cfg, std::ostream& out) {
    out << cfg.rows << ' ' << cfg.cols << '\n';
    for (const Cell& d : cfg.depots) out << "depot " << d.row << ' ' << d.col << '\n';
    for (const Wall& w : cfg.walls)
        out << "wall " << w.a.row << ' ' << w.a.col << ' ' << w.b.row << ' ' << w.b.col << '\n';
}

/// Pickup-and-delivery grid environment. Immutable config plus pure transition
/// functions on explicit state values; safe to share across concurrent runs.
class GridEnv {
public:
    using State = EnvState;
    static constexpr int kActions = 6;

    explicit GridEnv(GridConfig cfg) : cfg_(std::move(cfg)) { validate(cfg_); }

    const GridConfig& config() const { return cfg_; }
    int action_count() const { return kActions; }
    int max_steps() const { return cfg_.max_steps(); }

    /// Uniform taxi cell; passenger and destination uniform over distinct depots.
    State reset(Rng& rng) const {
        State s;
        const int cell = rng.uniform_index(cfg_.n_cells());
        s.taxi_row = cell / cfg_.cols;
        s.taxi_col = cell % cfg_.cols;
        s.passenger_location = rng.uniform_index(cfg_.n_depots());
        int dest = rng.uniform_index(cfg_.n_depots() - 1);
        if (dest >= s.passenger_location) ++dest;
        s.destination = dest;
        s.done = false;
        return s;
    }

    Step<State> step(const State& s, GridAction action) const {
        if (s.done) throw ContractError("grid_step: episode already finished");
        Step<State> out;
        out.next = s;
        switch (action) {
            case GridAction::MoveNorth: apply_move(out, s, -1, 0); break;
            case GridAction::MoveSouth: apply_move(out, s, 1, 0); break;
            case GridAction::MoveEast: apply_move(out, s, 0, 1); break;
            case GridAction::MoveWest: apply_move(out, s, 0, -1); break;
            case GridAction::Pickup: {
                if (s.passenger_location != kInTaxi &&
                    Cell{s.taxi_row, s.taxi_col} == cfg_.depots[s.passenger_location]) {
                    out.next.passenger_location = kInTaxi;
                    out.reward = cfg_.reward_step;
                    out.subgoal = SubGoal::PaxInTaxi;
                } else {
                    out.reward = cfg_.reward_illegal;
                }
                break;
            }
            case GridAction::Dropoff: {
                if (s.passenger_location == kInTaxi &&
                    Cell{s.taxi_row, s.taxi_col} == cfg_.depots[s.destination]) {
                    out.next.passenger_location = s.destination;
                    out.next.done = true;
                    out.reward = cfg_.reward_dropoff;
                    out.done = true;
                    out.subgoal = SubGoal::Dropoff;
                } else {
                    out.reward = cfg_.reward_illegal;
                }
                break;
            }
        }
        return out;
    }

    Step<State> step(const State& s, int action) const { return step(s, static_cast<GridAction>(action)); }

    bool is_legal(const State&, int action) const { return action >= 0 && action < kActions; }

    ActionNode action_node(int action) const {
        switch (static_cast<GridAction>(action)) {
            case GridAction::Pickup: return ActionNode::Pickup;
            case GridAction::Dropoff: return ActionNode::Dropoff;
            default: return ActionNode::Move;
        }
    }

    std::string action_name(int action) const { return to_string(static_cast<GridAction>(action)); }

    CoreFeatures core_features(const State& s) const {
        CoreFeatures f;
        f.aboard = s.passenger_location == kInTaxi;
        f.on_pax_loc = !f.aboard && Cell{s.taxi_row, s.taxi_col} == cfg_.depots[s.passenger_location];
        f.on_dest = Cell{s.taxi_row, s.taxi_col} == cfg_.depots[s.destination];
        return f;
    }

    /// Mixed-radix state index, bijective over cells x (depots+1) x depots.
    std::int64_t encode(const State& s) const {
        const int pax = s.passenger_location == kInTaxi ? cfg_.n_depots() : s.passenger_location;
        const std::int64_t cell = static_cast<std::int64_t>(s.taxi_row) * cfg_.cols + s.taxi_col;
        return (cell * (cfg_.n_depots() + 1) + pax) * cfg_.n_depots() + s.destination;
    }

    State decode(std::int64_t code) const {
        State s;
        s.destination = static_cast<int>(code % cfg_.n_depots());
        code /= cfg_.n_depots();
        const int pax = static_cast<int>(code % (cfg_.n_depots() + 1));
        s.passenger_location = pax == cfg_.n_depots() ? kInTaxi : pax;
        code /= cfg_.n_depots() + 1;
        s.taxi_row = static_cast<int>(code / cfg_.cols);
        s.taxi_col = static_cast<int>(code % cfg_.cols);
        return s;
    }

    std::int64_t state_key(const State& s) const { return encode(s); }
    std::int64_t state_space_size() const {
        return static_cast<std::int64_t>(cfg_.n_cells()) * (cfg_.n_depots() + 1) * cfg_.n_depots();
    }

    /// All distinct initial states the reset contract can produce.
    std::vector<State> enumerate_initial_states() const {
        std::vector<State> out;
        for (int r = 0; r < cfg_.rows; ++r)
            for (int c = 0; c < cfg_.cols; ++c)
                for (int p = 0; p < cfg_.n_depots(); ++p)
                    for (int d = 0; d < cfg_.n_depots(); ++d) {
                        if (p == d) continue;
                        out.push_back(State{r, c, p, d, false});
                    }
        return out;
    }

    /// BFS closure of the initial states under transitions; counts every state
    /// reachable during episodes including post-dropoff terminals (404 on the
    /// default map).
    std::vector<State> enumerate_reachable_states() const {
        std::set<std::int64_t> seen;
        std::deque<State> queue;
        std::vector<State> out;
        for (const State& s : enumerate_initial_states())
            if (seen.insert(encode(s)).second) {
                queue.push_back(s);
                out.push_back(s);
            }
        while (!queue.empty()) {
            const State s = queue.front();
            queue.pop_front();
            if (s.done) continue;
            for (int a = 0; a < kActions; ++a) {
                const State n = step(s, a).next;
                if (seen.insert(encode(n)).second) {
                    queue.push_back(n);
                    out.push_back(n);
                }
            }
        }
        return out;
    }

private:
    void apply_move(Step<State>& out, const State& s, int dr, int dc) const {
        const Cell from{s.taxi_row, s.taxi_col};
        const Cell to{s.taxi_row + dr, s.taxi_col + dc};
        out.reward = cfg_.reward_step;
        const bool inside = to.row >= 0 && to.row < cfg_.rows && to.col >= 0 && to.col < cfg_.cols;
        if (inside && !cfg_.walls.count(Wall(from, to))) {
            out.next.taxi_row = to.row;
            out.next.taxi_col = to.col;
            out.distance = 1.0;
        }
    }

    GridConfig cfg_;
};

}  // namespace causalq
