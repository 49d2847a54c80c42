#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causalq/common.hpp"
#include "causalq/env_common.hpp"
#include "causalq/rng.hpp"

namespace causalq {

/// Road network: intersections with coordinates, streets with positive lengths.
struct RoadGraph {
    struct Node {
        int id = 0;
        double x = 0.0;
        double y = 0.0;
    };
    struct Edge {
        int u = 0;
        int v = 0;
        double length = 1.0;
        bool directed = false;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;

    int n() const { return static_cast<int>(nodes.size()); }
};

struct Neighbor {
    int target = 0;
    double length = 0.0;
};

namespace detail {

inline std::vector<std::vector<Neighbor>> build_adjacency(const RoadGraph& g) {
    std::vector<std::vector<Neighbor>> adj(g.nodes.size());
    for (const RoadGraph::Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.length});
        if (!e.directed) adj[e.v].push_back({e.u, e.length});
    }
    for (auto& nbrs : adj)
        std::sort(nbrs.begin(), nbrs.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.target != b.target ? a.target < b.target : a.length < b.length;
        });
    return adj;
}

}  // namespace detail

inline void validate(const RoadGraph& g) {
    const int n = g.n();
    if (n < 2) throw ConfigError("graph: need at least 2 nodes");
    for (int i = 0; i < n; ++i)
        if (g.nodes[i].id != i) throw ConfigError("graph: node ids must be dense 0..n-1 in order");
    for (const RoadGraph::Edge& e : g.edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) throw ConfigError("graph: edge endpoint out of range");
        if (!(e.length > 0.0)) throw ConfigError("graph: edge length must be positive");
    }
    // weak connectivity over the undirected skeleton
    std::vector<std::vector<int>> undirected(n);
    for (const RoadGraph::Edge& e : g.edges) {
        undirected[e.u].push_back(e.v);
        undirected[e.v].push_back(e.u);
    }
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int visited = 1;
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        for (int t : undirected[cur])
            if (!seen[t]) {
                seen[t] = 1;
                ++visited;
                queue.push_back(t);
            }
    }
    if (visited != n) throw ConfigError("graph: not connected");
}

/// Text format: "node <id> <x> <y>" lines, then "edge <u> <v> <length> [directed]".
inline RoadGraph load_graph(std::istream& in) {
    RoadGraph g;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "node") {
            RoadGraph::Node n;
            if (!(ls >> n.id >> n.x >> n.y)) throw ConfigError("graph: bad node line: " + line);
            g.nodes.push_back(n);
        } else if (kind == "edge") {
            RoadGraph::Edge e;
            if (!(ls >> e.u >> e.v >> e.length)) throw ConfigError("graph: bad edge line: " + line);
            std::string flag;
            if (ls >> flag) e.directed = flag == "directed";
            g.edges.push_back(e);
        } else {
            throw ConfigError("graph: unknown directive: " + kind);
        }
    }
    validate(g);
    return g;
}

inline RoadGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("graph: cannot open " + path);
    return load_graph(in);
}

inline void save_graph(const RoadGraph& g, std::ostream& out) {
    for (const RoadGraph::Node& n : g.nodes)
        out << "node " << n.id << ' ' << fmt_g17(n.x) << ' ' << fmt_g17(n.y) << '\n';
    for (const RoadGraph::Edge& e : g.edges) {
        out << "edge " << e.u << ' ' << e.v << ' ' << fmt_g17(e.length);
        if (e.directed) out << " directed";
        out << '\n';
    }
}

/// Seeded planar-like stand-in for a street network: nodes on a square lattice
/// with perturbed coordinates, lattice adjacency, lengths = Euclidean distance.
inline RoadGraph make_synthetic_graph(int n_nodes, std::uint64_t seed, double jitter = 0.12) {
    if (n_nodes < 2) throw ConfigError("graph: need at least 2 nodes");
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_nodes))));
    Rng rng(seed);
    RoadGraph g;
    auto index_of = [&](int r, int c) { return r * side + c; };
    for (int i = 0; i < n_nodes; ++i) {
        const int r = i / side, c = i % side;
        RoadGraph::Node n;
        n.id = i;
        n.x = c + rng.uniform_real(-jitter, jitter);
        n.y = r + rng.uniform_real(-jitter, jitter);
        g.nodes.push_back(n);
    }
    auto euclid = [&](int a, int b) {
        const double dx = g.nodes[a].x - g.nodes[b].x;
        const double dy = g.nodes[a].y - g.nodes[b].y;
        return std::sqrt(dx * dx + dy * dy);
    };
    for (int i = 0; i < n_nodes; ++i) {
        const int r = i / side, c = i % side;
        if (c + 1 < side && index_of(r, c + 1) < n_nodes)
            g.edges.push_back({i, index_of(r, c + 1), euclid(i, index_of(r, c + 1)), false});
        if (r + 1 < side && index_of(r + 1, c) < n_nodes)
            g.edges.push_back({i, index_of(r + 1, c), euclid(i, index_of(r + 1, c)), false});
    }
    validate(g);
    return g;
}

struct Trip {
    int pickup = 0;
    int dropoff = 0;
};

/// Trips file: CSV with header "pickup,dropoff".
inline std::vector<Trip> load_trips(std::istream& in) {
    std::vector<Trip> trips;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("trips: empty file");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("trips: bad row: " + line);
        Trip t;
        t.pickup = std::stoi(line.substr(0, comma));
        t.dropoff = std::stoi(line.substr(comma + 1));
        trips.push_back(t);
    }
    return trips;
}

inline std::vector<Trip> load_trips_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("trips: cannot open " + path);
    return load_trips(in);
}

inline void save_trips(const std::vector<Trip>& trips, std::ostream& out) {
    out << "pickup,dropoff\n";
    for (const Trip& t : trips) out << t.pickup << ',' << t.dropoff << '\n';
}

struct GraphConfig {
    int reward_step = -1;        // penalty for an out-of-range move index
    int reward_dropoff = 20;
    int reward_illegal = -10;
    double step_cost_scale = 1.0;  // movement reward = -length * scale
    int max_steps_per_episode = 0; // 0 -> default 10*n
};

struct GraphEnvState {
    int current_node = 0;
    bool aboard = false;  // phase: false = ToPickup, true = ToDropoff
    int pickup_node = 0;
    int dropoff_node = 0;
    bool done = false;
    friend bool operator==(const GraphEnvState&, const GraphEnvState&) = default;
};

/// Graph pickup-and-delivery environment. Action space is fixed per graph:
/// indices 0..max_outdeg-1 are MoveToNeighbor(k) over outgoing edges sorted by
/// target id, then Pickup, then Dropoff.
class GraphEnv {
public:
    using State = GraphEnvState;

    GraphEnv(RoadGraph graph, GraphConfig cfg = {})
        : graph_(std::move(graph)), cfg_(cfg), adj_(detail::build_adjacency(graph_)) {
        validate(graph_);
        max_outdeg_ = 0;
        for (const auto& nbrs : adj_) max_outdeg_ = std::max(max_outdeg_, static_cast<int>(nbrs.size()));
    }

    const RoadGraph& graph() const { return graph_; }
    const GraphConfig& config() const { return cfg_; }
    const std::vector<Neighbor>& neighbors(int node) const { return adj_[node]; }

    int action_count() const { return max_outdeg_ + 2; }
    int pickup_action() const { return max_outdeg_; }
    int dropoff_action() const { return max_outdeg_ + 1; }
    int max_steps() const {
        return cfg_.max_steps_per_episode > 0 ? cfg_.max_steps_per_episode : 10 * graph_.n();
    }

    /// Training reset: trip and start node uniform at random.
    State reset(Rng& rng) const {
        State s;
        s.pickup_node = rng.uniform_index(graph_.n());
        int drop = rng.uniform_index(graph_.n() - 1);
        if (drop >= s.pickup_node) ++drop;
        s.dropoff_node = drop;
        s.current_node = rng.uniform_index(graph_.n());
        return s;
    }

    /// Evaluation reset: dispatch at the trip's pickup node.
    State reset(const Trip& trip) const {
        if (trip.pickup == trip.dropoff) throw ConfigError("graph_reset: pickup equals dropoff");
        if (trip.pickup < 0 || trip.pickup >= graph_.n() || trip.dropoff < 0 || trip.dropoff >= graph_.n())
            throw ConfigError("graph_reset: trip node out of range");
        State s;
        s.pickup_node = trip.pickup;
        s.dropoff_node = trip.dropoff;
        s.current_node = trip.pickup;
        return s;
    }

    Step<State> step(const State& s, int action) const {
        if (s.done) throw ContractError("graph_step: episode already finished");
        Step<State> out;
        out.next = s;
        if (action == pickup_action()) {
            if (!s.aboard && s.current_node == s.pickup_node) {
                out.next.aboard = true;
                out.reward = cfg_.reward_step;
                out.subgoal = SubGoal::PaxInTaxi;
            } else {
                out.reward = cfg_.reward_illegal;
            }
        } else if (action == dropoff_action()) {
            if (s.aboard && s.current_node == s.dropoff_node) {
                out.next.aboard = false;  // delivered
                out.next.done = true;
                out.done = true;
                out.reward = cfg_.reward_dropoff;
                out.subgoal = SubGoal::Dropoff;
            } else {
                out.reward = cfg_.reward_illegal;
            }
        } else {
            const auto& nbrs = adj_[s.current_node];
            if (action < 0 || action >= static_cast<int>(nbrs.size())) {
                out.reward = cfg_.reward_step;  // out-of-range move: no-op
            } else {
                out.next.current_node = nbrs[action].target;
                out.reward = -nbrs[action].length * cfg_.step_cost_scale;
                out.distance = nbrs[action].length;
            }
        }
        return out;
    }

    bool is_legal(const State& s, int action) const {
        if (action == pickup_action() || action == dropoff_action()) return true;
        return action >= 0 && action < static_cast<int>(adj_[s.current_node].size());
    }

    ActionNode action_node(int action) const {
        if (action == pickup_action()) return ActionNode::Pickup;
        if (action == dropoff_action()) return ActionNode::Dropoff;
        return ActionNode::Move;
    }

    std::string action_name(int action) const {
        if (action == pickup_action()) return "Pickup";
        if (action == dropoff_action()) return "Dropoff";
        return "Move(" + std::to_string(action) + ")";
    }

    CoreFeatures core_features(const State& s) const {
        CoreFeatures f;
        f.aboard = s.aboard;
        f.on_pax_loc = !s.aboard && s.current_node == s.pickup_node;
        f.on_dest = s.current_node == s.dropoff_node;
        return f;
    }

    /// Q key: (current, target) with target = pickup until boarding, then
    /// dropoff. One n^2 table serves every trip on the graph.
    std::int64_t state_key(const State& s) const {
        const int target = s.aboard ? s.dropoff_node : s.pickup_node;
        return static_cast<std::int64_t>(s.current_node) * graph_.n() + target;
    }

    std::int64_t state_space_size() const {
        return static_cast<std::int64_t>(graph_.n()) * graph_.n();
    }

private:
    RoadGraph graph_;
    GraphConfig cfg_;
    std::vector<std::vector<Neighbor>> adj_;
    int max_outdeg_ = 0;
};

}  // namespace causalq
