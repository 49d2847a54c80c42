#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "causalq/graph_env.hpp"
#include "causalq/grid_env.hpp"

namespace causalq {

/// Adjacency view shared by the search routines: adj[u] = sorted (target, length).
using Adjacency = std::vector<std::vector<Neighbor>>;

inline Adjacency graph_adjacency(const RoadGraph& g) { return detail::build_adjacency(g); }

/// Unit-cost adjacency of a walled grid, cells indexed row-major.
inline Adjacency grid_adjacency(const GridConfig& cfg) {
    Adjacency adj(cfg.n_cells());
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, 1, -1};
    for (int r = 0; r < cfg.rows; ++r)
        for (int c = 0; c < cfg.cols; ++c) {
            const int u = r * cfg.cols + c;
            for (int k = 0; k < 4; ++k) {
                const Cell to{r + dr[k], c + dc[k]};
                if (to.row < 0 || to.row >= cfg.rows || to.col < 0 || to.col >= cfg.cols) continue;
                if (cfg.walls.count(Wall(Cell{r, c}, to))) continue;
                adj[u].push_back({to.row * cfg.cols + to.col, 1.0});
            }
            std::sort(adj[u].begin(), adj[u].end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.target < b.target; });
        }
    return adj;
}

struct PathResult {
    bool reachable = false;
    double distance = 0.0;
    std::vector<int> path;  // source..target inclusive when reachable
    int expanded = 0;       // settled nodes
    double elapsed_us = 0.0;
};

namespace detail {

struct QueueEntry {
    double priority;
    int node;
    // min-heap; ties resolved by node id for run-to-run identical paths
    bool operator>(const QueueEntry& o) const {
        if (priority != o.priority) return priority > o.priority;
        return node > o.node;
    }
};

template <class Heuristic>
PathResult best_first(const Adjacency& adj, int source, int target, Heuristic h) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = static_cast<int>(adj.size());
    if (source < 0 || source >= n || target < 0 || target >= n)
        throw ConfigError("shortest_path: node out of range");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<int> prev(n, -1);
    std::vector<char> settled(n, 0);
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> open;
    dist[source] = 0.0;
    open.push({h(source), source});
    PathResult res;
    while (!open.empty()) {
        const QueueEntry top = open.top();
        open.pop();
        const int u = top.node;
        if (settled[u]) continue;  // stale entry (lazy decrease-key)
        settled[u] = 1;
        ++res.expanded;
        if (u == target) break;
        for (const Neighbor& nb : adj[u]) {
            if (settled[nb.target]) continue;
            const double cand = dist[u] + nb.length;
            if (cand < dist[nb.target]) {
                dist[nb.target] = cand;
                prev[nb.target] = u;
                open.push({cand + h(nb.target), nb.target});
            }
        }
    }
    res.elapsed_us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    if (dist[target] == kInf) return res;
    res.reachable = true;
    res.distance = dist[target];
    for (int v = target; v != -1; v = prev[v]) res.path.push_back(v);
    std::reverse(res.path.begin(), res.path.end());
    return res;
}

}  // namespace detail

/// Exact shortest path; nonnegative weights. Unreachable targets yield an
/// explicit unreachable result rather than an exception.
inline PathResult dijkstra(const Adjacency& adj, int source, int target) {
    return detail::best_first(adj, source, target, [](int) { return 0.0; });
}

/// A* with a caller-supplied admissible heuristic.
template <class Heuristic>
PathResult a_star(const Adjacency& adj, int source, int target, Heuristic h) {
    return detail::best_first(adj, source, target, h);
}

/// A* on a grid with the Manhattan heuristic scaled by the minimum edge cost.
inline PathResult a_star_grid(const GridConfig& cfg, const Adjacency& adj, int source, int target,
                              double min_edge_cost = 1.0) {
    const int tr = target / cfg.cols, tc = target % cfg.cols;
    return detail::best_first(adj, source, target, [=, &cfg](int v) {
        const int r = v / cfg.cols, c = v % cfg.cols;
        return min_edge_cost * (std::abs(r - tr) + std::abs(c - tc));
    });
}

/// A* on a road graph: Euclidean distance conservatively rescaled by the
/// smallest length-to-gap ratio so it never overestimates.
inline PathResult a_star_graph(const RoadGraph& g, const Adjacency& adj, int source, int target) {
    double scale = std::numeric_limits<double>::infinity();
    auto euclid = [&](int a, int b) {
        const double dx = g.nodes[a].x - g.nodes[b].x;
        const double dy = g.nodes[a].y - g.nodes[b].y;
        return std::sqrt(dx * dx + dy * dy);
    };
    for (int u = 0; u < g.n(); ++u)
        for (const Neighbor& nb : adj[u]) {
            const double gap = euclid(u, nb.target);
            if (gap > 0.0) scale = std::min(scale, nb.length / gap);
        }
    if (!std::isfinite(scale)) scale = 0.0;
    return detail::best_first(adj, source, target,
                              [=, &g](int v) { return scale * euclid(v, target); });
}

/// Least-cost pickup-then-dropoff tour: dist(start,pickup) + dist(pickup,dropoff).
inline PathResult optimal_tour(const Adjacency& adj, int start, int pickup, int dropoff) {
    PathResult leg1 = dijkstra(adj, start, pickup);
    if (!leg1.reachable) return leg1;
    PathResult leg2 = dijkstra(adj, pickup, dropoff);
    if (!leg2.reachable) {
        leg2.expanded += leg1.expanded;
        return leg2;
    }
    PathResult tour;
    tour.reachable = true;
    tour.distance = leg1.distance + leg2.distance;
    tour.expanded = leg1.expanded + leg2.expanded;
    tour.elapsed_us = leg1.elapsed_us + leg2.elapsed_us;
    tour.path = leg1.path;
    tour.path.insert(tour.path.end(), leg2.path.begin() + 1, leg2.path.end());
    return tour;
}

/// Optimal episode reward on a grid config: every pre-terminal step (moves and
/// the pickup) costs reward_step, the terminal dropoff pays reward_dropoff.
inline double optimal_grid_episode_reward(const GridConfig& cfg, const Adjacency& adj,
                                          const EnvState& start) {
    const int cell = start.taxi_row * cfg.cols + start.taxi_col;
    const Cell pax = cfg.depots[start.passenger_location];
    const Cell dest = cfg.depots[start.destination];
    const PathResult tour = optimal_tour(adj, cell, pax.row * cfg.cols + pax.col,
                                         dest.row * cfg.cols + dest.col);
    if (!tour.reachable) throw ConfigError("optimal_grid_episode_reward: unreachable tour");
    return cfg.reward_dropoff + cfg.reward_step * (tour.distance + 1.0);
}

}  // namespace causalq
