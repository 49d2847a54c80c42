#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "causalq/common.hpp"
#include "causalq/features.hpp"
#include "causalq/matexp.hpp"

namespace causalq {

struct DagNode {
    std::string name;
    NodeRole role = NodeRole::State;
    friend bool operator==(const DagNode&, const DagNode&) = default;
};

struct DagEdge {
    int from = 0;
    int to = 0;
    double weight = 0.0;
    friend bool operator==(const DagEdge&, const DagEdge&) = default;
};

/// Constraints a domain expert can impose on discovery: role-to-role parent
/// prohibitions, explicit forbidden edges, and nodes excluded entirely.
struct TabuSpec {
    std::vector<std::pair<NodeRole, NodeRole>> forbidden_parent_roles;
    std::vector<std::pair<std::string, std::string>> forbidden_edges;
    std::vector<std::string> forbidden_nodes;

    bool empty() const {
        return forbidden_parent_roles.empty() && forbidden_edges.empty() && forbidden_nodes.empty();
    }
};

/// The role-based constraint set used throughout the pipeline: actions are
/// exogenous (nothing points into them, including other actions), goal nodes
/// are sinks (nothing leaves them). Goal-to-goal edges are forbidden in both
/// directions: the goal indicators are simultaneous post-transition events
/// whose deterministic complementarity would otherwise shadow the action
/// parents the inference step depends on.
inline TabuSpec role_tabu() {
    TabuSpec t;
    t.forbidden_parent_roles = {
        {NodeRole::State, NodeRole::Action},  {NodeRole::Action, NodeRole::Action},
        {NodeRole::Goal, NodeRole::Action},   {NodeRole::Action, NodeRole::State},
        {NodeRole::Goal, NodeRole::State},    {NodeRole::Goal, NodeRole::Goal},
    };
    return t;
}

struct DiscoveryParams {
    double l1_penalty = 0.05;
    double threshold = 0.3;
    int max_outer_iterations = 100;
    double h_tolerance = 1e-8;
    double rho_init = 1.0;
    double rho_max = 1e16;
    int max_inner_iterations = 4000;
    double inner_tolerance = 1e-8;
};

/// Weighted DAG over the dataset's feature nodes.
struct CausalDag {
    std::vector<DagNode> nodes;
    Eigen::MatrixXd weights;  // weights(i, j) = edge i -> j
    std::vector<DagEdge> edges;
    TabuSpec tabu;
    DiscoveryParams params;

    int n() const { return static_cast<int>(nodes.size()); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < n(); ++i)
            if (nodes[i].name == name) return i;
        return -1;
    }

    bool has_edge(const std::string& from, const std::string& to) const {
        const int f = index_of(from), t = index_of(to);
        for (const DagEdge& e : edges)
            if (e.from == f && e.to == t) return true;
        return false;
    }

    std::vector<int> parents_of(int node) const {
        std::vector<int> out;
        for (const DagEdge& e : edges)
            if (e.to == node) out.push_back(e.from);
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

/// allowed(i, j): may the optimizer place an edge i -> j?
inline Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> tabu_mask(
    const std::vector<DagNode>& nodes, const TabuSpec& tabu) {
    const int d = static_cast<int>(nodes.size());
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> allowed(d, d);
    allowed.setConstant(true);
    for (int i = 0; i < d; ++i) allowed(i, i) = false;
    for (const auto& [pr, cr] : tabu.forbidden_parent_roles)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (nodes[i].role == pr && nodes[j].role == cr) allowed(i, j) = false;
    auto index_of = [&](const std::string& name) {
        for (int i = 0; i < d; ++i)
            if (nodes[i].name == name) return i;
        throw ConfigError("tabu: unknown node name: " + name);
    };
    for (const auto& [from, to] : tabu.forbidden_edges) allowed(index_of(from), index_of(to)) = false;
    for (const std::string& name : tabu.forbidden_nodes) {
        const int k = index_of(name);
        allowed.row(k).setConstant(false);
        allowed.col(k).setConstant(false);
    }
    return allowed;
}

inline bool topological_order(int d, const std::vector<DagEdge>& edges, std::vector<int>* order) {
    std::vector<int> indeg(d, 0);
    std::vector<std::vector<int>> out(d);
    for (const DagEdge& e : edges) {
        out[e.from].push_back(e.to);
        ++indeg[e.to];
    }
    std::vector<int> ready;
    for (int i = 0; i < d; ++i)
        if (indeg[i] == 0) ready.push_back(i);
    std::vector<int> result;
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        const int v = ready.back();
        ready.pop_back();
        result.push_back(v);
        for (int t : out[v])
            if (--indeg[t] == 0) ready.push_back(t);
    }
    if (order) *order = result;
    return static_cast<int>(result.size()) == d;
}

/// Finds one directed cycle (as a list of edge indices) or returns empty.
inline std::vector<int> find_cycle(int d, const std::vector<DagEdge>& edges) {
    std::vector<std::vector<std::pair<int, int>>> out(d);  // (target, edge idx)
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
        out[edges[i].from].push_back({edges[i].to, i});
    std::vector<int> color(d, 0);  // 0 white, 1 gray, 2 black
    std::vector<std::pair<int, int>> stack_edge(d, {-1, -1});
    std::vector<int> cycle;
    std::vector<int> path;
    auto dfs = [&](auto&& self, int v) -> int {
        color[v] = 1;
        path.push_back(v);
        for (const auto& [t, ei] : out[v]) {
            if (color[t] == 1) {
                // unwind path from t to v collecting edges
                std::vector<int> nodes_on;
                for (auto it = std::find(path.begin(), path.end(), t); it != path.end(); ++it)
                    nodes_on.push_back(*it);
                nodes_on.push_back(t);
                for (size_t k = 0; k + 1 < nodes_on.size(); ++k)
                    for (int j = 0; j < static_cast<int>(edges.size()); ++j)
                        if (edges[j].from == nodes_on[k] && edges[j].to == nodes_on[k + 1]) {
                            cycle.push_back(j);
                            break;
                        }
                return 1;
            }
            if (color[t] == 0 && self(self, t)) return 1;
        }
        color[v] = 2;
        path.pop_back();
        return 0;
    };
    for (int v = 0; v < d; ++v)
        if (color[v] == 0 && dfs(dfs, v)) break;
    return cycle;
}

}  // namespace detail

inline double notears_h(const Eigen::MatrixXd& w) {
    return expm((w.array() * w.array()).matrix()).trace() - static_cast<double>(w.rows());
}

/// Pins every tabu-forbidden entry of a weight matrix to exactly zero.
inline Eigen::MatrixXd apply_tabu(const Eigen::MatrixXd& w, const TabuSpec& tabu,
                                  const std::vector<DagNode>& nodes) {
    if (w.rows() != static_cast<Eigen::Index>(nodes.size()) || w.rows() != w.cols())
        throw ConfigError("apply_tabu: weight matrix does not match schema");
    const auto allowed = detail::tabu_mask(nodes, tabu);
    Eigen::MatrixXd out = w;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            if (i != j && !allowed(i, j)) out(i, j) = 0.0;
    return out;
}

struct OuterIterRecord {
    int iteration = 0;
    double rho = 0.0;
    double alpha = 0.0;
    double h = 0.0;
    double loss = 0.0;
    double objective_start = 0.0;  // penalized objective before the inner solve
    double objective_end = 0.0;    // and after; non-increasing per accepted iteration
};

struct DiscoveryReport {
    CausalDag dag;
    std::vector<std::string> warnings;
    std::vector<OuterIterRecord> trace;
    double final_h = 0.0;
};

namespace detail {

struct NotearsProblem {
    Eigen::MatrixXd cov;  // X^T X / n on centered columns
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> allowed;
    double lambda = 0.0;

    double loss(const Eigen::MatrixXd& w) const {
        const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(w.rows(), w.cols()) - w;
        return 0.5 * (m.transpose() * cov * m).trace();
    }

    /// Smooth part of the augmented Lagrangian; one matrix exponential per call.
    double smooth(const Eigen::MatrixXd& w, double rho, double alpha,
                  Eigen::MatrixXd* grad = nullptr) const {
        const Eigen::MatrixXd e = expm((w.array() * w.array()).matrix());
        const double h = e.trace() - static_cast<double>(w.rows());
        if (grad) {
            const Eigen::MatrixXd h_grad = (e.transpose().array() * (2.0 * w.array())).matrix();
            *grad = cov * w - cov + (rho * h + alpha) * h_grad;
        }
        return loss(w) + 0.5 * rho * h * h + alpha * h;
    }

    double penalized_from_smooth(double smooth_value, const Eigen::MatrixXd& w) const {
        return smooth_value + lambda * w.cwiseAbs().sum();
    }

    Eigen::MatrixXd prox(Eigen::MatrixXd w, double step) const {
        const double t = lambda * step;
        for (int i = 0; i < w.rows(); ++i)
            for (int j = 0; j < w.cols(); ++j) {
                if (!allowed(i, j)) {
                    w(i, j) = 0.0;
                } else if (w(i, j) > t) {
                    w(i, j) -= t;
                } else if (w(i, j) < -t) {
                    w(i, j) += t;
                } else {
                    w(i, j) = 0.0;
                }
            }
        return w;
    }
};

/// Proximal-gradient (FISTA) inner solve of the augmented-Lagrangian
/// subproblem at fixed (rho, alpha). Backtracking line search; momentum
/// restarts when the objective rises; returns the best iterate seen.
inline Eigen::MatrixXd fista_solve(const NotearsProblem& prob, Eigen::MatrixXd w, double rho,
                                   double alpha, int max_iters, double tol) {
    Eigen::MatrixXd y = w;
    Eigen::MatrixXd best = w;
    double best_obj = prob.penalized_from_smooth(prob.smooth(w, rho, alpha), w);
    double step = 1.0;
    double momentum = 1.0;
    int stall = 0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::MatrixXd grad;
        const double gy = prob.smooth(y, rho, alpha, &grad);
        Eigen::MatrixXd w_next;
        double f_next = 0.0;
        for (;;) {
            w_next = prob.prox(y - step * grad, step);
            const Eigen::MatrixXd diff = w_next - y;
            const double quad = gy + grad.cwiseProduct(diff).sum() + diff.squaredNorm() / (2.0 * step);
            f_next = prob.smooth(w_next, rho, alpha);
            if (f_next <= quad + 1e-12 || step < 1e-12) break;
            step *= 0.5;
        }
        const double obj_next = prob.penalized_from_smooth(f_next, w_next);
        const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        Eigen::MatrixXd y_next = w_next + ((momentum - 1.0) / m_next) * (w_next - w);
        if (obj_next > best_obj) {
            y_next = w_next;  // momentum restart
            momentum = 1.0;
        } else {
            momentum = m_next;
        }
        if (obj_next < best_obj - 1e-14 * std::max(1.0, std::abs(best_obj))) {
            best_obj = obj_next;
            best = w_next;
            stall = 0;
        } else if (++stall > 40) {
            break;
        }
        const double delta = (w_next - w).cwiseAbs().maxCoeff();
        w = std::move(w_next);
        y = std::move(y_next);
        step = std::min(step * 1.5, 1e6);
        if (delta < tol && it > 2) break;
    }
    return best;
}

}  // namespace detail

/// Continuous-optimization structure discovery (least-squares linear model,
/// L1 penalty, smooth acyclicity constraint h(W)=tr(exp(W∘W))−d solved by
/// augmented-Lagrangian outer iterations). Columns are mean-centered before
/// fitting; tabu-forbidden entries stay pinned at zero throughout. Edges with
/// |weight| < threshold are pruned, and any cycle that survives thresholding
/// is repaired by deleting its smallest-weight edge (with a warning).
inline DiscoveryReport discover_structure_report(Eigen::MatrixXd x, std::vector<DagNode> nodes,
                                                 const TabuSpec& tabu,
                                                 const DiscoveryParams& params = {}) {
    const int d = static_cast<int>(nodes.size());
    const std::int64_t n = x.rows();
    if (x.cols() != d) throw ConfigError("discover_structure: column/node count mismatch");
    if (n < 10 * d)
        throw ConfigError("discover_structure: need at least 10*d rows, have " + std::to_string(n));

    DiscoveryReport report;
    auto allowed = detail::tabu_mask(nodes, tabu);
    for (int j = 0; j < d; ++j) {
        const double mean = x.col(j).mean();
        x.col(j).array() -= mean;
        if (x.col(j).cwiseAbs().maxCoeff() == 0.0) {
            report.warnings.push_back("constant column isolated: " + nodes[j].name);
            allowed.row(j).setConstant(false);
            allowed.col(j).setConstant(false);
        }
    }

    detail::NotearsProblem prob;
    prob.cov = (x.transpose() * x) / static_cast<double>(n);
    prob.allowed = allowed;
    prob.lambda = params.l1_penalty;

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
    double rho = params.rho_init;
    double alpha = 0.0;
    double h_val = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < params.max_outer_iterations; ++outer) {
        OuterIterRecord rec;
        rec.iteration = outer;
        Eigen::MatrixXd w_new = w;
        double h_new = h_val;
        while (true) {
            rec.objective_start = prob.penalized_from_smooth(prob.smooth(w, rho, alpha), w);
            w_new = detail::fista_solve(prob, w, rho, alpha, params.max_inner_iterations,
                                        params.inner_tolerance);
            rec.objective_end = prob.penalized_from_smooth(prob.smooth(w_new, rho, alpha), w_new);
            h_new = notears_h(w_new);
            if (h_new > 0.25 * h_val && rho < params.rho_max) {
                rho *= 10.0;
                continue;
            }
            break;
        }
        w = w_new;
        h_val = h_new;
        alpha += rho * h_val;
        rec.rho = rho;
        rec.alpha = alpha;
        rec.h = h_val;
        rec.loss = prob.loss(w);
        report.trace.push_back(rec);
        if (h_val <= params.h_tolerance) break;
        if (rho >= params.rho_max && h_val > params.h_tolerance) break;
    }
    report.final_h = h_val;
    if (h_val > params.h_tolerance)
        throw ConvergenceError("discover_structure: acyclicity constraint not met, h=" + fmt_g17(h_val),
                               h_val);

    CausalDag& dag = report.dag;
    dag.nodes = std::move(nodes);
    dag.weights = apply_tabu(w, tabu, dag.nodes);
    dag.tabu = tabu;
    dag.params = params;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j && std::abs(dag.weights(i, j)) >= params.threshold)
                dag.edges.push_back({i, j, dag.weights(i, j)});

    // residual-cycle repair: drop the weakest edge of each surviving cycle
    for (;;) {
        const std::vector<int> cycle = detail::find_cycle(d, dag.edges);
        if (cycle.empty()) break;
        int victim = cycle.front();
        for (int ei : cycle)
            if (std::abs(dag.edges[ei].weight) < std::abs(dag.edges[victim].weight)) victim = ei;
        report.warnings.push_back("cycle repaired: dropped edge " + dag.nodes[dag.edges[victim].from].name +
                                  " -> " + dag.nodes[dag.edges[victim].to].name);
        dag.edges.erase(dag.edges.begin() + victim);
    }
    if (!detail::topological_order(d, dag.edges, nullptr))
        throw ConvergenceError("discover_structure: thresholded graph is cyclic after repair", h_val);
    return report;
}

inline DiscoveryReport discover_structure_report(const Dataset& data, const TabuSpec& tabu,
                                                 const DiscoveryParams& params = {}) {
    const FeatureSchema& schema = data.schema();
    const int d = schema.n_cols();
    Eigen::MatrixXd x(data.n_rows(), d);
    for (int j = 0; j < d; ++j)
        for (std::int64_t i = 0; i < data.n_rows(); ++i)
            x(i, j) = static_cast<double>(data.value(i, j));
    std::vector<DagNode> nodes;
    for (const SchemaColumn& c : schema.columns) nodes.push_back({c.name, c.role});
    return discover_structure_report(std::move(x), std::move(nodes), tabu, params);
}

inline CausalDag discover_structure(const Dataset& data, const TabuSpec& tabu,
                                    const DiscoveryParams& params = {}) {
    return discover_structure_report(data, tabu, params).dag;
}

inline CausalDag discover_structure(Eigen::MatrixXd x, std::vector<DagNode> nodes,
                                    const TabuSpec& tabu, const DiscoveryParams& params = {}) {
    return discover_structure_report(std::move(x), std::move(nodes), tabu, params).dag;
}

/// Structural Hamming distance: insertions + deletions + reversals.
inline int count_shd(const CausalDag& a, const CausalDag& b) {
    if (a.n() != b.n()) throw ConfigError("count_shd: node count mismatch");
    auto edge_set = [](const CausalDag& g) {
        std::set<std::pair<int, int>> s;
        for (const DagEdge& e : g.edges) s.insert({e.from, e.to});
        return s;
    };
    const auto ea = edge_set(a), eb = edge_set(b);
    int shd = 0;
    std::set<std::pair<int, int>> counted;
    for (const auto& e : ea) {
        if (eb.count(e)) continue;
        if (eb.count({e.second, e.first}) && !ea.count({e.second, e.first})) {
            if (!counted.count({e.second, e.first})) {
                ++shd;  // reversal
                counted.insert(e);
            }
        } else {
            ++shd;  // deletion
        }
    }
    for (const auto& e : eb) {
        if (ea.count(e)) continue;
        if (ea.count({e.second, e.first}) && !eb.count({e.second, e.first})) continue;  // reversal, counted
        ++shd;  // insertion
    }
    return shd;
}

// ---- serialization ----------------------------------------------------------

inline nlohmann::json tabu_to_json(const TabuSpec& tabu) {
    nlohmann::json roles = nlohmann::json::array();
    for (const auto& [p, c] : tabu.forbidden_parent_roles)
        roles.push_back({to_string(p), to_string(c)});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [f, t] : tabu.forbidden_edges) edges.push_back({f, t});
    return {{"forbidden_parent_roles", roles},
            {"forbidden_edges", edges},
            {"forbidden_nodes", tabu.forbidden_nodes}};
}

inline TabuSpec tabu_from_json(const nlohmann::json& j) {
    TabuSpec tabu;
    for (const auto& r : j.value("forbidden_parent_roles", nlohmann::json::array()))
        tabu.forbidden_parent_roles.push_back({role_from_string(r.at(0)), role_from_string(r.at(1))});
    for (const auto& e : j.value("forbidden_edges", nlohmann::json::array()))
        tabu.forbidden_edges.push_back({e.at(0), e.at(1)});
    for (const auto& n : j.value("forbidden_nodes", nlohmann::json::array()))
        tabu.forbidden_nodes.push_back(n);
    return tabu;
}

inline nlohmann::json dag_to_json(const CausalDag& dag) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const DagNode& n : dag.nodes) nodes.push_back({{"name", n.name}, {"role", to_string(n.role)}});
    nlohmann::json edges = nlohmann::json::array();
    for (const DagEdge& e : dag.edges)
        edges.push_back({{"from", dag.nodes[e.from].name},
                         {"to", dag.nodes[e.to].name},
                         {"weight", e.weight}});
    return {{"nodes", nodes},
            {"edges", edges},
            {"tabu", tabu_to_json(dag.tabu)},
            {"params",
             {{"l1_penalty", dag.params.l1_penalty},
              {"threshold", dag.params.threshold},
              {"max_outer_iterations", dag.params.max_outer_iterations},
              {"h_tolerance", dag.params.h_tolerance}}}};
}

inline CausalDag dag_from_json(const nlohmann::json& j) {
    CausalDag dag;
    for (const auto& n : j.at("nodes")) dag.nodes.push_back({n.at("name"), role_from_string(n.at("role"))});
    const int d = dag.n();
    dag.weights = Eigen::MatrixXd::Zero(d, d);
    for (const auto& e : j.at("edges")) {
        const int f = dag.index_of(e.at("from"));
        const int t = dag.index_of(e.at("to"));
        if (f < 0 || t < 0) throw ConfigError("dag json: edge references unknown node");
        const double w = e.at("weight");
        dag.edges.push_back({f, t, w});
        dag.weights(f, t) = w;
    }
    if (j.contains("tabu")) dag.tabu = tabu_from_json(j.at("tabu"));
    if (j.contains("params")) {
        const auto& p = j.at("params");
        dag.params.l1_penalty = p.value("l1_penalty", dag.params.l1_penalty);
        dag.params.threshold = p.value("threshold", dag.params.threshold);
        dag.params.max_outer_iterations = p.value("max_outer_iterations", dag.params.max_outer_iterations);
        dag.params.h_tolerance = p.value("h_tolerance", dag.params.h_tolerance);
    }
    return dag;
}

/// DOT export for rendering; node roles ride along as attributes and goal
/// nodes are highlighted. The emitted text can be read back by dag_from_dot.
inline std::string dag_to_dot(const CausalDag& dag) {
    std::ostringstream out;
    out << "digraph causal_structure {\n";
    for (const DagNode& n : dag.nodes) {
        out << "  \"" << n.name << "\" [role=" << to_string(n.role);
        if (n.role == NodeRole::Goal) out << ", color=red, penwidth=2";
        out << "];\n";
    }
    for (const DagEdge& e : dag.edges)
        out << "  \"" << dag.nodes[e.from].name << "\" -> \"" << dag.nodes[e.to].name
            << "\" [weight=\"" << fmt_g17(e.weight) << "\", label=\"" << fmt_g6(e.weight) << "\"];\n";
    out << "}\n";
    return out.str();
}

/// Parses DOT text produced by dag_to_dot (node/edge lines with attributes).
inline CausalDag dag_from_dot(const std::string& text) {
    CausalDag dag;
    std::istringstream in(text);
    std::string line;
    std::vector<std::tuple<std::string, std::string, double>> raw_edges;
    while (std::getline(in, line)) {
        const auto q1 = line.find('"');
        if (q1 == std::string::npos) continue;
        const auto q2 = line.find('"', q1 + 1);
        if (q2 == std::string::npos) continue;
        const std::string first = line.substr(q1 + 1, q2 - q1 - 1);
        if (line.find("->") == std::string::npos) {
            const auto role_pos = line.find("role=");
            if (role_pos == std::string::npos) continue;
            std::string role = line.substr(role_pos + 5);
            role = role.substr(0, role.find_first_of(",]"));
            dag.nodes.push_back({first, role_from_string(role)});
        } else {
            const auto q3 = line.find('"', q2 + 1);
            const auto q4 = line.find('"', q3 + 1);
            const std::string to = line.substr(q3 + 1, q4 - q3 - 1);
            const auto w_pos = line.find("weight=\"");
            const auto w_end = line.find('"', w_pos + 8);
            const double w = std::stod(line.substr(w_pos + 8, w_end - w_pos - 8));
            raw_edges.push_back({first, to, w});
        }
    }
    const int d = dag.n();
    dag.weights = Eigen::MatrixXd::Zero(d, d);
    for (const auto& [f, t, w] : raw_edges) {
        const int fi = dag.index_of(f), ti = dag.index_of(t);
        if (fi < 0 || ti < 0) throw ConfigError("dag dot: edge references unknown node");
        dag.edges.push_back({fi, ti, w});
        dag.weights(fi, ti) = w;
    }
    return dag;
}

inline void save_dag(const CausalDag& dag, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("dag: cannot write " + path);
    out << dag_to_json(dag).dump(2) << '\n';
}

inline CausalDag load_dag(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("dag: cannot open " + path);
    return dag_from_json(nlohmann::json::parse(in));
}

}  // namespace causalq
