#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalq/bayesnet.hpp"
#include "causalq/env_common.hpp"

namespace causalq {

/// Ordered sub-goal sequence; each entry must be a goal-role node of the DAG.
struct GoalSpec {
    std::vector<std::string> goals;

    void validate(const CausalDag& dag) const {
        if (goals.empty()) throw ConfigError("goals: must not be empty");
        std::vector<std::string> seen;
        for (const std::string& g : goals) {
            const int idx = dag.index_of(g);
            if (idx < 0) throw ConfigError("goals: unknown node " + g);
            if (dag.nodes[idx].role != NodeRole::Goal)
                throw ConfigError("goals: node " + g + " does not have the goal role");
            if (std::find(seen.begin(), seen.end(), g) != seen.end())
                throw ConfigError("goals: duplicate " + g);
            seen.push_back(g);
        }
    }
    int size() const { return static_cast<int>(goals.size()); }
};

/// An environment action together with the causal-graph node it maps onto.
struct ActionChoice {
    int index = 0;
    ActionNode node = ActionNode::Move;
};

struct InferenceResult {
    int best_action = 0;  // environment action index
    double p = 0.0;       // max over the scanned actions
    std::vector<std::pair<int, double>> per_action;  // (action index, probability)
    bool best_is_parent = false;  // best action's node is a DAG parent of the goal
    bool zero_evidence = false;   // every scanned assignment had zero-probability evidence
};

/// Action scan: clamp the state evidence, set one action indicator true and
/// the rest false, query P(goal = true | ...) for each action, and return the
/// argmax under strict improvement from p = 0 (ties fall to the lowest action
/// index; if nothing improves on 0, the lowest-index action is reported).
inline InferenceResult infer_max_prob(const DiscreteBayesNet& bn, const Evidence& state_evidence,
                                      const std::vector<ActionChoice>& actions, int goal_node) {
    if (goal_node < 0 || goal_node >= bn.n())
        throw ConfigError("infer_max_prob: goal node out of range");
    if (bn.dag().nodes[goal_node].role != NodeRole::Goal)
        throw ConfigError("infer_max_prob: node " + bn.dag().nodes[goal_node].name +
                          " does not have the goal role");
    for (const auto& [node, value] : state_evidence.assignments)
        if (bn.dag().nodes[node].role != NodeRole::State)
            throw ConfigError("infer_max_prob: evidence must cover state-role nodes only");
    if (actions.empty()) throw ConfigError("infer_max_prob: empty action list");

    std::vector<int> action_bn_nodes;
    for (int v = 0; v < bn.n(); ++v)
        if (bn.dag().nodes[v].role == NodeRole::Action) action_bn_nodes.push_back(v);

    // probabilities per causal action node; movement actions all share one
    double node_p[3];
    bool node_zero[3];
    bool node_done[3] = {false, false, false};
    auto scan = [&](ActionNode an) {
        const int k = static_cast<int>(an);
        if (node_done[k]) return;
        Evidence ev = state_evidence;
        for (int v : action_bn_nodes) ev.set(v, bn.dag().nodes[v].name == node_name(an) ? 1 : 0);
        const QueryResult q = query_probability_ex(bn, goal_node, 1, ev);
        node_p[k] = q.probability;
        node_zero[k] = q.zero_evidence;
        node_done[k] = true;
    };

    InferenceResult res;
    bool any_improvement = false;
    bool all_zero = true;
    for (const ActionChoice& a : actions) {
        scan(a.node);
        const double p = node_p[static_cast<int>(a.node)];
        res.per_action.push_back({a.index, p});
        all_zero = all_zero && node_zero[static_cast<int>(a.node)];
        if (res.p < p) {
            res.p = p;
            res.best_action = a.index;
            res.best_is_parent =
                bn.dag().has_edge(node_name(a.node), bn.dag().nodes[goal_node].name);
            any_improvement = true;
        }
    }
    if (!any_improvement) {
        res.best_action = actions.front().index;
        res.best_is_parent = false;
    }
    res.zero_evidence = all_zero;
    return res;
}

inline InferenceResult infer_max_prob(const DiscreteBayesNet& bn,
                                      const std::vector<std::pair<std::string, int>>& state_evidence,
                                      const std::vector<ActionChoice>& actions,
                                      const std::string& goal) {
    const int g = bn.index_of(goal);
    if (g < 0) throw ConfigError("infer_max_prob: unknown goal " + goal);
    Evidence ev;
    for (const auto& [name, value] : state_evidence) {
        const int n = bn.index_of(name);
        if (n < 0) throw ConfigError("infer_max_prob: unknown evidence node " + name);
        ev.set(n, value);
    }
    return infer_max_prob(bn, ev, actions, g);
}

/// Memoizing wrapper used by the training loop. Inference is a pure function
/// of (state evidence, goal), so per-node probabilities are cached and only
/// expanded into the caller's action list on each step.
class InferenceEngine {
public:
    InferenceEngine(const DiscreteBayesNet& bn, GoalSpec goals) : bn_(&bn), goals_(std::move(goals)) {
        goals_.validate(bn.dag());
        for (int v = 0; v < bn.n(); ++v)
            if (bn.dag().nodes[v].role == NodeRole::State) state_nodes_.push_back(v);
        for (const std::string& g : goals_.goals) goal_nodes_.push_back(bn.index_of(g));
    }

    const DiscreteBayesNet& bn() const { return *bn_; }
    const GoalSpec& goals() const { return goals_; }
    const std::vector<int>& state_nodes() const { return state_nodes_; }
    int goal_node(int goal_idx) const { return goal_nodes_[goal_idx]; }

    bool goal_has_action_parent(int goal_idx) const {
        for (int p : bn_->dag().parents_of(goal_nodes_[goal_idx]))
            if (bn_->dag().nodes[p].role == NodeRole::Action) return true;
        return false;
    }

    /// state_values aligned with state_nodes().
    InferenceResult infer(const std::vector<int>& state_values, int goal_idx,
                          const std::vector<ActionChoice>& actions) const {
        Key key;
        key.goal = goal_idx;
        key.values = state_values;
        auto it = memo_.find(key);
        if (it == memo_.end()) {
            Evidence ev;
            for (std::size_t i = 0; i < state_nodes_.size(); ++i)
                ev.set(state_nodes_[i], state_values[i]);
            std::vector<ActionChoice> probe = {{0, ActionNode::Move},
                                               {1, ActionNode::Pickup},
                                               {2, ActionNode::Dropoff}};
            it = memo_.emplace(key, infer_max_prob(*bn_, ev, probe, goal_nodes_[goal_idx])).first;
        }
        const InferenceResult& by_node = it->second;
        InferenceResult res;
        res.p = 0.0;
        bool any = false;
        res.zero_evidence = by_node.zero_evidence;
        for (const ActionChoice& a : actions) {
            const double p = by_node.per_action[static_cast<int>(a.node)].second;
            res.per_action.push_back({a.index, p});
            if (res.p < p) {
                res.p = p;
                res.best_action = a.index;
                res.best_is_parent =
                    bn_->dag().has_edge(node_name(a.node), bn_->dag().nodes[goal_nodes_[goal_idx]].name);
                any = true;
            }
        }
        if (!any) {
            res.best_action = actions.empty() ? 0 : actions.front().index;
            res.best_is_parent = false;
        }
        return res;
    }

private:
    struct Key {
        int goal = 0;
        std::vector<int> values;
        bool operator<(const Key& o) const {
            if (goal != o.goal) return goal < o.goal;
            return values < o.values;
        }
    };

    const DiscreteBayesNet* bn_;
    GoalSpec goals_;
    std::vector<int> state_nodes_;
    std::vector<int> goal_nodes_;
    mutable std::map<Key, InferenceResult> memo_;
};

}  // namespace causalq
