#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causalq/causal_infer.hpp"
#include "causalq/env_common.hpp"
#include "causalq/graph_env.hpp"
#include "causalq/grid_env.hpp"
#include "causalq/rng.hpp"

namespace causalq {

struct LearnerConfig {
    int episodes = 1000;
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon = 1.0;
    double epsilon_min = 0.05;
    double decay = 0.999;  // per explore/exploit step
    std::uint64_t seed = 0;
    enum class AdvanceMode { Literal, Confirmed };
    AdvanceMode advance_mode = AdvanceMode::Literal;
    /// Minimum inferred probability for the causal branch to fire. Guards
    /// against smoothing artifacts where an impossible action's near-zero
    /// probability still tops the scan.
    double infer_min_prob = 0.5;

    void validate() const {
        if (episodes < 1) throw ConfigError("learner: episodes must be positive");
        if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("learner: alpha must be in (0,1]");
        if (gamma < 0.0 || gamma > 1.0) throw ConfigError("learner: gamma must be in [0,1]");
        if (epsilon < 0.0 || epsilon > 1.0) throw ConfigError("learner: epsilon must be in [0,1]");
        if (epsilon_min < 0.0 || epsilon_min > epsilon)
            throw ConfigError("learner: need 0 <= epsilon_min <= epsilon");
        if (decay <= 0.0 || decay > 1.0) throw ConfigError("learner: decay must be in (0,1]");
        if (infer_min_prob < 0.0 || infer_min_prob > 1.0)
            throw ConfigError("learner: infer_min_prob must be in [0,1]");
    }
};

/// Dense tabular value function over an environment's state-key space.
class QTable {
public:
    QTable() = default;
    QTable(std::int64_t n_states, int n_actions)
        : n_actions_(n_actions), values_(static_cast<std::size_t>(n_states) * n_actions, 0.0) {}

    int n_actions() const { return n_actions_; }
    std::int64_t n_states() const { return static_cast<std::int64_t>(values_.size()) / n_actions_; }

    double get(std::int64_t key, int action) const { return values_[key * n_actions_ + action]; }
    void set(std::int64_t key, int action, double v) { values_[key * n_actions_ + action] = v; }

    /// Greedy argmax over the given legal action indices; ties to lowest index.
    int argmax(std::int64_t key, const std::vector<ActionChoice>& legal) const {
        int best = legal.front().index;
        double best_v = -std::numeric_limits<double>::infinity();
        for (const ActionChoice& a : legal) {
            const double v = get(key, a.index);
            if (v > best_v) {
                best_v = v;
                best = a.index;
            }
        }
        return best;
    }

    double max_value(std::int64_t key, const std::vector<ActionChoice>& legal) const {
        double best = -std::numeric_limits<double>::infinity();
        for (const ActionChoice& a : legal) best = std::max(best, get(key, a.index));
        return best;
    }

    void save(std::ostream& out, const std::string& env_id, std::uint64_t config_hash) const {
        out << "# env=" << env_id << " config_hash=" << config_hash << " n_actions=" << n_actions_
            << '\n';
        out << "state_key,action,value\n";
        for (std::int64_t k = 0; k < n_states(); ++k)
            for (int a = 0; a < n_actions_; ++a)
                out << k << ',' << a << ',' << fmt_g17(get(k, a)) << '\n';
    }

    static QTable load(std::istream& in) {
        std::string line;
        if (!std::getline(in, line) || line.rfind("# env=", 0) != 0)
            throw ConfigError("qtable: missing header");
        const auto na_pos = line.find("n_actions=");
        if (na_pos == std::string::npos) throw ConfigError("qtable: header lacks n_actions");
        const int n_actions = std::stoi(line.substr(na_pos + 10));
        if (!std::getline(in, line)) throw ConfigError("qtable: missing column header");
        std::vector<double> values;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            values.push_back(std::stod(line.substr(c2 + 1)));
        }
        QTable t;
        t.n_actions_ = n_actions;
        t.values_ = std::move(values);
        if (t.values_.size() % n_actions != 0) throw ConfigError("qtable: ragged table");
        return t;
    }

private:
    int n_actions_ = 1;
    std::vector<double> values_;
};

struct EpisodeRecord {
    int episode = 0;  // 1-based
    double total_reward = 0.0;
    int steps = 0;
    double epsilon = 0.0;  // at episode end
    int infer_count = 0;
};

struct TrainingCurve {
    std::vector<EpisodeRecord> episodes;
    std::vector<std::string> warnings;

    void save_csv(std::ostream& out) const {
        out << "episode,total_reward,steps,epsilon,infer_count\n";
        for (const EpisodeRecord& r : episodes)
            out << r.episode << ',' << fmt_g17(r.total_reward) << ',' << r.steps << ','
                << fmt_g17(r.epsilon) << ',' << r.infer_count << '\n';
    }
};

struct TrainResult {
    QTable qtable;
    TrainingCurve curve;
};

namespace detail {

template <class Env>
std::vector<ActionChoice> legal_actions(const Env& env, const typename Env::State& s) {
    std::vector<ActionChoice> out;
    for (int a = 0; a < env.action_count(); ++a)
        if (env.is_legal(s, a)) out.push_back({a, env.action_node(a)});
    return out;
}

/// Value of a named BN state node for the current environment state, or
/// nullopt when the environment cannot provide it.
template <class Env>
std::optional<int> state_feature_value(const Env& env, const typename Env::State& s,
                                       const std::string& name) {
    const CoreFeatures f = env.core_features(s);
    if (name == "taxi_on_pax_loc") return f.on_pax_loc ? 1 : 0;
    if (name == "taxi_on_dest") return f.on_dest ? 1 : 0;
    if (name == "pax_in_taxi") return f.aboard ? 1 : 0;
    if constexpr (std::is_same_v<Env, GridEnv>) {
        if (name == "taxi_row") return s.taxi_row;
        if (name == "taxi_col") return s.taxi_col;
    }
    return std::nullopt;
}

/// Precomputed extractor for the BN's state nodes; fails fast with the list
/// of unavailable columns.
template <class Env>
class StateEvidence {
public:
    StateEvidence(const Env& env, const InferenceEngine& engine) : env_(&env), engine_(&engine) {
        std::string missing;
        typename Env::State probe{};
        for (int node : engine.state_nodes()) {
            const std::string& name = engine.bn().dag().nodes[node].name;
            if (!state_feature_value(env, probe, name))
                missing += missing.empty() ? name : ", " + name;
            names_.push_back(name);
        }
        if (!missing.empty())
            throw ConfigError("learner: BN state nodes unavailable in this environment: " + missing);
    }

    std::vector<int> operator()(const typename Env::State& s) const {
        std::vector<int> out;
        out.reserve(names_.size());
        for (const std::string& name : names_) out.push_back(*state_feature_value(*env_, s, name));
        return out;
    }

private:
    const Env* env_;
    const InferenceEngine* engine_;
    std::vector<std::string> names_;
};

inline SubGoal goal_event(const std::string& goal_name) {
    if (goal_name == "pax_in_taxi_next") return SubGoal::PaxInTaxi;
    if (goal_name == "dropoff_next") return SubGoal::Dropoff;
    return SubGoal::None;
}

}  // namespace detail

/// Causally guided Q-Learning. Every step runs the inference scan for the
/// current sub-goal; when the best action is a DAG parent of that sub-goal
/// (and clears infer_min_prob) it is taken directly and the sub-goal index
/// advances, otherwise epsilon-greedy selection applies and epsilon decays.
/// Updates use the probability-adjusted reward r*p.
template <class Env>
TrainResult qcogni_learn(const Env& env, const DiscreteBayesNet& bn, const GoalSpec& goals,
                         const LearnerConfig& cfg) {
    cfg.validate();
    InferenceEngine engine(bn, goals);
    detail::StateEvidence<Env> evidence(env, engine);

    TrainResult result;
    result.qtable = QTable(env.state_space_size(), env.action_count());
    for (int g = 0; g < goals.size(); ++g)
        if (!engine.goal_has_action_parent(g))
            result.curve.warnings.push_back("goal " + goals.goals[g] +
                                            " has no action parent; the infer branch cannot fire");

    QTable& q = result.qtable;
    Rng rng(cfg.seed);
    double eps = cfg.epsilon;
    const int n_goals = goals.size();

    for (int episode = 1; episode <= cfg.episodes; ++episode) {
        typename Env::State s = env.reset(rng);
        int j = 0;  // current sub-goal
        EpisodeRecord rec;
        rec.episode = episode;
        for (int t = 0; t < env.max_steps(); ++t) {
            const std::vector<ActionChoice> legal = detail::legal_actions(env, s);
            const InferenceResult inf = engine.infer(evidence(s), j, legal);
            int action;
            bool infer_branch = false;
            if (inf.best_is_parent && inf.p >= cfg.infer_min_prob) {
                action = inf.best_action;
                infer_branch = true;
                ++rec.infer_count;
                if (cfg.advance_mode == LearnerConfig::AdvanceMode::Literal)
                    j = std::min(j + 1, n_goals - 1);
            } else {
                if (rng.uniform_real() < eps)
                    action = rng.uniform_index(env.action_count());
                else
                    action = q.argmax(env.state_key(s), legal);
                eps = std::max(cfg.epsilon_min, eps * cfg.decay);
            }
            const Step<typename Env::State> step = env.step(s, action);
            if (cfg.advance_mode == LearnerConfig::AdvanceMode::Confirmed &&
                step.subgoal != SubGoal::None &&
                step.subgoal == detail::goal_event(goals.goals[j]))
                j = std::min(j + 1, n_goals - 1);
            const std::int64_t key = env.state_key(s);
            const double bootstrap =
                step.done ? 0.0
                          : q.max_value(env.state_key(step.next), detail::legal_actions(env, step.next));
            const double target = step.reward * inf.p + cfg.gamma * bootstrap;
            q.set(key, action, q.get(key, action) + cfg.alpha * (target - q.get(key, action)));
            rec.total_reward += step.reward;
            ++rec.steps;
            (void)infer_branch;  // branch label is surfaced by trace_episode
            if (step.done) break;
            s = step.next;
        }
        rec.epsilon = eps;
        result.curve.episodes.push_back(rec);
    }
    return result;
}

/// Vanilla epsilon-decay Q-Learning baseline: the same loop without the
/// inference branch, updates on the raw reward (p fixed at 1).
template <class Env>
TrainResult vanilla_q_learn(const Env& env, const LearnerConfig& cfg) {
    cfg.validate();
    TrainResult result;
    result.qtable = QTable(env.state_space_size(), env.action_count());
    QTable& q = result.qtable;
    Rng rng(cfg.seed);
    double eps = cfg.epsilon;
    for (int episode = 1; episode <= cfg.episodes; ++episode) {
        typename Env::State s = env.reset(rng);
        EpisodeRecord rec;
        rec.episode = episode;
        for (int t = 0; t < env.max_steps(); ++t) {
            const std::vector<ActionChoice> legal = detail::legal_actions(env, s);
            int action;
            if (rng.uniform_real() < eps)
                action = rng.uniform_index(env.action_count());
            else
                action = q.argmax(env.state_key(s), legal);
            eps = std::max(cfg.epsilon_min, eps * cfg.decay);
            const Step<typename Env::State> step = env.step(s, action);
            const std::int64_t key = env.state_key(s);
            const double bootstrap =
                step.done ? 0.0
                          : q.max_value(env.state_key(step.next), detail::legal_actions(env, step.next));
            const double target = step.reward + cfg.gamma * bootstrap;
            q.set(key, action, q.get(key, action) + cfg.alpha * (target - q.get(key, action)));
            rec.total_reward += step.reward;
            ++rec.steps;
            if (step.done) break;
            s = step.next;
        }
        rec.epsilon = eps;
        result.curve.episodes.push_back(rec);
    }
    return result;
}

struct EvalEpisode {
    double total_reward = 0.0;
    int steps = 0;
    double distance = 0.0;  // sum of traversed edge lengths / grid moves
    bool success = false;   // terminated via dropoff
    bool failed = false;    // hit the step cap
};

/// Greedy rollout (epsilon = 0); the inference branch stays active when an
/// engine is supplied. Step-cap aborts are reported as failed episodes.
template <class Env>
EvalEpisode rollout_greedy(const Env& env, const QTable& q, typename Env::State s,
                           const InferenceEngine* engine, double infer_min_prob = 0.5) {
    std::optional<detail::StateEvidence<Env>> evidence;
    if (engine) evidence.emplace(env, *engine);
    EvalEpisode out;
    int j = 0;
    for (int t = 0; t < env.max_steps(); ++t) {
        const std::vector<ActionChoice> legal = detail::legal_actions(env, s);
        int action = -1;
        if (engine) {
            const InferenceResult inf = engine->infer((*evidence)(s), j, legal);
            if (inf.best_is_parent && inf.p >= infer_min_prob) {
                action = inf.best_action;
                j = std::min(j + 1, engine->goals().size() - 1);
            }
        }
        if (action < 0) action = q.argmax(env.state_key(s), legal);
        const Step<typename Env::State> step = env.step(s, action);
        out.total_reward += step.reward;
        out.distance += step.distance;
        ++out.steps;
        if (step.done) {
            out.success = true;
            return out;
        }
        s = step.next;
    }
    out.failed = true;
    return out;
}

template <class Env>
std::vector<EvalEpisode> evaluate_policy(const Env& env, const QTable& q,
                                         const std::vector<typename Env::State>& configs,
                                         const InferenceEngine* engine = nullptr,
                                         double infer_min_prob = 0.5) {
    std::vector<EvalEpisode> out;
    out.reserve(configs.size());
    for (const auto& s : configs) out.push_back(rollout_greedy(env, q, s, engine, infer_min_prob));
    return out;
}

/// One greedy episode as JSON lines: state features, branch, chosen action,
/// the full per-action probability table, reward, cumulative reward.
template <class Env>
void trace_episode(const Env& env, const QTable& q, const InferenceEngine& engine,
                   typename Env::State s, std::ostream& out, double infer_min_prob = 0.5,
                   double epsilon = 0.0, std::uint64_t seed = 0) {
    detail::StateEvidence<Env> evidence(env, engine);
    Rng rng(seed);
    int j = 0;
    double cum = 0.0;
    for (int t = 0; t < env.max_steps(); ++t) {
        const std::vector<ActionChoice> legal = detail::legal_actions(env, s);
        const int goal_pursued = j;
        const InferenceResult inf = engine.infer(evidence(s), j, legal);
        const char* branch;
        int action;
        if (inf.best_is_parent && inf.p >= infer_min_prob) {
            branch = "infer";
            action = inf.best_action;
            j = std::min(j + 1, engine.goals().size() - 1);
        } else if (epsilon > 0.0 && rng.uniform_real() < epsilon) {
            branch = "explore";
            action = rng.uniform_index(env.action_count());
        } else {
            branch = "exploit";
            action = q.argmax(env.state_key(s), legal);
        }
        const Step<typename Env::State> step = env.step(s, action);
        cum += step.reward;

        nlohmann::json state_j = nlohmann::json::object();
        const std::vector<int> values = evidence(s);
        for (std::size_t i = 0; i < values.size(); ++i)
            state_j[engine.bn().dag().nodes[engine.state_nodes()[i]].name] = values[i];
        nlohmann::json per_action = nlohmann::json::array();
        for (const auto& [idx, p] : inf.per_action)
            per_action.push_back({{"action", idx}, {"name", env.action_name(idx)}, {"p", p}});
        nlohmann::json rec = {{"step", t},
                              {"state", state_j},
                              {"goal", engine.goals().goals[goal_pursued]},
                              {"branch", branch},
                              {"action", action},
                              {"action_name", env.action_name(action)},
                              {"p", inf.p},
                              {"per_action", per_action},
                              {"reward", step.reward},
                              {"cum_reward", cum}};
        out << rec.dump() << '\n';
        if (step.done) break;
        s = step.next;
    }
}

}  // namespace causalq
