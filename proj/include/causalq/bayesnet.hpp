#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causalq/common.hpp"
#include "causalq/features.hpp"
#include "causalq/structure.hpp"

namespace causalq {

/// Partial assignment of network nodes, by node index.
struct Evidence {
    std::vector<std::pair<int, int>> assignments;  // (node, value), node-sorted

    void set(int node, int value) {
        for (auto& [n, v] : assignments)
            if (n == node) {
                v = value;
                return;
            }
        assignments.push_back({node, value});
        std::sort(assignments.begin(), assignments.end());
    }
    const int* find(int node) const {
        for (const auto& [n, v] : assignments)
            if (n == node) return &v;
        return nullptr;
    }
};

struct QueryResult {
    double probability = 0.0;
    /// Set when the evidence itself has zero probability under the network;
    /// the result is then a defined 0 rather than an exception so that action
    /// scans stay total.
    bool zero_evidence = false;
};

namespace detail {

/// Dense factor over a sorted set of variables; last variable varies fastest.
struct Factor {
    std::vector<int> vars;
    std::vector<int> cards;
    std::vector<double> table;

    static Factor unit() { return Factor{{}, {}, {1.0}}; }

    std::size_t size() const { return table.size(); }

    static Factor multiply(const Factor& a, const Factor& b) {
        Factor out;
        std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                       std::back_inserter(out.vars));
        out.cards.resize(out.vars.size());
        std::size_t total = 1;
        for (std::size_t i = 0; i < out.vars.size(); ++i) {
            const int v = out.vars[i];
            auto ia = std::find(a.vars.begin(), a.vars.end(), v);
            out.cards[i] = ia != a.vars.end() ? a.cards[ia - a.vars.begin()]
                                              : b.cards[std::find(b.vars.begin(), b.vars.end(), v) -
                                                        b.vars.begin()];
            total *= static_cast<std::size_t>(out.cards[i]);
        }
        out.table.assign(total, 0.0);
        std::vector<int> assign(out.vars.size(), 0);
        auto index_in = [&](const Factor& f) {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < f.vars.size(); ++i) {
                const auto pos = std::find(out.vars.begin(), out.vars.end(), f.vars[i]) - out.vars.begin();
                idx = idx * static_cast<std::size_t>(f.cards[i]) + static_cast<std::size_t>(assign[pos]);
            }
            return idx;
        };
        for (std::size_t flat = 0; flat < total; ++flat) {
            out.table[flat] = a.table[index_in(a)] * b.table[index_in(b)];
            for (int i = static_cast<int>(out.vars.size()) - 1; i >= 0; --i) {
                if (++assign[i] < out.cards[i]) break;
                assign[i] = 0;
            }
        }
        return out;
    }

    Factor sum_out(int var) const {
        const auto it = std::find(vars.begin(), vars.end(), var);
        if (it == vars.end()) return *this;
        const std::size_t pos = static_cast<std::size_t>(it - vars.begin());
        Factor out;
        out.vars = vars;
        out.vars.erase(out.vars.begin() + pos);
        out.cards = cards;
        const int var_card = cards[pos];
        out.cards.erase(out.cards.begin() + pos);
        std::size_t total = 1;
        for (int c : out.cards) total *= static_cast<std::size_t>(c);
        out.table.assign(total, 0.0);
        std::size_t inner = 1;  // stride of eliminated var
        for (std::size_t i = pos + 1; i < vars.size(); ++i) inner *= static_cast<std::size_t>(cards[i]);
        const std::size_t block = inner * static_cast<std::size_t>(var_card);
        for (std::size_t flat = 0; flat < table.size(); ++flat) {
            const std::size_t outer = flat / block;
            const std::size_t rem = flat % inner;
            out.table[outer * inner + rem] += table[flat];
        }
        return out;
    }

    Factor reduce(int var, int value) const {
        const auto it = std::find(vars.begin(), vars.end(), var);
        if (it == vars.end()) return *this;
        const std::size_t pos = static_cast<std::size_t>(it - vars.begin());
        Factor out;
        out.vars = vars;
        out.vars.erase(out.vars.begin() + pos);
        out.cards = cards;
        const int var_card = cards[pos];
        out.cards.erase(out.cards.begin() + pos);
        std::size_t inner = 1;
        for (std::size_t i = pos + 1; i < vars.size(); ++i) inner *= static_cast<std::size_t>(cards[i]);
        const std::size_t block = inner * static_cast<std::size_t>(var_card);
        out.table.reserve(table.size() / static_cast<std::size_t>(var_card));
        for (std::size_t flat = 0; flat < table.size(); ++flat) {
            const std::size_t v = (flat % block) / inner;
            if (static_cast<int>(v) == value) out.table.push_back(table[flat]);
        }
        return out;
    }
};

}  // namespace detail

/// Discrete Bayesian network: a causal DAG plus one conditional probability
/// table per node. Immutable once fitted; concurrent queries are safe.
class DiscreteBayesNet {
public:
    struct Cpd {
        std::vector<int> parents;   // node indices, sorted by node *name*
        std::vector<double> table;  // [parent assignment row][value], row-major over parents
    };

    DiscreteBayesNet() = default;
    DiscreteBayesNet(CausalDag dag, std::vector<int> cards, std::vector<Cpd> cpds)
        : dag_(std::move(dag)), cards_(std::move(cards)), cpds_(std::move(cpds)) {}

    const CausalDag& dag() const { return dag_; }
    int n() const { return dag_.n(); }
    int cardinality(int node) const { return cards_[node]; }
    int index_of(const std::string& name) const { return dag_.index_of(name); }
    const Cpd& cpd(int node) const { return cpds_[node]; }

    /// Parent-assignment row index: row-major over parents sorted by name.
    std::size_t parent_row(int node, const std::vector<int>& values) const {
        const Cpd& c = cpds_[node];
        std::size_t row = 0;
        for (std::size_t i = 0; i < c.parents.size(); ++i)
            row = row * static_cast<std::size_t>(cards_[c.parents[i]]) +
                  static_cast<std::size_t>(values[i]);
        return row;
    }

    /// Tables must be row-normalized with all entries in [0,1] and parent
    /// sets equal to the DAG's. Throws on violation.
    void validate() const {
        if (static_cast<int>(cards_.size()) != n() || static_cast<int>(cpds_.size()) != n())
            throw ConfigError("bayesnet: cpd/domain count mismatch");
        for (int v = 0; v < n(); ++v) {
            std::vector<int> expected = dag_.parents_of(v);
            std::sort(expected.begin(), expected.end(), [&](int a, int b) {
                return dag_.nodes[a].name < dag_.nodes[b].name;
            });
            if (expected != cpds_[v].parents)
                throw ConfigError("bayesnet: cpd parents of " + dag_.nodes[v].name +
                                  " do not match the DAG");
            const int card = cards_[v];
            std::size_t rows = 1;
            for (int p : cpds_[v].parents) rows *= static_cast<std::size_t>(cards_[p]);
            if (cpds_[v].table.size() != rows * static_cast<std::size_t>(card))
                throw ConfigError("bayesnet: table size mismatch for " + dag_.nodes[v].name);
            for (std::size_t r = 0; r < rows; ++r) {
                double sum = 0.0;
                for (int k = 0; k < card; ++k) {
                    const double p = cpds_[v].table[r * card + k];
                    if (p < 0.0 || p > 1.0) throw ConfigError("bayesnet: probability out of [0,1]");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > 1e-12)
                    throw ConfigError("bayesnet: row of " + dag_.nodes[v].name + " sums to " +
                                      fmt_g17(sum));
            }
        }
    }

    detail::Factor node_factor(int node) const {
        detail::Factor f;
        f.vars = cpds_[node].parents;
        f.vars.push_back(node);
        std::vector<std::size_t> order(f.vars.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return f.vars[a] < f.vars[b];
        });
        // reorder table axes from (parents..., node) into sorted-index order
        std::vector<int> src_vars = f.vars;
        std::vector<int> src_cards;
        for (int v : src_vars) src_cards.push_back(cards_[v]);
        detail::Factor out;
        for (std::size_t i : order) out.vars.push_back(src_vars[i]);
        for (std::size_t i : order) out.cards.push_back(src_cards[i]);
        out.table.assign(cpds_[node].table.size(), 0.0);
        std::vector<int> assign(src_vars.size(), 0);
        for (std::size_t flat = 0; flat < cpds_[node].table.size(); ++flat) {
            std::size_t dst = 0;
            for (std::size_t i = 0; i < order.size(); ++i)
                dst = dst * static_cast<std::size_t>(src_cards[order[i]]) +
                      static_cast<std::size_t>(assign[order[i]]);
            out.table[dst] = cpds_[node].table[flat];
            for (int i = static_cast<int>(src_vars.size()) - 1; i >= 0; --i) {
                if (++assign[i] < src_cards[i]) break;
                assign[i] = 0;
            }
        }
        return out;
    }

private:
    CausalDag dag_;
    std::vector<int> cards_;
    std::vector<Cpd> cpds_;
};

/// Maximum-likelihood CPD fit with additive smoothing:
/// P(v|pa) = (count + s) / (row count + s*|domain|); parent rows never
/// observed fall back to the uniform distribution.
inline DiscreteBayesNet fit_cpds(const CausalDag& dag, const Dataset& data, double smoothing = 1.0,
                                 int cardinality_cap = 64) {
    if (data.n_rows() == 0) throw ConfigError("fit_cpds: empty dataset");
    if (smoothing < 0.0) throw ConfigError("fit_cpds: smoothing must be nonnegative");
    const FeatureSchema& schema = data.schema();
    const int d = dag.n();
    std::vector<int> col_of(d);
    std::vector<int> cards(d);
    for (int v = 0; v < d; ++v) {
        col_of[v] = schema.index_of(dag.nodes[v].name);
        if (col_of[v] < 0) throw ConfigError("fit_cpds: dataset lacks column " + dag.nodes[v].name);
        cards[v] = schema.columns[col_of[v]].cardinality;
        if (cards[v] > cardinality_cap)
            throw ConfigError("fit_cpds: cardinality of " + dag.nodes[v].name + " exceeds cap");
    }

    std::vector<DiscreteBayesNet::Cpd> cpds(d);
    for (int v = 0; v < d; ++v) {
        DiscreteBayesNet::Cpd& c = cpds[v];
        c.parents = dag.parents_of(v);
        std::sort(c.parents.begin(), c.parents.end(),
                  [&](int a, int b) { return dag.nodes[a].name < dag.nodes[b].name; });
        std::size_t rows = 1;
        for (int p : c.parents) rows *= static_cast<std::size_t>(cards[p]);
        const int card = cards[v];
        std::vector<double> counts(rows * static_cast<std::size_t>(card), 0.0);
        std::vector<double> row_totals(rows, 0.0);
        for (std::int64_t r = 0; r < data.n_rows(); ++r) {
            std::size_t row = 0;
            for (int p : c.parents) {
                const int val = data.value(r, col_of[p]);
                if (val < 0 || val >= cards[p])
                    throw ConfigError("fit_cpds: value outside domain of " + dag.nodes[p].name);
                row = row * static_cast<std::size_t>(cards[p]) + static_cast<std::size_t>(val);
            }
            const int val = data.value(r, col_of[v]);
            if (val < 0 || val >= card)
                throw ConfigError("fit_cpds: value outside domain of " + dag.nodes[v].name);
            counts[row * card + val] += 1.0;
            row_totals[row] += 1.0;
        }
        c.table.resize(counts.size());
        for (std::size_t row = 0; row < rows; ++row) {
            const double denom = row_totals[row] + smoothing * card;
            for (int k = 0; k < card; ++k) {
                c.table[row * card + k] = row_totals[row] == 0.0 && smoothing == 0.0
                                              ? 1.0 / card
                                              : (counts[row * card + k] + smoothing) / denom;
            }
        }
    }
    DiscreteBayesNet bn(dag, std::move(cards), std::move(cpds));
    bn.validate();
    return bn;
}

/// Exact posterior P(target = value | evidence) by variable elimination with
/// a min-degree ordering (ties broken by node name). Zero-probability
/// evidence yields {0, zero_evidence=true}.
inline QueryResult query_probability_ex(const DiscreteBayesNet& bn, int target, int target_value,
                                        const Evidence& evidence) {
    if (target < 0 || target >= bn.n()) throw ConfigError("query: target out of range");
    if (evidence.find(target)) throw ContractError("query: target must not be in the evidence");
    if (target_value < 0 || target_value >= bn.cardinality(target))
        throw ConfigError("query: target value outside its domain");
    for (const auto& [node, value] : evidence.assignments)
        if (node < 0 || node >= bn.n() || value < 0 || value >= bn.cardinality(node))
            throw ConfigError("query: evidence outside node domains");

    std::vector<detail::Factor> factors;
    for (int v = 0; v < bn.n(); ++v) {
        detail::Factor f = bn.node_factor(v);
        for (const auto& [node, value] : evidence.assignments) f = f.reduce(node, value);
        factors.push_back(std::move(f));
    }

    std::set<int> to_eliminate;
    for (const detail::Factor& f : factors)
        for (int v : f.vars)
            if (v != target) to_eliminate.insert(v);

    while (!to_eliminate.empty()) {
        // min-degree: fewest distinct co-occurring variables, ties by name
        int best = -1;
        std::size_t best_degree = 0;
        for (int v : to_eliminate) {
            std::set<int> nbrs;
            for (const detail::Factor& f : factors)
                if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
                    nbrs.insert(f.vars.begin(), f.vars.end());
            nbrs.erase(v);
            const std::size_t deg = nbrs.size();
            if (best < 0 || deg < best_degree ||
                (deg == best_degree && bn.dag().nodes[v].name < bn.dag().nodes[best].name)) {
                best = v;
                best_degree = deg;
            }
        }
        detail::Factor product = detail::Factor::unit();
        std::vector<detail::Factor> rest;
        for (detail::Factor& f : factors) {
            if (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end())
                product = detail::Factor::multiply(product, f);
            else
                rest.push_back(std::move(f));
        }
        rest.push_back(product.sum_out(best));
        factors = std::move(rest);
        to_eliminate.erase(best);
    }

    detail::Factor result = detail::Factor::unit();
    for (const detail::Factor& f : factors) result = detail::Factor::multiply(result, f);
    double normalizer = 0.0;
    for (double p : result.table) normalizer += p;
    if (normalizer <= 0.0) return {0.0, true};
    if (result.vars.empty())  // target was disconnected by evidence reduction
        throw ContractError("query: target eliminated unexpectedly");
    return {result.table[target_value] / normalizer, false};
}

inline QueryResult query_probability_ex(const DiscreteBayesNet& bn, const std::string& target,
                                        int target_value,
                                        const std::vector<std::pair<std::string, int>>& evidence) {
    const int t = bn.index_of(target);
    if (t < 0) throw ConfigError("query: unknown target " + target);
    Evidence ev;
    for (const auto& [name, value] : evidence) {
        const int n = bn.index_of(name);
        if (n < 0) throw ConfigError("query: unknown evidence node " + name);
        ev.set(n, value);
    }
    return query_probability_ex(bn, t, target_value, ev);
}

inline double query_probability(const DiscreteBayesNet& bn, const std::string& target,
                                int target_value,
                                const std::vector<std::pair<std::string, int>>& evidence) {
    return query_probability_ex(bn, target, target_value, evidence).probability;
}

// ---- serialization ----------------------------------------------------------

inline nlohmann::json bn_to_json(const DiscreteBayesNet& bn) {
    nlohmann::json j = dag_to_json(bn.dag());
    nlohmann::json domains = nlohmann::json::object();
    for (int v = 0; v < bn.n(); ++v) {
        std::vector<int> values(bn.cardinality(v));
        for (int k = 0; k < bn.cardinality(v); ++k) values[k] = k;
        domains[bn.dag().nodes[v].name] = values;
    }
    nlohmann::json cpds = nlohmann::json::object();
    for (int v = 0; v < bn.n(); ++v) {
        const auto& c = bn.cpd(v);
        nlohmann::json parents = nlohmann::json::array();
        for (int p : c.parents) parents.push_back(bn.dag().nodes[p].name);
        const int card = bn.cardinality(v);
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r * card < c.table.size(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int k = 0; k < card; ++k) row.push_back(c.table[r * card + k]);
            rows.push_back(row);
        }
        cpds[bn.dag().nodes[v].name] = {{"parents", parents}, {"table", rows}};
    }
    j["domains"] = domains;
    j["cpds"] = cpds;
    return j;
}

inline DiscreteBayesNet bn_from_json(const nlohmann::json& j) {
    CausalDag dag = dag_from_json(j);
    const int d = dag.n();
    std::vector<int> cards(d);
    for (int v = 0; v < d; ++v) cards[v] = static_cast<int>(j.at("domains").at(dag.nodes[v].name).size());
    std::vector<DiscreteBayesNet::Cpd> cpds(d);
    for (int v = 0; v < d; ++v) {
        const auto& jc = j.at("cpds").at(dag.nodes[v].name);
        DiscreteBayesNet::Cpd c;
        for (const auto& p : jc.at("parents")) {
            const int pi = dag.index_of(p);
            if (pi < 0) throw ConfigError("bn json: unknown parent " + std::string(p));
            c.parents.push_back(pi);
        }
        for (const auto& row : jc.at("table"))
            for (const auto& p : row) c.table.push_back(p);
        cpds[v] = std::move(c);
    }
    DiscreteBayesNet bn(std::move(dag), std::move(cards), std::move(cpds));
    bn.validate();
    return bn;
}

inline void save_bn(const DiscreteBayesNet& bn, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("bn: cannot write " + path);
    out << bn_to_json(bn).dump(2) << '\n';
}

inline DiscreteBayesNet load_bn(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("bn: cannot open " + path);
    return bn_from_json(nlohmann::json::parse(in));
}

}  // namespace causalq
