#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "causalq/common.hpp"
#include "causalq/env_common.hpp"
#include "causalq/graph_env.hpp"
#include "causalq/grid_env.hpp"

#include <json.hpp>

namespace causalq {

enum class NodeRole : std::uint8_t { State, Action, Goal };

inline const char* to_string(NodeRole r) {
    switch (r) {
        case NodeRole::State: return "state";
        case NodeRole::Action: return "action";
        default: return "goal";
    }
}

inline NodeRole role_from_string(const std::string& s) {
    if (s == "state") return NodeRole::State;
    if (s == "action") return NodeRole::Action;
    if (s == "goal") return NodeRole::Goal;
    throw ConfigError("unknown node role: " + s);
}

struct SchemaColumn {
    std::string name;
    NodeRole role = NodeRole::State;
    int cardinality = 2;
    friend bool operator==(const SchemaColumn&, const SchemaColumn&) = default;
};

/// Column layout of the sampled transition table.
///
/// The core tier is identical for both environments, which is what lets a
/// structure discovered on the grid be reused on road graphs. The positional
/// tier appends the grid's taxi coordinates as categorical columns.
struct FeatureSchema {
    enum class Tier { Core, GridPositional };

    Tier tier = Tier::Core;
    std::vector<SchemaColumn> columns;

    int n_cols() const { return static_cast<int>(columns.size()); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < n_cols(); ++i)
            if (columns[i].name == name) return i;
        return -1;
    }

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

inline FeatureSchema make_core_schema() {
    FeatureSchema s;
    s.tier = FeatureSchema::Tier::Core;
    s.columns = {
        {"taxi_on_pax_loc", NodeRole::State, 2}, {"taxi_on_dest", NodeRole::State, 2},
        {"pax_in_taxi", NodeRole::State, 2},     {"action_move", NodeRole::Action, 2},
        {"action_pickup", NodeRole::Action, 2},  {"action_dropoff", NodeRole::Action, 2},
        {"pax_in_taxi_next", NodeRole::Goal, 2}, {"dropoff_next", NodeRole::Goal, 2},
    };
    return s;
}

inline FeatureSchema make_grid_schema(int rows, int cols) {
    FeatureSchema s = make_core_schema();
    s.tier = FeatureSchema::Tier::GridPositional;
    s.columns.push_back({"taxi_row", NodeRole::State, rows});
    s.columns.push_back({"taxi_col", NodeRole::State, cols});
    return s;
}

/// One sampled transition: pre-step feature values, the action indicator,
/// post-step goal indicators, and the raw reward.
struct TransitionRecord {
    std::vector<int> values;  // aligned with FeatureSchema::columns
    double reward = 0.0;
};

struct Provenance {
    std::string env_id;
    std::int64_t steps = 0;
    std::uint64_t seed = 0;
};

/// Tabular corpus for structure discovery and CPD fitting. Rows are stored
/// flat; rewards ride along but are not schema nodes.
class Dataset {
public:
    Dataset() = default;
    Dataset(FeatureSchema schema, Provenance prov)
        : schema_(std::move(schema)), prov_(std::move(prov)) {}

    const FeatureSchema& schema() const { return schema_; }
    const Provenance& provenance() const { return prov_; }
    std::int64_t n_rows() const { return static_cast<std::int64_t>(rewards_.size()); }

    int value(std::int64_t row, int col) const { return values_[row * schema_.n_cols() + col]; }
    double reward(std::int64_t row) const { return rewards_[row]; }

    void append(const TransitionRecord& rec) {
        if (static_cast<int>(rec.values.size()) != schema_.n_cols())
            throw ContractError("dataset: record width does not match schema");
        values_.insert(values_.end(), rec.values.begin(), rec.values.end());
        rewards_.push_back(rec.reward);
    }

    /// Column by name as a contiguous copy (used by fitting code).
    std::vector<int> column(const std::string& name) const {
        const int c = schema_.index_of(name);
        if (c < 0) throw ConfigError("dataset: no column named " + name);
        std::vector<int> out(n_rows());
        for (std::int64_t r = 0; r < n_rows(); ++r) out[r] = value(r, c);
        return out;
    }

    void write_csv(std::ostream& out) const {
        for (int c = 0; c < schema_.n_cols(); ++c) out << (c ? "," : "") << schema_.columns[c].name;
        out << ",reward\n";
        for (std::int64_t r = 0; r < n_rows(); ++r) {
            for (int c = 0; c < schema_.n_cols(); ++c) out << (c ? "," : "") << value(r, c);
            out << ',' << fmt_g17(rewards_[r]) << '\n';
        }
    }

    nlohmann::json meta_json() const {
        nlohmann::json cols = nlohmann::json::array();
        for (const SchemaColumn& c : schema_.columns)
            cols.push_back({{"name", c.name}, {"role", to_string(c.role)}, {"cardinality", c.cardinality}});
        return {{"env", prov_.env_id},
                {"steps", prov_.steps},
                {"seed", prov_.seed},
                {"tier", schema_.tier == FeatureSchema::Tier::Core ? "core" : "grid_positional"},
                {"columns", cols}};
    }

    /// Writes "<path>" (CSV) and "<path>.meta.json" (schema + provenance).
    void save(const std::string& path) const {
        std::ofstream csv(path, std::ios::binary);
        if (!csv) throw ConfigError("dataset: cannot write " + path);
        write_csv(csv);
        std::ofstream meta(path + ".meta.json", std::ios::binary);
        meta << meta_json().dump(2) << '\n';
    }

    static Dataset load(const std::string& path) {
        std::ifstream meta_in(path + ".meta.json");
        if (!meta_in) throw ConfigError("dataset: missing sidecar " + path + ".meta.json");
        nlohmann::json meta = nlohmann::json::parse(meta_in);
        FeatureSchema schema;
        schema.tier = meta.at("tier") == "core" ? FeatureSchema::Tier::Core
                                                : FeatureSchema::Tier::GridPositional;
        for (const auto& c : meta.at("columns"))
            schema.columns.push_back({c.at("name"), role_from_string(c.at("role")),
                                      c.at("cardinality")});
        Provenance prov{meta.at("env"), meta.at("steps"), meta.at("seed")};
        Dataset ds(std::move(schema), std::move(prov));

        std::ifstream csv(path);
        if (!csv) throw ConfigError("dataset: cannot open " + path);
        std::string line;
        if (!std::getline(csv, line)) throw ConfigError("dataset: empty csv");
        TransitionRecord rec;
        rec.values.resize(ds.schema_.n_cols());
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string tok;
            for (int c = 0; c < ds.schema_.n_cols(); ++c) {
                if (!std::getline(ls, tok, ',')) throw ConfigError("dataset: short row");
                rec.values[c] = std::stoi(tok);
            }
            if (!std::getline(ls, tok, ',')) throw ConfigError("dataset: missing reward");
            rec.reward = std::stod(tok);
            ds.append(rec);
        }
        return ds;
    }

private:
    FeatureSchema schema_;
    Provenance prov_;
    std::vector<std::int32_t> values_;
    std::vector<double> rewards_;
};

namespace detail {

inline void put(TransitionRecord& rec, const FeatureSchema& schema, const std::string& name, int v) {
    const int c = schema.index_of(name);
    if (c < 0) throw ContractError("extract_features: schema lacks column " + name);
    rec.values[c] = v;
}

}  // namespace detail

/// Turns one transition into a row of the tabular dataset. State features are
/// pre-step values, goal indicators come from the post-step state.
template <class Env>
TransitionRecord extract_features(const Env& env, const typename Env::State& state, int action,
                                  const Step<typename Env::State>& result,
                                  const FeatureSchema& schema) {
    if (schema.tier == FeatureSchema::Tier::GridPositional && !std::is_same_v<Env, GridEnv>)
        throw ContractError("extract_features: positional tier is grid-only");
    TransitionRecord rec;
    rec.values.assign(schema.n_cols(), 0);
    const CoreFeatures f = env.core_features(state);
    detail::put(rec, schema, "taxi_on_pax_loc", f.on_pax_loc ? 1 : 0);
    detail::put(rec, schema, "taxi_on_dest", f.on_dest ? 1 : 0);
    detail::put(rec, schema, "pax_in_taxi", f.aboard ? 1 : 0);
    detail::put(rec, schema, node_name(env.action_node(action)), 1);
    detail::put(rec, schema, "pax_in_taxi_next", env.core_features(result.next).aboard ? 1 : 0);
    detail::put(rec, schema, "dropoff_next", result.subgoal == SubGoal::Dropoff ? 1 : 0);
    if constexpr (std::is_same_v<Env, GridEnv>) {
        if (schema.tier == FeatureSchema::Tier::GridPositional) {
            detail::put(rec, schema, "taxi_row", state.taxi_row);
            detail::put(rec, schema, "taxi_col", state.taxi_col);
        }
    }
    rec.reward = result.reward;
    return rec;
}

}  // namespace causalq
