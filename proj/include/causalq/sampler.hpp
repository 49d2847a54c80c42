#pragma once

#include <cstdint>
#include <string>

#include "causalq/features.hpp"
#include "causalq/rng.hpp"

namespace causalq {

/// Uniform random walk producing exactly `steps` transition records. The
/// environment is reset whenever an episode terminates or hits its step
/// budget. (env_id, steps, seed) fully determine the dataset bytes.
template <class Env>
Dataset random_walk(const Env& env, std::int64_t steps, std::uint64_t seed,
                    const FeatureSchema& schema, const std::string& env_id) {
    if (steps < 1) throw ConfigError("random_walk: steps must be >= 1");
    Dataset ds(schema, Provenance{env_id, steps, seed});
    Rng rng(seed);
    typename Env::State state = env.reset(rng);
    int episode_steps = 0;
    for (std::int64_t i = 0; i < steps; ++i) {
        const int action = rng.uniform_index(env.action_count());
        const Step<typename Env::State> result = env.step(state, action);
        ds.append(extract_features(env, state, action, result, schema));
        ++episode_steps;
        if (result.done || episode_steps >= env.max_steps()) {
            state = env.reset(rng);
            episode_steps = 0;
        } else {
            state = result.next;
        }
    }
    return ds;
}

}  // namespace causalq
