#pragma once

#include <cstdint>
#include <string>

namespace causalq {

/// Sub-goal event reported by a transition, if any.
enum class SubGoal : std::uint8_t { None, PaxInTaxi, Dropoff };

inline const char* to_string(SubGoal g) {
    switch (g) {
        case SubGoal::PaxInTaxi: return "pax_in_taxi";
        case SubGoal::Dropoff: return "dropoff";
        default: return "none";
    }
}

/// Which causal-graph action node an environment action maps onto.
/// All movement actions share one node so the discovered structure transfers
/// between the grid and graph environments.
enum class ActionNode : std::uint8_t { Move, Pickup, Dropoff };

inline const char* node_name(ActionNode n) {
    switch (n) {
        case ActionNode::Move: return "action_move";
        case ActionNode::Pickup: return "action_pickup";
        default: return "action_dropoff";
    }
}

/// Outcome of applying one action.
template <class State>
struct Step {
    State next;
    double reward = 0.0;
    bool done = false;
    SubGoal subgoal = SubGoal::None;
    /// Distance actually travelled this step (0 for blocked moves and
    /// pickup/dropoff attempts); the route-length bookkeeping of evaluators.
    double distance = 0.0;
};

/// The transferable state-feature triple shared by both environments.
struct CoreFeatures {
    bool on_pax_loc = false;  // at the waiting passenger's depot/node
    bool on_dest = false;     // at the destination depot/node
    bool aboard = false;      // passenger picked up
};

}  // namespace causalq
