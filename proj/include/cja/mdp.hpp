#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "cja/graph.hpp"
#include "cja/terrain.hpp"

namespace cja {

// Compiled decision process over an attack graph. States are the graph's
// vertices, actions its edges. Immutable after compile_mdp; safe to share
// read-only across concurrent learners.
//
// Dynamics: taking an action succeeds with success_prob, moving the agent
// along the edge and granting transit_reward plus the destination's shaping
// value plus the terminal bonus when the destination is the goal. On failure
// the agent stays in place and receives 0. The goal is absorbing.
class Mdp {
public:
    struct OutAction {
        int dst = 0;
        std::size_t dst_index = 0;
        double success_prob = 1.0;  // in (0,1]
        double transit_reward = 0.0;
    };

    static constexpr double kTerminalBonus = 100.0;

    // Builds an Mdp from explicit dynamics instead of a graph compile; used
    // for hand-constructed processes (forced probabilities, bespoke rewards).
    // state_ids must be sorted and unique, each action list sorted by
    // strictly increasing dst, probabilities in (0,1], goal present.
    // OutAction::dst_index is computed here and may be left 0 by the caller.
    static Mdp from_parts(std::vector<int> state_ids,
                          std::vector<std::vector<OutAction>> actions,
                          std::vector<double> shaping,
                          std::vector<int> dfs_path, int goal,
                          double discount);

    const std::vector<int>& state_ids() const noexcept { return state_ids_; }
    std::size_t num_states() const noexcept { return state_ids_.size(); }

    std::size_t index_of(int state_id) const;
    int state_id(std::size_t index) const { return state_ids_[index]; }
    bool has_state(int state_id) const noexcept {
        return index_.count(state_id) != 0;
    }

    // Admissible actions of a state, sorted by destination id.
    const std::vector<OutAction>& actions(std::size_t index) const {
        return actions_[index];
    }
    const std::vector<OutAction>& actions_of(int state_id) const {
        return actions_[index_of(state_id)];
    }

    double shaping(std::size_t index) const { return shaping_[index]; }
    double shaping_of(int state_id) const {
        return shaping_[index_of(state_id)];
    }

    int goal() const noexcept { return goal_; }
    std::size_t goal_index() const noexcept { return goal_index_; }
    double discount() const noexcept { return discount_; }
    double terminal_bonus() const noexcept { return kTerminalBonus; }

    // The deterministic DFS path the shaping gradient follows.
    const std::vector<int>& dfs_reference() const noexcept {
        return dfs_path_;
    }

    // Reward granted on arriving at the state with this index.
    double arrival_reward(std::size_t index) const {
        return shaping_[index] +
               (index == goal_index_ ? kTerminalBonus : 0.0);
    }

private:
    friend Mdp compile_mdp(const AttackGraph&, int, int,
                           const TerrainConfig&);

    std::vector<int> state_ids_;  // sorted vertex ids
    std::unordered_map<int, std::size_t> index_;
    std::vector<std::vector<OutAction>> actions_;
    std::vector<double> shaping_;
    std::vector<int> dfs_path_;
    int goal_ = 0;
    std::size_t goal_index_ = 0;
    double discount_ = 0.9;
};

// Depth-first search path from `initial` to `goal`, expanding neighbors in
// ascending destination-id order. Deterministic. Throws Unreachable when no
// directed path exists, UnknownVertex for missing endpoints.
std::vector<int> dfs_reference_path(const AttackGraph& graph, int initial,
                                    int goal);

// Shaping reward of a node given the DFS reference path: linear from 0 at
// the path start to 100 at the goal (100 for a single-node path); 0 for
// nodes off the path.
double shaping_value(int node, const std::vector<int>& dfs_path);

// Compiles graph + endpoints + terrain into an Mdp. Throws UnknownVertex or
// Unreachable.
Mdp compile_mdp(const AttackGraph& graph, int initial, int goal,
                const TerrainConfig& config);

} // namespace cja
