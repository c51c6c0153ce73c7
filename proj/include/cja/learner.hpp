#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cja/mdp.hpp"
#include "cja/path.hpp"

namespace cja {

// Episodic Q-learning hyperparameters. Fields left unset derive from the
// MDP at train time: epsilon decays linearly over 80% of max_episodes and
// an episode is capped at 4x the number of states.
struct LearnerConfig {
    double learning_rate = 0.1;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::optional<int> epsilon_decay_episodes;
    int max_episodes = 5000;
    std::optional<int> max_steps_per_episode;
    int convergence_window = 50;
    double convergence_tolerance = 0.01;
    std::uint64_t seed = 0;
};

void validate(const LearnerConfig& config);

// Learned action-value function, defined exactly on the MDP's admissible
// state-action pairs. Rows follow the MDP's state indexing; columns follow
// each state's dst-sorted action list, so the greedy argmax tie-break
// (lowest destination id) is the first maximal column.
class QTable {
public:
    explicit QTable(const Mdp& mdp);

    double value(std::size_t state_index, std::size_t action_index) const {
        return q_[state_index][action_index];
    }
    std::uint64_t visits(std::size_t state_index,
                         std::size_t action_index) const {
        return visits_[state_index][action_index];
    }

    void update(std::size_t state_index, std::size_t action_index,
                double value) {
        q_[state_index][action_index] = value;
    }
    void count_visit(std::size_t state_index, std::size_t action_index) {
        ++visits_[state_index][action_index];
    }

    // Index of the greedy action, ties broken toward the lowest destination
    // id (the first maximal entry of the dst-sorted row). Empty optional
    // when the state has no actions.
    std::optional<std::size_t> greedy_action(std::size_t state_index) const;

    // max_a q(s,a); 0 for states without actions.
    double max_value(std::size_t state_index) const;

    bool operator==(const QTable&) const = default;

private:
    std::vector<std::vector<double>> q_;
    std::vector<std::vector<std::uint64_t>> visits_;
};

struct TrainResult {
    QTable qtable;
    std::vector<double> episode_returns;
    std::optional<int> converged_at;  // 1-based episode index

    bool operator==(const TrainResult&) const = default;
};

// Runs episodic epsilon-greedy Q-learning on the MDP from `initial` until
// the per-episode return converges or max_episodes is reached. Convergence:
// after episode e >= 2W the means of the two adjacent W-episode windows
// differ by less than convergence_tolerance relative to the earlier mean
// (with a floor of 1 on the denominator). Fully deterministic: the RNG is
// seeded from (config.seed, initial, goal).
// Throws UnknownVertex, Unreachable, or NoAdmissibleAction when a non-goal
// state on a trajectory has no outgoing action.
TrainResult train(const Mdp& mdp, int initial, const LearnerConfig& config);

// Deterministic greedy rollout from `initial` assuming every transition
// succeeds; a path is a plan, not a sample. Terminates at the goal; a
// repeated state or the |S| hop cap raises LoopDetected, signalling
// non-convergence. The returned reward is the plan reward: transit rewards
// plus shaping along the path plus the terminal bonus if the goal was
// reached.
AttackPath extract_path(const QTable& qtable, const Mdp& mdp, int initial);

// Exact optimal state values via synchronous Bellman backups over the
// stay-on-failure dynamics, iterated until the max change drops below
// `tolerance`. The goal is absorbing with value 0 after bonus collection.
// Returned values align with mdp.state_ids().
std::vector<double> value_iteration(const Mdp& mdp, double tolerance);

} // namespace cja
