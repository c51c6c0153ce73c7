#include "cja/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "cja/rng.hpp"

namespace cja {

void validate(const LearnerConfig& config) {
    if (!(config.learning_rate > 0.0 && config.learning_rate <= 1.0))
        throw Error("bad_config", "learning_rate must lie in (0,1]");
    if (config.epsilon_start < 0.0 || config.epsilon_start > 1.0 ||
        config.epsilon_end < 0.0 || config.epsilon_end > 1.0)
        throw Error("bad_config", "epsilon bounds must lie in [0,1]");
    if (config.epsilon_end > config.epsilon_start)
        throw Error("bad_config", "epsilon_end must not exceed epsilon_start");
    if (config.epsilon_decay_episodes && *config.epsilon_decay_episodes <= 0)
        throw Error("bad_config", "epsilon_decay_episodes must be positive");
    if (config.max_episodes <= 0)
        throw Error("bad_config", "max_episodes must be positive");
    if (config.max_steps_per_episode && *config.max_steps_per_episode <= 0)
        throw Error("bad_config", "max_steps_per_episode must be positive");
    if (config.convergence_window <= 0)
        throw Error("bad_config", "convergence_window must be positive");
    if (config.convergence_tolerance < 0.0)
        throw Error("bad_config", "convergence_tolerance must be >= 0");
}

QTable::QTable(const Mdp& mdp) {
    q_.resize(mdp.num_states());
    visits_.resize(mdp.num_states());
    for (std::size_t i = 0; i < mdp.num_states(); ++i) {
        q_[i].assign(mdp.actions(i).size(), 0.0);
        visits_[i].assign(mdp.actions(i).size(), 0);
    }
}

std::optional<std::size_t>
QTable::greedy_action(std::size_t state_index) const {
    const auto& row = q_[state_index];
    if (row.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t a = 1; a < row.size(); ++a)
        if (row[a] > row[best]) best = a;
    return best;
}

double QTable::max_value(std::size_t state_index) const {
    const auto& row = q_[state_index];
    if (row.empty()) return 0.0;
    return *std::max_element(row.begin(), row.end());
}

namespace {

bool goal_reachable(const Mdp& mdp, std::size_t from) {
    std::vector<bool> seen(mdp.num_states(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        if (s == mdp.goal_index()) return true;
        for (const auto& a : mdp.actions(s)) {
            if (!seen[a.dst_index]) {
                seen[a.dst_index] = true;
                stack.push_back(a.dst_index);
            }
        }
    }
    return false;
}

} // namespace

TrainResult train(const Mdp& mdp, int initial, const LearnerConfig& config) {
    validate(config);
    const std::size_t start = mdp.index_of(initial);
    if (!goal_reachable(mdp, start)) throw Unreachable(initial, mdp.goal());

    const double alpha = config.learning_rate;
    const double gamma = mdp.discount();
    const int max_episodes = config.max_episodes;
    const int decay = config.epsilon_decay_episodes.value_or(
        std::max(1, (max_episodes * 4) / 5));
    const int max_steps = config.max_steps_per_episode.value_or(
        static_cast<int>(4 * mdp.num_states()));
    const int window = config.convergence_window;

    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(initial),
                        static_cast<std::uint64_t>(mdp.goal())));

    TrainResult result{QTable(mdp), {}, std::nullopt};
    QTable& q = result.qtable;
    auto& returns = result.episode_returns;
    returns.reserve(static_cast<std::size_t>(max_episodes));

    for (int episode = 1; episode <= max_episodes; ++episode) {
        const double frac =
            std::min(1.0, static_cast<double>(episode - 1) / decay);
        const double epsilon =
            config.epsilon_start +
            (config.epsilon_end - config.epsilon_start) * frac;

        std::size_t s = start;
        double episode_return =
            mdp.shaping(s) + (s == mdp.goal_index() ? mdp.terminal_bonus() : 0.0);

        for (int step = 0; step < max_steps && s != mdp.goal_index(); ++step) {
            const auto& actions = mdp.actions(s);
            if (actions.empty()) throw NoAdmissibleAction(mdp.state_id(s));

            std::size_t ai;
            if (rng.chance(epsilon)) {
                ai = static_cast<std::size_t>(rng.bounded(actions.size()));
            } else {
                ai = *q.greedy_action(s);
            }
            const Mdp::OutAction& action = actions[ai];
            q.count_visit(s, ai);

            double target;
            double reward;
            std::size_t next;
            if (rng.chance(action.success_prob)) {
                next = action.dst_index;
                reward = action.transit_reward + mdp.arrival_reward(next);
                target = reward + (next == mdp.goal_index()
                                       ? 0.0
                                       : gamma * q.max_value(next));
            } else {
                next = s;  // failed transition: stay in place
                reward = 0.0;
                target = gamma * q.max_value(s);
            }
            q.update(s, ai,
                     q.value(s, ai) + alpha * (target - q.value(s, ai)));
            episode_return += reward;
            s = next;
        }
        returns.push_back(episode_return);

        if (initial == mdp.goal()) {
            // Degenerate zero-step episode; nothing further to learn.
            result.converged_at = 1;
            break;
        }
        const int e = episode;
        if (e >= 2 * window) {
            const auto last = returns.end();
            const double recent =
                std::accumulate(last - window, last, 0.0) / window;
            const double previous =
                std::accumulate(last - 2 * window, last - window, 0.0) /
                window;
            if (std::abs(recent - previous) <=
                config.convergence_tolerance *
                    std::max(std::abs(previous), 1.0)) {
                result.converged_at = e;
                break;
            }
        }
    }
    return result;
}

AttackPath extract_path(const QTable& qtable, const Mdp& mdp, int initial) {
    std::size_t s = mdp.index_of(initial);

    AttackPath path;
    path.initial = initial;
    path.vertices.push_back(initial);
    path.reward = mdp.shaping(s) +
                  (s == mdp.goal_index() ? mdp.terminal_bonus() : 0.0);

    std::unordered_set<std::size_t> visited{s};
    while (s != mdp.goal_index()) {
        if (path.vertices.size() > mdp.num_states())
            throw LoopDetected(path.vertices);
        const auto& actions = mdp.actions(s);
        if (actions.empty()) throw NoAdmissibleAction(mdp.state_id(s));

        const std::size_t ai = *qtable.greedy_action(s);
        const Mdp::OutAction& action = actions[ai];
        if (visited.count(action.dst_index)) {
            auto cycle = path.vertices;
            cycle.push_back(action.dst);
            throw LoopDetected(cycle);
        }
        path.reward += action.transit_reward + mdp.arrival_reward(action.dst_index);
        path.vertices.push_back(action.dst);
        visited.insert(action.dst_index);
        s = action.dst_index;
    }
    path.terminal = mdp.state_id(s);
    path.hops = static_cast<int>(path.vertices.size()) - 1;
    return path;
}

std::vector<double> value_iteration(const Mdp& mdp, double tolerance) {
    if (!(tolerance > 0.0))
        throw Error("bad_config", "tolerance must be positive");

    const double gamma = mdp.discount();
    std::vector<double> v(mdp.num_states(), 0.0);
    std::vector<double> next(mdp.num_states(), 0.0);

    for (;;) {
        double delta = 0.0;
        for (std::size_t s = 0; s < mdp.num_states(); ++s) {
            if (s == mdp.goal_index()) {
                next[s] = 0.0;
                continue;
            }
            double best = 0.0;  // states without actions keep value 0
            const auto& actions = mdp.actions(s);
            for (std::size_t a = 0; a < actions.size(); ++a) {
                const auto& act = actions[a];
                const double arrival =
                    act.transit_reward + mdp.arrival_reward(act.dst_index);
                const double value =
                    act.success_prob * (arrival + gamma * v[act.dst_index]) +
                    (1.0 - act.success_prob) * gamma * v[s];
                if (a == 0 || value > best) best = value;
            }
            next[s] = best;
            delta = std::max(delta, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (delta < tolerance) break;
    }
    return v;
}

} // namespace cja
