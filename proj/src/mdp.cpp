#include "cja/mdp.hpp"

#include <algorithm>

namespace cja {

std::size_t Mdp::index_of(int state_id) const {
    auto it = index_.find(state_id);
    if (it == index_.end()) throw UnknownVertex(state_id);
    return it->second;
}

Mdp Mdp::from_parts(std::vector<int> state_ids,
                    std::vector<std::vector<OutAction>> actions,
                    std::vector<double> shaping, std::vector<int> dfs_path,
                    int goal, double discount) {
    if (state_ids.empty())
        throw Error("bad_config", "an Mdp needs at least one state");
    if (actions.size() != state_ids.size() ||
        shaping.size() != state_ids.size())
        throw Error("bad_config",
                    "actions and shaping must cover every state");
    if (!(discount > 0.0 && discount < 1.0))
        throw Error("bad_config", "discount must lie in (0,1)");

    Mdp mdp;
    mdp.state_ids_ = std::move(state_ids);
    for (std::size_t i = 0; i < mdp.state_ids_.size(); ++i) {
        if (i > 0 && mdp.state_ids_[i - 1] >= mdp.state_ids_[i])
            throw Error("bad_config", "state ids must be sorted and unique");
        mdp.index_[mdp.state_ids_[i]] = i;
    }
    auto goal_it = mdp.index_.find(goal);
    if (goal_it == mdp.index_.end()) throw UnknownVertex(goal);

    for (std::size_t s = 0; s < actions.size(); ++s) {
        int prev_dst = 0;
        bool first = true;
        for (OutAction& a : actions[s]) {
            auto it = mdp.index_.find(a.dst);
            if (it == mdp.index_.end()) throw UnknownVertex(a.dst);
            a.dst_index = it->second;
            if (!first && a.dst <= prev_dst)
                throw Error("bad_config",
                            "action lists must be sorted by dst");
            prev_dst = a.dst;
            first = false;
            if (!(a.success_prob > 0.0 && a.success_prob <= 1.0))
                throw Error("bad_config",
                            "success probabilities must lie in (0,1]");
        }
    }

    mdp.actions_ = std::move(actions);
    mdp.shaping_ = std::move(shaping);
    mdp.dfs_path_ = std::move(dfs_path);
    mdp.goal_ = goal;
    mdp.goal_index_ = goal_it->second;
    mdp.discount_ = discount;
    return mdp;
}

std::vector<int> dfs_reference_path(const AttackGraph& graph, int initial,
                                    int goal) {
    graph.index_of(initial);
    graph.index_of(goal);
    if (initial == goal) return {initial};

    // Iterative DFS keeping the current stack as the candidate path.
    // Out-edge lists are dst-sorted, so expansion order is ascending id.
    struct Frame {
        int vertex;
        std::size_t next = 0;
    };
    std::vector<Frame> stack{{initial}};
    std::vector<bool> visited(graph.vertices().size(), false);
    visited[graph.index_of(initial)] = true;

    while (!stack.empty()) {
        Frame& top = stack.back();
        const auto& out = graph.out_edges(top.vertex);
        if (top.next >= out.size()) {
            stack.pop_back();
            continue;
        }
        const int next = out[top.next++]->dst;
        const std::size_t next_index = graph.index_of(next);
        if (visited[next_index]) continue;
        visited[next_index] = true;
        stack.push_back({next});
        if (next == goal) {
            std::vector<int> path;
            path.reserve(stack.size());
            for (const Frame& f : stack) path.push_back(f.vertex);
            return path;
        }
    }
    throw Unreachable(initial, goal);
}

double shaping_value(int node, const std::vector<int>& dfs_path) {
    const auto it = std::find(dfs_path.begin(), dfs_path.end(), node);
    if (it == dfs_path.end()) return 0.0;
    if (dfs_path.size() == 1) return 100.0;
    const auto k = static_cast<double>(it - dfs_path.begin());
    return 100.0 * k / static_cast<double>(dfs_path.size() - 1);
}

Mdp compile_mdp(const AttackGraph& graph, int initial, int goal,
                const TerrainConfig& config) {
    validate(config);
    graph.index_of(initial);
    graph.index_of(goal);

    Mdp mdp;
    mdp.goal_ = goal;
    mdp.discount_ = config.discount;
    mdp.dfs_path_ = dfs_reference_path(graph, initial, goal);

    mdp.state_ids_.reserve(graph.vertices().size());
    for (const Vertex& v : graph.vertices()) mdp.state_ids_.push_back(v.id);
    for (std::size_t i = 0; i < mdp.state_ids_.size(); ++i)
        mdp.index_[mdp.state_ids_[i]] = i;
    mdp.goal_index_ = mdp.index_.at(goal);

    mdp.actions_.resize(mdp.state_ids_.size());
    for (std::size_t i = 0; i < mdp.state_ids_.size(); ++i) {
        const int id = mdp.state_ids_[i];
        const auto& out = graph.out_edges(id);
        auto& actions = mdp.actions_[i];
        actions.reserve(out.size());
        for (const Edge* e : out) {
            const CvssAnnotation& target = graph.effective_annotation(e->dst);
            Mdp::OutAction a;
            a.dst = e->dst;
            a.dst_index = mdp.index_.at(e->dst);
            a.success_prob = apply_firewall_penalty(
                complexity_to_probability(target.complexity), *e, config);
            a.transit_reward = transition_reward(target);
            actions.push_back(a);
        }
    }

    mdp.shaping_.assign(mdp.state_ids_.size(), 0.0);
    for (std::size_t k = 0; k < mdp.dfs_path_.size(); ++k) {
        const std::size_t i = mdp.index_.at(mdp.dfs_path_[k]);
        mdp.shaping_[i] =
            mdp.dfs_path_.size() == 1
                ? 100.0
                : 100.0 * static_cast<double>(k) /
                      static_cast<double>(mdp.dfs_path_.size() - 1);
    }
    return mdp;
}

} // namespace cja
