#pragma once

#include <vector>

namespace cja {

// One learned attack path: a greedy policy rollout from an initial node to a
// terminal node inside a crown jewel's 2-hop network. `reward` is the plan
// reward: accumulated transit rewards plus shaping along the path plus the
// terminal bonus if the goal was reached, assuming every transition succeeds.
struct AttackPath {
    int initial = 0;
    int terminal = 0;
    std::vector<int> vertices;
    int hops = 0;
    double reward = 0.0;

    bool operator==(const AttackPath&) const = default;
};

} // namespace cja
