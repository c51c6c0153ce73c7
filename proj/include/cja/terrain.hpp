#pragma once

#include <map>

#include "cja/graph.hpp"

namespace cja {

// Terrain parameters for MDP compilation. Firewalls act as obstacles:
// crossing one downscales the transition success probability by the
// per-protocol multiplier.
struct TerrainConfig {
    std::map<Service, double> firewall_multipliers = {
        {Service::Ftp, 0.5},  {Service::Smtp, 0.5}, {Service::Http, 0.5},
        {Service::Ssh, 0.5},  {Service::None, 0.5},
    };
    double discount = 0.9;
};

// Throws Error("bad_config") when multipliers leave (0,1] or the discount
// leaves (0,1).
void validate(const TerrainConfig& config);

// Success probability of transitioning into a vertex of the given attack
// complexity: 0.9 / 0.6 / 0.3 for low / medium / high.
inline double complexity_to_probability(Complexity complexity) {
    switch (complexity) {
    case Complexity::Low: return 0.9;
    case Complexity::Medium: return 0.6;
    case Complexity::High: return 0.3;
    }
    return 0.6;
}

// Reward granted on successfully transitioning into a vertex with this
// annotation: base score plus a tenth of the exploitability score.
inline double transition_reward(const CvssAnnotation& target) {
    return target.base_score + target.exploitability_score / 10.0;
}

// Multiplier for the edge's service; 0.5 when the service has no entry.
double firewall_multiplier(const TerrainConfig& config, Service service);

// Downscales `prob` when the edge crosses a firewall; identity otherwise.
inline double apply_firewall_penalty(double prob, const Edge& edge,
                                     const TerrainConfig& config) {
    return edge.firewall ? prob * firewall_multiplier(config, edge.service)
                         : prob;
}

} // namespace cja
