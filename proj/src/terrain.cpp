#include "cja/terrain.hpp"

namespace cja {

void validate(const TerrainConfig& config) {
    for (const auto& [service, multiplier] : config.firewall_multipliers) {
        if (!(multiplier > 0.0 && multiplier <= 1.0))
            throw Error("bad_config",
                        std::string("firewall multiplier for ") +
                            to_string(service) + " must lie in (0,1]");
    }
    if (!(config.discount > 0.0 && config.discount < 1.0))
        throw Error("bad_config", "discount must lie in (0,1)");
}

double firewall_multiplier(const TerrainConfig& config, Service service) {
    auto it = config.firewall_multipliers.find(service);
    return it == config.firewall_multipliers.end() ? 0.5 : it->second;
}

} // namespace cja
