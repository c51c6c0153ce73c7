#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cja/analysis.hpp"
#include "cja/learner.hpp"
#include "cja/path.hpp"
#include "cja/terrain.hpp"

namespace cja {

// Serialization keeps key order fixed and numbers in shortest round-trip
// form, so equal inputs always produce byte-identical files.
nlohmann::ordered_json path_to_json(const AttackPath& path);
nlohmann::ordered_json report_to_json(const CjaReport& report);
nlohmann::ordered_json summary_to_json(const MultiCjSummary& summary);

// Config loaders accept a JSON object with any subset of the known keys;
// missing keys keep their defaults. Unknown keys raise Error("bad_config").
TerrainConfig terrain_from_json(const nlohmann::json& doc);
LearnerConfig learner_from_json(const nlohmann::json& doc);

// "episode,return" header, one row per episode, 1-based episode numbers.
std::string episode_returns_csv(const std::vector<double>& returns);

} // namespace cja
