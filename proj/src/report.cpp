#include "cja/report.hpp"

#include <sstream>

#include "cja/errors.hpp"

namespace cja {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json path_to_json(const AttackPath& path) {
    ordered_json out;
    out["initial"] = path.initial;
    out["terminal"] = path.terminal;
    out["vertices"] = path.vertices;
    out["hops"] = path.hops;
    out["reward"] = path.reward;
    return out;
}

ordered_json report_to_json(const CjaReport& report) {
    ordered_json out;
    out["crown_jewel"] = report.crown_jewel;
    out["two_hop"] = report.two_hop;
    out["best_initial"] =
        report.best_initial ? ordered_json(*report.best_initial) : nullptr;
    out["best_terminal"] =
        report.best_terminal ? ordered_json(*report.best_terminal) : nullptr;
    out["most_visited"] =
        report.most_visited ? ordered_json(*report.most_visited) : nullptr;
    out["most_visited_proportion"] =
        report.most_visited ? ordered_json(report.most_visited_proportion)
                            : nullptr;
    out["paths"] = ordered_json::array();
    for (const AttackPath& p : report.paths)
        out["paths"].push_back(path_to_json(p));
    out["failures"] = ordered_json::array();
    for (const PairFailure& f : report.failures) {
        ordered_json row;
        row["initial"] = f.initial;
        row["terminal"] = f.terminal;
        row["error"] = f.error;
        out["failures"].push_back(row);
    }
    return out;
}

ordered_json summary_to_json(const MultiCjSummary& summary) {
    ordered_json out;
    out["crown_jewels"] = ordered_json::array();
    for (const CjaReport& r : summary.reports) {
        ordered_json row;
        row["crown_jewel"] = r.crown_jewel;
        row["best_initial"] =
            r.best_initial ? ordered_json(*r.best_initial) : nullptr;
        row["best_terminal"] =
            r.best_terminal ? ordered_json(*r.best_terminal) : nullptr;
        row["most_visited"] =
            r.most_visited ? ordered_json(*r.most_visited) : nullptr;
        row["most_visited_proportion"] =
            r.most_visited ? ordered_json(r.most_visited_proportion) : nullptr;
        row["path_count"] = r.paths.size();
        row["failure_count"] = r.failures.size();
        out["crown_jewels"].push_back(row);
    }
    out["global_best_initial"] = summary.global_best_initial
                                     ? ordered_json(*summary.global_best_initial)
                                     : nullptr;
    return out;
}

namespace {

[[noreturn]] void bad_config(const std::string& detail) {
    throw Error("bad_config", "bad config: " + detail);
}

void expect_keys(const json& doc, std::initializer_list<const char*> known) {
    if (!doc.is_object())
        bad_config("expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            bad_config("unknown key \"" + key + "\"");
    }
}

template <typename T>
void read_into(const json& doc, const char* key, T& field) {
    if (!doc.contains(key))
        return;
    try {
        field = doc.at(key).get<T>();
    } catch (const json::exception&) {
        bad_config(std::string("bad value for \"") + key + "\"");
    }
}

template <typename T>
void read_into(const json& doc, const char* key, std::optional<T>& field) {
    if (!doc.contains(key) || doc.at(key).is_null())
        return;
    try {
        field = doc.at(key).get<T>();
    } catch (const json::exception&) {
        bad_config(std::string("bad value for \"") + key + "\"");
    }
}

} // namespace

TerrainConfig terrain_from_json(const json& doc) {
    TerrainConfig config;
    expect_keys(doc, {"discount", "firewall_multipliers"});
    read_into(doc, "discount", config.discount);
    if (doc.contains("firewall_multipliers")) {
        const json& table = doc.at("firewall_multipliers");
        if (!table.is_object())
            bad_config("firewall_multipliers must be an object");
        for (const auto& [name, value] : table.items()) {
            Service service;
            try {
                service = service_from_string(name);
            } catch (const Error&) {
                bad_config("unknown service \"" + name + "\"");
            }
            if (!value.is_number())
                bad_config("multiplier for \"" + name + "\" must be a number");
            config.firewall_multipliers[service] = value.get<double>();
        }
    }
    validate(config);
    return config;
}

LearnerConfig learner_from_json(const json& doc) {
    LearnerConfig config;
    expect_keys(doc, {"learning_rate", "epsilon_start", "epsilon_end",
                      "epsilon_decay_episodes", "max_episodes",
                      "max_steps_per_episode", "convergence_window",
                      "convergence_tolerance", "seed"});
    read_into(doc, "learning_rate", config.learning_rate);
    read_into(doc, "epsilon_start", config.epsilon_start);
    read_into(doc, "epsilon_end", config.epsilon_end);
    read_into(doc, "epsilon_decay_episodes", config.epsilon_decay_episodes);
    read_into(doc, "max_episodes", config.max_episodes);
    read_into(doc, "max_steps_per_episode", config.max_steps_per_episode);
    read_into(doc, "convergence_window", config.convergence_window);
    read_into(doc, "convergence_tolerance", config.convergence_tolerance);
    read_into(doc, "seed", config.seed);
    validate(config);
    return config;
}

std::string episode_returns_csv(const std::vector<double>& returns) {
    std::ostringstream out;
    out << "episode,return\n";
    for (std::size_t i = 0; i < returns.size(); ++i)
        out << (i + 1) << ',' << json(returns[i]).dump() << '\n';
    return out.str();
}

} // namespace cja
