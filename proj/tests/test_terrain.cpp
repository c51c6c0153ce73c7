#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "cja/errors.hpp"
#include "cja/mdp.hpp"
#include "cja/rng.hpp"
#include "cja/synthetic.hpp"
#include "cja/terrain.hpp"

using namespace cja;

namespace {

// All vertices share one annotation; ids run 1..n.
AttackGraph simple_graph(int n, const std::vector<std::pair<int, int>>& arcs,
                         CvssAnnotation annotation = {5.0, 5.0,
                                                      Complexity::Low}) {
    std::vector<Vertex> vertices;
    for (int id = 1; id <= n; ++id)
        vertices.push_back({id, "v" + std::to_string(id), VertexKind::Leaf,
                            annotation});
    std::vector<Edge> edges;
    for (auto [src, dst] : arcs) edges.push_back({src, dst});
    return AttackGraph::create(std::move(vertices), std::move(edges), {}, {});
}

// Independent oracle: recursive DFS expanding neighbors in ascending id
// order, mirroring the specified traversal rule with none of the library's
// machinery.
bool oracle_dfs(const AttackGraph& g, int at, int goal,
                std::set<int>& visited, std::vector<int>& path) {
    path.push_back(at);
    if (at == goal) return true;
    for (const Edge* e : g.out_edges(at)) {
        if (visited.count(e->dst)) continue;
        visited.insert(e->dst);
        if (oracle_dfs(g, e->dst, goal, visited, path)) return true;
        path.pop_back();
        // note: visited stays marked; DFS never re-enters an explored vertex
    }
    return false;
}

std::vector<int> oracle_dfs_path(const AttackGraph& g, int initial, int goal) {
    std::set<int> visited{initial};
    std::vector<int> path;
    // unwinding pushes/pops leave only the found path's prefix
    std::vector<int> result;
    if (oracle_dfs(g, initial, goal, visited, path)) result = path;
    return result;
}

} // namespace

TEST_CASE("complexity maps to the fixed probabilities") {
    CHECK(complexity_to_probability(Complexity::Low) == 0.9);
    CHECK(complexity_to_probability(Complexity::Medium) == 0.6);
    CHECK(complexity_to_probability(Complexity::High) == 0.3);
}

TEST_CASE("transition reward is base plus a tenth of exploitability") {
    CHECK(transition_reward({10.0, 10.0, Complexity::Low}) ==
          doctest::Approx(11.0).epsilon(1e-12));
    CHECK(transition_reward({0.0, 0.0, Complexity::Low}) == 0.0);
    CHECK(transition_reward({7.5, 3.9, Complexity::Low}) ==
          doctest::Approx(7.89).epsilon(1e-12));

    Rng rng(404);
    for (int i = 0; i < 1000; ++i) {
        CvssAnnotation a{rng.cvss_score(), rng.cvss_score(),
                         Complexity::Medium};
        const double expected = a.base_score + a.exploitability_score / 10.0;
        CHECK(std::abs(transition_reward(a) - expected) <= 1e-9);
    }
}

TEST_CASE("firewall penalty") {
    TerrainConfig config;
    Edge open{1, 2, Service::Ssh, false};
    Edge ssh_fw{1, 2, Service::Ssh, true};
    Edge ftp_fw{1, 2, Service::Ftp, true};

    CHECK(apply_firewall_penalty(0.9, open, config) == 0.9);
    CHECK(apply_firewall_penalty(0.9, ssh_fw, config) ==
          doctest::Approx(0.45).epsilon(1e-12));
    CHECK(apply_firewall_penalty(0.3, ftp_fw, config) ==
          doctest::Approx(0.15).epsilon(1e-12));

    config.firewall_multipliers[Service::Ssh] = 0.8;
    CHECK(apply_firewall_penalty(0.9, ssh_fw, config) ==
          doctest::Approx(0.72).epsilon(1e-12));

    config.firewall_multipliers.erase(Service::Ftp);
    CHECK(firewall_multiplier(config, Service::Ftp) == 0.5);
}

TEST_CASE("terrain config validation") {
    TerrainConfig config;
    CHECK_NOTHROW(validate(config));

    SUBCASE("zero multiplier") {
        config.firewall_multipliers[Service::Http] = 0.0;
        CHECK_THROWS_AS(validate(config), Error);
    }
    SUBCASE("multiplier above one") {
        config.firewall_multipliers[Service::Http] = 1.5;
        CHECK_THROWS_AS(validate(config), Error);
    }
    SUBCASE("discount out of range") {
        config.discount = 1.0;
        CHECK_THROWS_AS(validate(config), Error);
        config.discount = 0.0;
        CHECK_THROWS_AS(validate(config), Error);
    }
}

TEST_CASE("dfs reference path") {
    SUBCASE("chain") {
        AttackGraph g = simple_graph(3, {{1, 2}, {2, 3}});
        CHECK(dfs_reference_path(g, 1, 3) == std::vector<int>{1, 2, 3});
    }
    SUBCASE("diamond takes the ascending branch") {
        AttackGraph g = simple_graph(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
        CHECK(dfs_reference_path(g, 1, 4) == std::vector<int>{1, 2, 4});
        CHECK(dfs_reference_path(g, 1, 4) == oracle_dfs_path(g, 1, 4));
    }
    SUBCASE("unreachable") {
        AttackGraph g = simple_graph(3, {{1, 2}, {2, 3}});
        CHECK_THROWS_AS(dfs_reference_path(g, 3, 1), Unreachable);
    }
    SUBCASE("degenerate") {
        AttackGraph g = simple_graph(2, {{1, 2}});
        CHECK(dfs_reference_path(g, 1, 1) == std::vector<int>{1});
    }
    SUBCASE("matches the recursive oracle on random graphs") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            AttackGraph g = generate_synthetic(25, 40, 3, seed);
            const int initial = g.candidate_initial_nodes().front();
            const int goal = g.crown_jewels().front();
            const std::vector<int> oracle = oracle_dfs_path(g, initial, goal);
            if (oracle.empty()) {
                CHECK_THROWS_AS(dfs_reference_path(g, initial, goal),
                                Unreachable);
            } else {
                CHECK(dfs_reference_path(g, initial, goal) == oracle);
            }
        }
    }
}

TEST_CASE("shaping values interpolate along the path") {
    const std::vector<int> path{4, 9, 2, 7, 5};
    CHECK(shaping_value(2, path) == doctest::Approx(50.0));
    CHECK(shaping_value(5, path) == doctest::Approx(100.0));
    CHECK(shaping_value(4, path) == 0.0);
    CHECK(shaping_value(42, path) == 0.0);
    CHECK(shaping_value(3, {3}) == 100.0);
}

TEST_CASE("compile_mdp wires probabilities, rewards, and shaping") {
    SUBCASE("low complexity, open edge") {
        AttackGraph g =
            simple_graph(2, {{1, 2}}, {6.0, 8.0, Complexity::Low});
        Mdp mdp = compile_mdp(g, 1, 2, TerrainConfig{});
        const auto& actions = mdp.actions_of(1);
        REQUIRE(actions.size() == 1);
        CHECK(actions[0].success_prob == doctest::Approx(0.9));
        CHECK(actions[0].transit_reward == doctest::Approx(6.8));
        CHECK(mdp.shaping_of(1) == 0.0);
        CHECK(mdp.shaping_of(2) == 100.0);
        CHECK(mdp.arrival_reward(mdp.index_of(2)) == doctest::Approx(200.0));
        CHECK(mdp.discount() == doctest::Approx(0.9));
    }
    SUBCASE("firewall edge halves the probability") {
        std::vector<Vertex> vertices{
            {1, "a", VertexKind::Leaf, CvssAnnotation{5.0, 5.0,
                                                      Complexity::Low}},
            {2, "b", VertexKind::Leaf, CvssAnnotation{5.0, 5.0,
                                                      Complexity::Low}}};
        std::vector<Edge> edges{{1, 2, Service::Http, true}};
        AttackGraph g = AttackGraph::create(std::move(vertices),
                                            std::move(edges), {}, {});
        Mdp mdp = compile_mdp(g, 1, 2, TerrainConfig{});
        CHECK(mdp.actions_of(1)[0].success_prob ==
              doctest::Approx(0.45).epsilon(1e-12));
    }
    SUBCASE("goal equals initial") {
        AttackGraph g = simple_graph(2, {{1, 2}});
        Mdp mdp = compile_mdp(g, 2, 2, TerrainConfig{});
        CHECK(mdp.dfs_reference() == std::vector<int>{2});
        CHECK(mdp.shaping_of(2) == 100.0);
        CHECK(mdp.shaping_of(1) == 0.0);
    }
    SUBCASE("unknown endpoints and unreachable goals") {
        AttackGraph g = simple_graph(3, {{1, 2}, {2, 3}});
        CHECK_THROWS_AS(compile_mdp(g, 9, 3, TerrainConfig{}), UnknownVertex);
        CHECK_THROWS_AS(compile_mdp(g, 1, 9, TerrainConfig{}), UnknownVertex);
        CHECK_THROWS_AS(compile_mdp(g, 3, 1, TerrainConfig{}), Unreachable);
    }
}

TEST_CASE("compiled mdp invariants hold on synthetic graphs") {
    const TerrainConfig config;
    int compiled = 0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        AttackGraph g = generate_synthetic(30, 55, 3, seed);
        const int goal = g.crown_jewels().front();

        // not every candidate is guaranteed a directed route to the jewel;
        // take the first that has one
        std::optional<Mdp> built;
        int initial = 0;
        for (int candidate : g.candidate_initial_nodes()) {
            try {
                built = compile_mdp(g, candidate, goal, config);
                initial = candidate;
                break;
            } catch (const Unreachable&) {
            }
        }
        if (!built) continue;
        ++compiled;
        Mdp& mdp = *built;

        CHECK(mdp.num_states() == g.vertices().size());
        for (std::size_t s = 0; s < mdp.num_states(); ++s) {
            int prev_dst = 0;
            for (const auto& a : mdp.actions(s)) {
                CHECK(a.dst > prev_dst);  // sorted, strictly increasing
                prev_dst = a.dst;
                CHECK(a.success_prob > 0.0);
                CHECK(a.success_prob <= 1.0);
                // probability is one of the three buckets, possibly halved
                bool bucket = false;
                for (double base : {0.9, 0.6, 0.3})
                    for (double mult : {1.0, 0.5})
                        bucket = bucket ||
                                 std::abs(a.success_prob - base * mult) <
                                     1e-12;
                CHECK(bucket);
                CHECK(a.transit_reward >= 0.0);
                CHECK(a.transit_reward <= 11.0);
            }
        }

        // shaping strictly increases along the DFS path and tops at 100
        const auto& ref = mdp.dfs_reference();
        for (std::size_t k = 1; k < ref.size(); ++k)
            CHECK(mdp.shaping_of(ref[k]) > mdp.shaping_of(ref[k - 1]));
        CHECK(mdp.shaping_of(goal) == doctest::Approx(100.0));

        // off-path states carry zero shaping
        std::set<int> on_path(ref.begin(), ref.end());
        for (int id : mdp.state_ids())
            if (!on_path.count(id)) CHECK(mdp.shaping_of(id) == 0.0);

        // recompilation is structurally identical
        Mdp again = compile_mdp(g, initial, goal, config);
        CHECK(again.state_ids() == mdp.state_ids());
        CHECK(again.dfs_reference() == mdp.dfs_reference());
        for (std::size_t s = 0; s < mdp.num_states(); ++s) {
            CHECK(again.shaping(s) == mdp.shaping(s));
            REQUIRE(again.actions(s).size() == mdp.actions(s).size());
            for (std::size_t a = 0; a < mdp.actions(s).size(); ++a) {
                CHECK(again.actions(s)[a].dst == mdp.actions(s)[a].dst);
                CHECK(again.actions(s)[a].success_prob ==
                      mdp.actions(s)[a].success_prob);
                CHECK(again.actions(s)[a].transit_reward ==
                      mdp.actions(s)[a].transit_reward);
            }
        }
    }
    CHECK(compiled >= 6);  // the sweep must actually exercise instances
}
