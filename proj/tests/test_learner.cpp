#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "cja/errors.hpp"
#include "cja/learner.hpp"
#include "cja/mdp.hpp"
#include "cja/synthetic.hpp"
#include "cja/terrain.hpp"

using namespace cja;

namespace {

Mdp::OutAction act(int dst, double prob, double reward) {
    Mdp::OutAction a;
    a.dst = dst;
    a.success_prob = prob;
    a.transit_reward = reward;
    return a;
}

// 1 -> 2 -> 3 with certain transitions: the smallest process whose Q values
// settle to exact Bellman fixed points.
Mdp certain_chain() {
    return Mdp::from_parts({1, 2, 3},
                           {{act(2, 1.0, 5.0)}, {act(3, 1.0, 7.0)}, {}},
                           {0.0, 50.0, 100.0}, {1, 2, 3}, 3, 0.9);
}

// 1 -> {2, 3} -> 4 with certain transitions; the branch through 3 pays
// strictly more.
Mdp certain_diamond() {
    return Mdp::from_parts(
        {1, 2, 3, 4},
        {{act(2, 1.0, 1.0), act(3, 1.0, 6.0)},
         {act(4, 1.0, 2.0)},
         {act(4, 1.0, 2.0)},
         {}},
        {0.0, 50.0, 0.0, 100.0}, {1, 2, 4}, 4, 0.9);
}

LearnerConfig full_run(int episodes) {
    LearnerConfig config;
    config.max_episodes = episodes;
    config.convergence_window = episodes;  // 2W > max: no early stop
    return config;
}

} // namespace

TEST_CASE("learner config validation") {
    LearnerConfig config;
    CHECK_NOTHROW(validate(config));

    auto rejects = [](auto mutate) {
        LearnerConfig c;
        mutate(c);
        CHECK_THROWS_AS(validate(c), Error);
    };
    rejects([](LearnerConfig& c) { c.learning_rate = 0.0; });
    rejects([](LearnerConfig& c) { c.learning_rate = 1.5; });
    rejects([](LearnerConfig& c) { c.epsilon_start = 1.2; });
    rejects([](LearnerConfig& c) { c.epsilon_end = 0.6; c.epsilon_start = 0.5; });
    rejects([](LearnerConfig& c) { c.epsilon_decay_episodes = 0; });
    rejects([](LearnerConfig& c) { c.max_episodes = 0; });
    rejects([](LearnerConfig& c) { c.max_steps_per_episode = -3; });
    rejects([](LearnerConfig& c) { c.convergence_window = 0; });
    rejects([](LearnerConfig& c) { c.convergence_tolerance = -0.1; });
}

TEST_CASE("degenerate training run when initial equals goal") {
    AttackGraph g = AttackGraph::create(
        {{1, "cj", VertexKind::Leaf, CvssAnnotation{5, 5, Complexity::Low}}},
        {}, {1}, {1});
    Mdp mdp = compile_mdp(g, 1, 1, TerrainConfig{});
    TrainResult result = train(mdp, 1, LearnerConfig{});

    CHECK(result.converged_at == 1);
    REQUIRE(result.episode_returns.size() == 1);
    // zero-step episode still collects shaping(goal) + terminal bonus
    CHECK(result.episode_returns[0] == doctest::Approx(200.0));

    AttackPath path = extract_path(result.qtable, mdp, 1);
    CHECK(path.vertices == std::vector<int>{1});
    CHECK(path.hops == 0);
    CHECK(path.reward == doctest::Approx(200.0));
}

TEST_CASE("certain chain learns the exact Bellman values") {
    Mdp mdp = certain_chain();
    TrainResult result = train(mdp, 1, full_run(3000));

    // Oracle: V(3)=0 (absorbing), V(2)=7+200, V(1)=5+50+0.9*V(2).
    const std::vector<double> v = value_iteration(mdp, 1e-10);
    CHECK(v[mdp.index_of(3)] == doctest::Approx(0.0));
    CHECK(v[mdp.index_of(2)] == doctest::Approx(207.0));
    CHECK(v[mdp.index_of(1)] == doctest::Approx(55.0 + 0.9 * 207.0));

    for (int id : {1, 2})
        CHECK(std::abs(result.qtable.max_value(mdp.index_of(id)) -
                       v[mdp.index_of(id)]) < 1e-6);

    AttackPath path = extract_path(result.qtable, mdp, 1);
    CHECK(path.vertices == std::vector<int>{1, 2, 3});
    CHECK(path.hops == 2);
    CHECK(path.terminal == 3);
    // plan reward: transits 5+7, shaping 0+50+100, bonus 100
    CHECK(path.reward == doctest::Approx(262.0));
}

TEST_CASE("diamond: the learner takes the strictly better branch") {
    Mdp mdp = certain_diamond();

    // Enumeration oracle over both plans (certain transitions, so the
    // discounted value is the plain discounted sum).
    const double via2 = (1.0 + 50.0) + 0.9 * (2.0 + 200.0);
    const double via3 = (6.0 + 0.0) + 0.9 * (2.0 + 200.0);
    REQUIRE(via2 > via3);  // branch through 2 wins on shaping

    TrainResult result = train(mdp, 1, full_run(2000));
    AttackPath path = extract_path(result.qtable, mdp, 1);
    CHECK(path.vertices == std::vector<int>{1, 2, 4});

    // a different seed learns the same unique-optimum path
    LearnerConfig other = full_run(2000);
    other.seed = 1234567;
    AttackPath again =
        extract_path(train(mdp, 1, other).qtable, mdp, 1);
    CHECK(again.vertices == path.vertices);
}

TEST_CASE("training is bit-for-bit deterministic") {
    AttackGraph g = generate_synthetic(20, 32, 2, 11);
    Mdp mdp = compile_mdp(g, g.candidate_initial_nodes().front(),
                          g.crown_jewels().front(), TerrainConfig{});
    LearnerConfig config;
    config.seed = 42;
    TrainResult a = train(mdp, g.candidate_initial_nodes().front(), config);
    TrainResult b = train(mdp, g.candidate_initial_nodes().front(), config);
    CHECK(a == b);

    config.seed = 43;
    TrainResult c = train(mdp, g.candidate_initial_nodes().front(), config);
    CHECK_FALSE(a.episode_returns == c.episode_returns);
}

TEST_CASE("q values stay within the analytic bound") {
    AttackGraph g = generate_synthetic(25, 45, 3, 17);
    Mdp mdp = compile_mdp(g, g.candidate_initial_nodes().front(),
                          g.crown_jewels().front(), TerrainConfig{});
    TrainResult result = train(mdp, g.candidate_initial_nodes().front(),
                               LearnerConfig{});

    double max_single = 0.0;
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (const auto& a : mdp.actions(s))
            max_single = std::max(max_single, a.transit_reward +
                                                  mdp.arrival_reward(
                                                      a.dst_index));
    REQUIRE(max_single <= 211.0);

    const double bound = max_single / (1.0 - mdp.discount()) + 211.0;
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.actions(s).size(); ++a) {
            CHECK(std::isfinite(result.qtable.value(s, a)));
            CHECK(result.qtable.value(s, a) <= bound);
            CHECK(result.qtable.value(s, a) >= 0.0);
        }
}

TEST_CASE("convergence flag satisfies the window rule it claims") {
    Mdp mdp = certain_chain();
    LearnerConfig config;  // defaults: window 50, tolerance 0.01
    TrainResult result = train(mdp, 1, config);
    REQUIRE(result.converged_at.has_value());

    const auto& r = result.episode_returns;
    const int w = config.convergence_window;
    const int e = *result.converged_at;
    REQUIRE(static_cast<int>(r.size()) == e);
    REQUIRE(e >= 2 * w);

    auto window_gap = [&](int end) {
        const double recent =
            std::accumulate(r.begin() + end - w, r.begin() + end, 0.0) / w;
        const double previous =
            std::accumulate(r.begin() + end - 2 * w, r.begin() + end - w,
                            0.0) / w;
        return std::abs(recent - previous) -
               config.convergence_tolerance *
                   std::max(std::abs(previous), 1.0);
    };
    CHECK(window_gap(e) <= 0.0);
    for (int earlier = 2 * w; earlier < e; ++earlier)
        CHECK(window_gap(earlier) > 0.0);
}

TEST_CASE("train error surface") {
    SUBCASE("goal unreachable from the requested start") {
        AttackGraph g = AttackGraph::create(
            {{1, "a", VertexKind::Leaf, CvssAnnotation{5, 5, Complexity::Low}},
             {2, "b", VertexKind::Leaf, CvssAnnotation{5, 5, Complexity::Low}},
             {3, "c", VertexKind::Leaf, std::nullopt},
             {4, "d", VertexKind::Leaf, std::nullopt}},
            {{1, 2}, {2, 3}}, {}, {});
        Mdp mdp = compile_mdp(g, 1, 3, TerrainConfig{});
        CHECK_THROWS_AS(train(mdp, 4, LearnerConfig{}), Unreachable);
    }
    SUBCASE("trajectory wanders into a dead end") {
        AttackGraph g = AttackGraph::create(
            {{1, "a", VertexKind::Leaf, CvssAnnotation{5, 5, Complexity::Low}},
             {2, "b", VertexKind::Leaf, CvssAnnotation{5, 5, Complexity::Low}},
             {3, "sink", VertexKind::Leaf, std::nullopt},
             {4, "goal", VertexKind::Leaf, std::nullopt}},
            {{1, 2}, {1, 3}, {2, 4}}, {}, {});
        Mdp mdp = compile_mdp(g, 1, 4, TerrainConfig{});
        CHECK_THROWS_AS(train(mdp, 1, LearnerConfig{}), NoAdmissibleAction);
    }
    SUBCASE("unknown start vertex") {
        Mdp mdp = certain_chain();
        CHECK_THROWS_AS(train(mdp, 99, LearnerConfig{}), UnknownVertex);
    }
}

TEST_CASE("extract_path detects cycles in the greedy policy") {
    AttackGraph g = AttackGraph::create(
        {{1, "a", VertexKind::Leaf, CvssAnnotation{5, 5, Complexity::Low}},
         {2, "b", VertexKind::Leaf, CvssAnnotation{5, 5, Complexity::Low}},
         {3, "goal", VertexKind::Leaf, std::nullopt}},
        {{1, 2}, {2, 1}, {2, 3}}, {}, {});
    Mdp mdp = compile_mdp(g, 1, 3, TerrainConfig{});

    // untrained table: ties break to the lowest destination, so the greedy
    // walk goes 1 -> 2 -> 1 and trips the cycle check
    QTable zero(mdp);
    try {
        extract_path(zero, mdp, 1);
        FAIL("expected LoopDetected");
    } catch (const LoopDetected& e) {
        CHECK(e.code() == "loop_detected");
        CHECK(e.path_so_far() == std::vector<int>{1, 2, 1});
    }
}

TEST_CASE("value iteration closed forms") {
    SUBCASE("single absorbing goal") {
        Mdp mdp = Mdp::from_parts({7}, {{}}, {100.0}, {7}, 7, 0.9);
        const std::vector<double> v = value_iteration(mdp, 1e-10);
        CHECK(v[0] == 0.0);
    }
    SUBCASE("one-step chain") {
        const double r = 7.3;
        Mdp mdp = Mdp::from_parts({1, 2}, {{act(2, 1.0, r)}, {}},
                                  {0.0, 100.0}, {1, 2}, 2, 0.9);
        const std::vector<double> v = value_iteration(mdp, 1e-10);
        CHECK(v[mdp.index_of(1)] == doctest::Approx(r + 200.0));
        CHECK(v[mdp.index_of(2)] == 0.0);
    }
    SUBCASE("uncertain transitions fold the stay probability in") {
        // V = p(R + gamma*0) + (1-p) gamma V  =>  V = p*R / (1 - (1-p)gamma)
        // where R is the full arrival payout: transit + shaping + bonus.
        const double p = 0.6, r = 10.0, gamma = 0.9;
        Mdp mdp = Mdp::from_parts({1, 2}, {{act(2, p, r)}, {}},
                                  {0.0, 100.0}, {1, 2}, 2, gamma);
        const double payout = r + 100.0 + 100.0;
        const std::vector<double> v = value_iteration(mdp, 1e-12);
        CHECK(v[mdp.index_of(1)] ==
              doctest::Approx(p * payout / (1.0 - (1.0 - p) * gamma))
                  .epsilon(1e-9));
    }
    SUBCASE("tolerance must be positive") {
        Mdp mdp = certain_chain();
        CHECK_THROWS_AS(value_iteration(mdp, 0.0), Error);
    }
}

TEST_CASE("visit counts record exploration") {
    Mdp mdp = certain_chain();
    TrainResult result = train(mdp, 1, full_run(100));
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.actions(s).size(); ++a)
            total += result.qtable.visits(s, a);
    CHECK(total >= 200);  // 100 episodes x 2 certain steps each
}
