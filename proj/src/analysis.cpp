#include "cja/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <utility>
#include <variant>

#include "cja/errors.hpp"
#include "cja/mdp.hpp"

namespace cja {

std::vector<int> two_hop(const AttackGraph& graph, int cj) {
    graph.index_of(cj);
    std::map<int, int> depth;
    depth[cj] = 0;
    std::deque<int> frontier{cj};
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        int d = depth[v];
        if (d == 2)
            continue;
        for (int n : graph.undirected_neighbors(v)) {
            if (depth.emplace(n, d + 1).second)
                frontier.push_back(n);
        }
    }
    std::vector<int> out;
    out.reserve(depth.size());
    for (const auto& [id, d] : depth)
        out.push_back(id);
    return out;
}

std::vector<int> reachable_initial_nodes(const AttackGraph& graph,
                                         const std::vector<int>& candidates,
                                         const std::vector<int>& two_hop_set) {
    // Walk arcs backwards from the 2-hop set; a candidate is viable when the
    // walk touches it (or it already sits inside the set).
    std::map<int, std::vector<int>> reverse;
    for (const Edge& e : graph.edges())
        reverse[e.dst].push_back(e.src);

    std::set<int> seen(two_hop_set.begin(), two_hop_set.end());
    std::deque<int> frontier(two_hop_set.begin(), two_hop_set.end());
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        auto it = reverse.find(v);
        if (it == reverse.end())
            continue;
        for (int src : it->second) {
            if (seen.insert(src).second)
                frontier.push_back(src);
        }
    }

    std::vector<int> out;
    for (int c : candidates) {
        graph.index_of(c);
        if (seen.count(c))
            out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool ranks_before(const AttackPath& a, const AttackPath& b) {
    if (a.hops != b.hops)
        return a.hops < b.hops;
    if (a.reward != b.reward)
        return a.reward > b.reward;
    if (a.terminal != b.terminal)
        return a.terminal < b.terminal;
    return a.initial < b.initial;
}

PathAnalysis analyze_paths(const std::vector<AttackPath>& paths) {
    if (paths.empty())
        throw EmptyPathSet();

    const AttackPath* top = &paths.front();
    std::map<int, const AttackPath*> representative;
    std::map<int, int> membership;
    for (const AttackPath& p : paths) {
        if (ranks_before(p, *top))
            top = &p;
        auto [it, fresh] = representative.emplace(p.initial, &p);
        if (!fresh && ranks_before(p, *it->second))
            it->second = &p;
        for (int v : p.vertices)
            ++membership[v];
    }

    const AttackPath* best = representative.begin()->second;
    for (const auto& [initial, rep] : representative) {
        if (ranks_before(*rep, *best))
            best = rep;
    }

    int visited = membership.begin()->first;
    for (const auto& [id, count] : membership) {
        if (count > membership[visited])
            visited = id;
    }

    PathAnalysis out;
    out.best_initial = best->initial;
    out.best_terminal = top->terminal;
    out.most_visited = visited;
    out.most_visited_proportion =
        static_cast<double>(membership[visited]) / static_cast<double>(paths.size());
    return out;
}

namespace {

using PairOutcome = std::variant<std::monostate, AttackPath, PairFailure>;

PairOutcome evaluate_pair(const AttackGraph& graph, int initial, int target,
                          const TerrainConfig& terrain,
                          const LearnerConfig& learner) {
    try {
        Mdp mdp = compile_mdp(graph, initial, target, terrain);
        TrainResult trained = train(mdp, initial, learner);
        return extract_path(trained.qtable, mdp, initial);
    } catch (const Error& e) {
        return PairFailure{initial, target, e.code()};
    }
}

} // namespace

CjaReport run_cja(const AttackGraph& graph, int cj,
                  const std::vector<int>& candidates,
                  const TerrainConfig& terrain, const LearnerConfig& learner,
                  int jobs) {
    CjaReport report;
    report.crown_jewel = cj;
    report.two_hop = two_hop(graph, cj);
    if (report.two_hop.empty())
        throw EmptyTwoHop(cj);

    std::vector<int> initials =
        reachable_initial_nodes(graph, candidates, report.two_hop);
    if (initials.empty())
        throw NoReachableInitialNodes(cj);

    std::vector<std::pair<int, int>> pairs;
    for (int i : initials)
        for (int j : report.two_hop)
            pairs.emplace_back(i, j);

    std::vector<PairOutcome> outcomes(pairs.size());
    if (jobs <= 1 || pairs.size() < 2) {
        for (std::size_t k = 0; k < pairs.size(); ++k)
            outcomes[k] = evaluate_pair(graph, pairs[k].first, pairs[k].second,
                                        terrain, learner);
    } else {
        // Pairs are independent (each derives its own seed), so workers pull
        // indexes from a shared counter and write into their own slot.
        std::atomic<std::size_t> next{0};
        std::exception_ptr trouble;
        std::mutex trouble_lock;
        auto worker = [&] {
            for (;;) {
                std::size_t k = next.fetch_add(1);
                if (k >= pairs.size())
                    return;
                try {
                    outcomes[k] = evaluate_pair(graph, pairs[k].first,
                                                pairs[k].second, terrain,
                                                learner);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(trouble_lock);
                    if (!trouble)
                        trouble = std::current_exception();
                    return;
                }
            }
        };
        std::size_t n_workers = std::min<std::size_t>(jobs, pairs.size());
        std::vector<std::thread> crew;
        crew.reserve(n_workers);
        for (std::size_t t = 0; t < n_workers; ++t)
            crew.emplace_back(worker);
        for (std::thread& t : crew)
            t.join();
        if (trouble)
            std::rethrow_exception(trouble);
    }

    for (PairOutcome& outcome : outcomes) {
        if (auto* path = std::get_if<AttackPath>(&outcome))
            report.paths.push_back(std::move(*path));
        else if (auto* failure = std::get_if<PairFailure>(&outcome))
            report.failures.push_back(std::move(*failure));
    }

    if (!report.paths.empty()) {
        PathAnalysis analysis = analyze_paths(report.paths);
        report.best_initial = analysis.best_initial;
        report.best_terminal = analysis.best_terminal;
        report.most_visited = analysis.most_visited;
        report.most_visited_proportion = analysis.most_visited_proportion;
    }
    return report;
}

MultiCjSummary summarize_multi_cj(std::vector<CjaReport> reports) {
    MultiCjSummary summary;
    summary.reports = std::move(reports);

    std::map<int, int> tally;
    for (const CjaReport& r : summary.reports) {
        if (r.best_initial)
            ++tally[*r.best_initial];
    }
    int best = 0;
    int best_count = 0;
    for (const auto& [id, count] : tally) {
        if (count > best_count) {
            best = id;
            best_count = count;
        }
    }
    if (best_count >= 2)
        summary.global_best_initial = best;
    return summary;
}

} // namespace cja
