#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cja/graph.hpp"
#include "cja/learner.hpp"
#include "cja/path.hpp"
#include "cja/terrain.hpp"

namespace cja {

// A trainable (initial node, 2-hop target) pair that produced no path, with
// the stable error code that stopped it.
struct PairFailure {
    int initial = 0;
    int terminal = 0;
    std::string error;

    bool operator==(const PairFailure&) const = default;
};

// Per-crown-jewel path statistics. Analytics fields are empty when no pair
// produced a path.
struct CjaReport {
    int crown_jewel = 0;
    std::vector<int> two_hop;          // sorted
    std::vector<AttackPath> paths;     // sorted by (initial, terminal)
    std::optional<int> best_initial;
    std::optional<int> best_terminal;
    std::optional<int> most_visited;
    double most_visited_proportion = 0.0;
    std::vector<PairFailure> failures;

    bool operator==(const CjaReport&) const = default;
};

struct MultiCjSummary {
    std::vector<CjaReport> reports;
    // Initial node appearing as best_initial in the most reports; absent
    // unless it appears at least twice. Ties go to the lowest id.
    std::optional<int> global_best_initial;
};

struct PathAnalysis {
    int best_initial = 0;
    int best_terminal = 0;
    int most_visited = 0;
    double most_visited_proportion = 0.0;
};

// All vertices within undirected distance 2 of the crown jewel, including
// the crown jewel itself. Sorted ascending. Throws UnknownVertex.
std::vector<int> two_hop(const AttackGraph& graph, int cj);

// Candidates from which at least one member of two_hop_set is reachable by
// directed traversal (a candidate inside the set reaches itself). Sorted.
std::vector<int> reachable_initial_nodes(const AttackGraph& graph,
                                         const std::vector<int>& candidates,
                                         const std::vector<int>& two_hop_set);

// Path ranking used throughout the analysis: fewer hops first (the quieter
// staging route), then higher reward, then lower terminal id, then lower
// initial id. Returns true when `a` ranks strictly better than `b`.
bool ranks_before(const AttackPath& a, const AttackPath& b);

// best_terminal: terminal of the top-ranked path. best_initial: each
// initial's top-ranked path is its representative; the initial of the
// top-ranked representative wins. most_visited: vertex on the largest
// number of distinct paths (endpoints count), ties to the lowest id.
// Throws EmptyPathSet.
PathAnalysis analyze_paths(const std::vector<AttackPath>& paths);

// Algorithm: compute the crown jewel's 2-hop network, filter candidates by
// reachability, then train one learner per (initial, target) pair and
// extract its greedy path. Unreachable and non-converged pairs land in
// `failures`. Deterministic for fixed seeds regardless of `jobs`.
CjaReport run_cja(const AttackGraph& graph, int cj,
                  const std::vector<int>& candidates,
                  const TerrainConfig& terrain, const LearnerConfig& learner,
                  int jobs = 1);

MultiCjSummary summarize_multi_cj(std::vector<CjaReport> reports);

} // namespace cja
