#pragma once

#include <cstdint>

#include "cja/graph.hpp"

namespace cja {

// Generates a seeded synthetic attack graph: n_subnets clusters of random
// connected digraphs joined in a chain by firewall-flagged bridge edges with
// uniformly drawn service labels. One crown jewel is designated in the last
// subnet and up to five candidate initial nodes elsewhere; CVSS annotations
// are drawn uniformly for every vertex. Pure function of its arguments.
//
// When the edge budget allows, every vertex is given at least one outgoing
// edge so that trained agents never strand in a dead end.
//
// Throws InfeasibleShape unless
//   1 <= n_subnets <= n_vertices and
//   n_vertices - 1 <= n_edges <= n_vertices * (n_vertices - 1).
AttackGraph generate_synthetic(int n_vertices, int n_edges, int n_subnets,
                               std::uint64_t seed);

} // namespace cja
