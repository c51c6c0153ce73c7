#include "cja/synthetic.hpp"

#include <algorithm>
#include <unordered_set>

#include "cja/rng.hpp"

namespace cja {

namespace {

constexpr Service kBridgeServices[] = {Service::Ftp, Service::Smtp,
                                       Service::Http, Service::Ssh};

const char* const kFactTemplates[] = {
    "execCode(host%,user)",
    "netAccess(host%,tcp,80)",
    "hacl(host%,dmz,tcp,22)",
    "vulExists(host%,remote exploit of a server program)",
    "hasAccount(user,host%,serviceAccount)",
};

const char* const kRuleTemplates[] = {
    "RULE % (remote exploit of a server program)",
    "RULE % (exploit active session)",
    "RULE % (users with active login sessions)",
    "RULE % (privilege escalation)",
    "RULE % (multi-hop access)",
};

std::string expand(const char* tpl, int id) {
    std::string out;
    for (const char* p = tpl; *p; ++p) {
        if (*p == '%') out += std::to_string(id);
        else out.push_back(*p);
    }
    return out;
}

std::uint64_t pair_key(int src, int dst) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(src))
            << 32) |
           static_cast<std::uint32_t>(dst);
}

} // namespace

AttackGraph generate_synthetic(int n_vertices, int n_edges, int n_subnets,
                               std::uint64_t seed) {
    if (n_vertices < 1 || n_edges < 1 || n_subnets < 1)
        throw InfeasibleShape("all shape parameters must be positive");
    if (n_subnets > n_vertices)
        throw InfeasibleShape("more subnets than vertices");
    if (n_edges < n_vertices - 1)
        throw InfeasibleShape(
            "fewer edges than a spanning structure requires (" +
            std::to_string(n_edges) + " < " + std::to_string(n_vertices - 1) +
            ")");
    const std::int64_t capacity =
        static_cast<std::int64_t>(n_vertices) * (n_vertices - 1);
    if (n_edges > capacity)
        throw InfeasibleShape("edge count exceeds simple-digraph capacity (" +
                              std::to_string(n_edges) + " > " +
                              std::to_string(capacity) + ")");

    Rng rng(derive_seed(seed,
                        (static_cast<std::uint64_t>(n_vertices) << 32) |
                            static_cast<std::uint64_t>(n_edges),
                        static_cast<std::uint64_t>(n_subnets)));

    // Contiguous id ranges per subnet, sizes as equal as possible.
    std::vector<std::vector<int>> subnets(n_subnets);
    std::vector<int> subnet_of(n_vertices + 1, 0);
    {
        int next_id = 1;
        for (int s = 0; s < n_subnets; ++s) {
            int size = n_vertices / n_subnets + (s < n_vertices % n_subnets);
            for (int k = 0; k < size; ++k) {
                subnets[s].push_back(next_id);
                subnet_of[next_id] = s;
                ++next_id;
            }
        }
    }

    std::vector<Vertex> vertices;
    vertices.reserve(n_vertices);
    for (int id = 1; id <= n_vertices; ++id) {
        Vertex v;
        v.id = id;
        const std::uint64_t roll = rng.bounded(4);
        if (roll == 0) {
            v.kind = VertexKind::And;
            v.label = expand(kRuleTemplates[rng.bounded(std::size(
                                 kRuleTemplates))],
                             id);
        } else if (roll == 1) {
            v.kind = VertexKind::Or;
            v.label = expand(kFactTemplates[rng.bounded(std::size(
                                 kFactTemplates))],
                             id);
        } else {
            v.kind = VertexKind::Leaf;
            v.label = expand(kFactTemplates[rng.bounded(std::size(
                                 kFactTemplates))],
                             id);
        }
        CvssAnnotation a;
        a.base_score = rng.cvss_score();
        a.exploitability_score = rng.cvss_score();
        const std::uint64_t c = rng.bounded(3);
        a.complexity = c == 0 ? Complexity::Low
                              : (c == 1 ? Complexity::Medium
                                        : Complexity::High);
        v.annotation = a;
        vertices.push_back(std::move(v));
    }

    std::vector<Edge> edges;
    edges.reserve(n_edges);
    std::unordered_set<std::uint64_t> used;
    used.reserve(static_cast<std::size_t>(n_edges) * 2);
    auto add_edge = [&](int src, int dst, bool firewall, Service service) {
        used.insert(pair_key(src, dst));
        edges.push_back({src, dst, service, firewall});
    };
    auto random_service = [&] {
        return kBridgeServices[rng.bounded(std::size(kBridgeServices))];
    };

    // Per-subnet skeleton: a random arborescence over a shuffled member
    // order, so every member is reachable from the subnet root.
    std::vector<int> roots(n_subnets);
    for (int s = 0; s < n_subnets; ++s) {
        std::vector<int> order = subnets[s];
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.bounded(i)]);
        roots[s] = order[0];
        for (std::size_t i = 1; i < order.size(); ++i) {
            const int parent = order[rng.bounded(i)];
            add_edge(parent, order[i], false, Service::None);
        }
    }

    // Chain bridges: some member of subnet s reaches the root of s+1, so the
    // whole graph is reachable from roots[0].
    for (int s = 0; s + 1 < n_subnets; ++s) {
        const int from = subnets[s][rng.bounded(subnets[s].size())];
        add_edge(from, roots[s + 1], true, random_service());
    }

    // Spend remaining budget. First give sink vertices an outgoing edge,
    // then fill with random pairs, biased toward intra-subnet locality.
    std::int64_t remaining = n_edges - static_cast<std::int64_t>(edges.size());

    if (remaining > 0) {
        std::vector<int> out_degree(n_vertices + 1, 0);
        for (const Edge& e : edges) ++out_degree[e.src];
        for (int id = 1; id <= n_vertices && remaining > 0; ++id) {
            if (out_degree[id] != 0) continue;
            const auto& home = subnets[subnet_of[id]];
            int dst = -1;
            for (int attempt = 0; attempt < 32 && dst < 0; ++attempt) {
                const int candidate =
                    home.size() > 1
                        ? home[rng.bounded(home.size())]
                        : static_cast<int>(1 + rng.bounded(n_vertices));
                if (candidate != id && !used.count(pair_key(id, candidate)))
                    dst = candidate;
            }
            if (dst < 0) {
                for (int candidate = 1; candidate <= n_vertices; ++candidate) {
                    if (candidate != id &&
                        !used.count(pair_key(id, candidate))) {
                        dst = candidate;
                        break;
                    }
                }
            }
            if (dst < 0) continue;
            const bool cross = subnet_of[id] != subnet_of[dst];
            add_edge(id, dst, cross,
                     cross ? random_service() : Service::None);
            ++out_degree[id];
            --remaining;
        }
    }

    std::int64_t intra_capacity = 0;
    for (const auto& members : subnets) {
        const std::int64_t k = static_cast<std::int64_t>(members.size());
        intra_capacity += k * (k - 1);
    }
    std::int64_t intra_used = 0;
    std::int64_t cross_used = 0;
    for (const Edge& e : edges)
        (subnet_of[e.src] == subnet_of[e.dst] ? intra_used : cross_used)++;

    auto enumerate_free = [&](bool intra) {
        std::vector<std::pair<int, int>> free_pairs;
        for (int src = 1; src <= n_vertices; ++src)
            for (int dst = 1; dst <= n_vertices; ++dst) {
                if (src == dst) continue;
                if ((subnet_of[src] == subnet_of[dst]) != intra) continue;
                if (!used.count(pair_key(src, dst)))
                    free_pairs.emplace_back(src, dst);
            }
        return free_pairs;
    };

    while (remaining > 0) {
        const std::int64_t intra_free = intra_capacity - intra_used;
        const std::int64_t cross_free =
            (capacity - intra_capacity) - cross_used;
        bool intra = intra_free > 0 && (cross_free == 0 || rng.real01() < 0.85);

        int src = -1;
        int dst = -1;
        for (int attempt = 0; attempt < 64 && src < 0; ++attempt) {
            int a;
            int b;
            if (intra) {
                // Subnet weighted by member count; close enough to
                // capacity-weighting for the shapes we generate.
                const auto& members =
                    subnets[subnet_of[1 + static_cast<int>(rng.bounded(
                                              n_vertices))]];
                if (members.size() < 2) continue;
                a = members[rng.bounded(members.size())];
                b = members[rng.bounded(members.size())];
            } else {
                a = 1 + static_cast<int>(rng.bounded(n_vertices));
                b = 1 + static_cast<int>(rng.bounded(n_vertices));
                if (subnet_of[a] == subnet_of[b]) continue;
            }
            if (a == b || used.count(pair_key(a, b))) continue;
            src = a;
            dst = b;
        }
        if (src < 0) {
            // Dense region: fall back to enumerating what is left.
            auto free_pairs = enumerate_free(intra);
            if (free_pairs.empty()) {
                intra = !intra;
                free_pairs = enumerate_free(intra);
            }
            const auto& pick = free_pairs[rng.bounded(free_pairs.size())];
            src = pick.first;
            dst = pick.second;
        }
        add_edge(src, dst, !intra, intra ? Service::None : random_service());
        (intra ? intra_used : cross_used)++;
        --remaining;
    }

    // Crown jewel deep in the last subnet; candidates include the global
    // root so at least one entry point reaches everything.
    const auto& last = subnets[n_subnets - 1];
    const int crown_jewel = last[rng.bounded(last.size())];
    std::vector<int> candidates{roots[0]};
    {
        std::unordered_set<int> chosen{roots[0], crown_jewel};
        const int want = std::min(5, n_vertices - 1);
        int guard = 0;
        while (static_cast<int>(candidates.size()) < want &&
               guard++ < 64 * n_vertices) {
            const int id = 1 + static_cast<int>(rng.bounded(n_vertices));
            if (chosen.insert(id).second) candidates.push_back(id);
        }
    }

    return AttackGraph::create(std::move(vertices), std::move(edges),
                               {crown_jewel}, std::move(candidates));
}

} // namespace cja
