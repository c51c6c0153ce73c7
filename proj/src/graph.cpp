#include "cja/graph.hpp"

#include <algorithm>
#include <set>

namespace cja {

const char* to_string(VertexKind kind) {
    switch (kind) {
    case VertexKind::Leaf: return "LEAF";
    case VertexKind::And: return "AND";
    case VertexKind::Or: return "OR";
    }
    return "?";
}

const char* to_string(Complexity complexity) {
    switch (complexity) {
    case Complexity::Low: return "LOW";
    case Complexity::Medium: return "MEDIUM";
    case Complexity::High: return "HIGH";
    }
    return "?";
}

const char* to_string(Service service) {
    switch (service) {
    case Service::Ftp: return "FTP";
    case Service::Smtp: return "SMTP";
    case Service::Http: return "HTTP";
    case Service::Ssh: return "SSH";
    case Service::None: return "NONE";
    }
    return "?";
}

VertexKind vertex_kind_from_string(const std::string& text) {
    if (text == "LEAF") return VertexKind::Leaf;
    if (text == "AND") return VertexKind::And;
    if (text == "OR") return VertexKind::Or;
    throw Error("bad_vertex_kind", "unknown vertex kind '" + text + "'");
}

Complexity complexity_from_string(const std::string& text) {
    if (text == "LOW") return Complexity::Low;
    if (text == "MEDIUM") return Complexity::Medium;
    if (text == "HIGH") return Complexity::High;
    throw Error("bad_complexity", "unknown attack complexity '" + text + "'");
}

Service service_from_string(const std::string& text) {
    if (text == "FTP") return Service::Ftp;
    if (text == "SMTP") return Service::Smtp;
    if (text == "HTTP") return Service::Http;
    if (text == "SSH") return Service::Ssh;
    if (text == "NONE") return Service::None;
    throw Error("bad_service", "unknown service '" + text + "'");
}

AttackGraph AttackGraph::create(std::vector<Vertex> vertices,
                                std::vector<Edge> edges,
                                std::vector<int> crown_jewels,
                                std::vector<int> candidate_initial_nodes,
                                std::vector<std::string>* warnings) {
    std::sort(vertices.begin(), vertices.end(),
              [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vertex& v = vertices[i];
        if (v.id <= 0)
            throw Error("nonpositive_vertex_id",
                        "vertex id " + std::to_string(v.id) +
                            " is not strictly positive");
        if (i > 0 && vertices[i - 1].id == v.id)
            throw DuplicateVertexId(v.id);
        if (v.annotation) {
            const CvssAnnotation& a = *v.annotation;
            if (a.base_score < 0.0 || a.base_score > 10.0 ||
                a.exploitability_score < 0.0 || a.exploitability_score > 10.0)
                throw ScoreOutOfRange(v.id);
        }
    }

    AttackGraph g;
    g.vertices_ = std::move(vertices);
    for (std::size_t i = 0; i < g.vertices_.size(); ++i)
        g.index_of_[g.vertices_[i].id] = i;

    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
    });
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (!g.index_of_.count(e.src) || !g.index_of_.count(e.dst))
            throw DanglingArc(e.src, e.dst);
        if (e.src == e.dst)
            throw Error("self_loop", "arc (" + std::to_string(e.src) + "," +
                                         std::to_string(e.dst) +
                                         ") is a self-loop");
        if (i > 0 && edges[i - 1].src == e.src && edges[i - 1].dst == e.dst)
            throw Error("duplicate_arc", "arc (" + std::to_string(e.src) +
                                             "," + std::to_string(e.dst) +
                                             ") appears more than once");
    }
    g.edges_ = std::move(edges);

    auto check_members = [&](std::vector<int>& ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int id : ids)
            if (!g.index_of_.count(id)) throw UnknownVertex(id);
    };
    check_members(crown_jewels);
    check_members(candidate_initial_nodes);
    g.crown_jewels_ = std::move(crown_jewels);
    g.candidate_initial_nodes_ = std::move(candidate_initial_nodes);

    g.build_indexes();

    // Vertices that can be transitioned out of must carry an annotation.
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
        Vertex& v = g.vertices_[i];
        if (!v.annotation && !g.out_edges_[i].empty()) {
            v.annotation = kDefaultAnnotation;
            if (warnings)
                warnings->push_back("vertex " + std::to_string(v.id) +
                                    " has no CVSS annotation; using default "
                                    "(base 5.0, exploitability 5.0, MEDIUM)");
        }
    }
    return g;
}

AttackGraph::AttackGraph(const AttackGraph& other)
    : vertices_(other.vertices_), edges_(other.edges_),
      crown_jewels_(other.crown_jewels_),
      candidate_initial_nodes_(other.candidate_initial_nodes_),
      index_of_(other.index_of_) {
    build_indexes();
}

AttackGraph& AttackGraph::operator=(const AttackGraph& other) {
    if (this != &other) {
        vertices_ = other.vertices_;
        edges_ = other.edges_;
        crown_jewels_ = other.crown_jewels_;
        candidate_initial_nodes_ = other.candidate_initial_nodes_;
        index_of_ = other.index_of_;
        build_indexes();
    }
    return *this;
}

void AttackGraph::build_indexes() {
    out_edges_.assign(vertices_.size(), {});
    std::vector<std::set<int>> nbr(vertices_.size());
    for (const Edge& e : edges_) {
        const std::size_t si = index_of_.at(e.src);
        const std::size_t di = index_of_.at(e.dst);
        out_edges_[si].push_back(&e);
        nbr[si].insert(e.dst);
        nbr[di].insert(e.src);
    }
    // edges_ is sorted by (src,dst), so each out list is already dst-sorted.
    undirected_.resize(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        undirected_[i].assign(nbr[i].begin(), nbr[i].end());
}

std::size_t AttackGraph::index_of(int id) const {
    auto it = index_of_.find(id);
    if (it == index_of_.end()) throw UnknownVertex(id);
    return it->second;
}

const CvssAnnotation& AttackGraph::effective_annotation(int id) const {
    const Vertex& v = vertex(id);
    return v.annotation ? *v.annotation : kDefaultAnnotation;
}

} // namespace cja
