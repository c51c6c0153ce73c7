#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cja/errors.hpp"

namespace cja {

// MulVal vertex classes: LEAF facts, AND interaction rules, OR derived facts.
enum class VertexKind { Leaf, And, Or };

enum class Complexity { Low, Medium, High };

// Protocol crossing a firewall boundary. None means no protocol recorded.
enum class Service { Ftp, Smtp, Http, Ssh, None };

const char* to_string(VertexKind kind);
const char* to_string(Complexity complexity);
const char* to_string(Service service);

VertexKind vertex_kind_from_string(const std::string& text);
Complexity complexity_from_string(const std::string& text);
Service service_from_string(const std::string& text);

struct CvssAnnotation {
    double base_score = 0.0;
    double exploitability_score = 0.0;
    Complexity complexity = Complexity::Medium;

    bool operator==(const CvssAnnotation&) const = default;
};

// Neutral annotation applied where input provides none: mid-scale scores so
// unannotated vertices neither attract nor repel agents.
inline constexpr CvssAnnotation kDefaultAnnotation{5.0, 5.0,
                                                   Complexity::Medium};

struct Vertex {
    int id = 0;
    std::string label;
    VertexKind kind = VertexKind::Leaf;
    std::optional<CvssAnnotation> annotation;

    bool operator==(const Vertex&) const = default;
};

struct Edge {
    int src = 0;
    int dst = 0;
    Service service = Service::None;
    bool firewall = false;

    bool operator==(const Edge&) const = default;
};

// Immutable directed attack graph with CVSS and terrain annotations.
// Validation happens in create(); a constructed graph always satisfies:
//   - vertex ids unique and strictly positive
//   - every edge endpoint exists, no self-loops, no duplicate (src,dst)
//   - crown jewels and candidate initial nodes are existing vertices
//   - scores within [0,10]
//   - every vertex with at least one outgoing edge carries an annotation
//     (the default is filled in and reported through `warnings`)
// Instances are safe to share read-only across threads.
class AttackGraph {
public:
    static AttackGraph create(std::vector<Vertex> vertices,
                              std::vector<Edge> edges,
                              std::vector<int> crown_jewels,
                              std::vector<int> candidate_initial_nodes,
                              std::vector<std::string>* warnings = nullptr);

    // Copies rebuild the adjacency indexes: they point into the instance's
    // own edge storage. Moves keep the storage and stay cheap.
    AttackGraph(const AttackGraph& other);
    AttackGraph& operator=(const AttackGraph& other);
    AttackGraph(AttackGraph&&) noexcept = default;
    AttackGraph& operator=(AttackGraph&&) noexcept = default;

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<int>& crown_jewels() const noexcept {
        return crown_jewels_;
    }
    const std::vector<int>& candidate_initial_nodes() const noexcept {
        return candidate_initial_nodes_;
    }

    bool has_vertex(int id) const noexcept {
        return index_of_.count(id) != 0;
    }

    // Dense index of a vertex id; throws UnknownVertex.
    std::size_t index_of(int id) const;

    const Vertex& vertex(int id) const { return vertices_[index_of(id)]; }

    // Annotation of the vertex, falling back to kDefaultAnnotation. Keeps
    // MDP compilation total even for unannotated sink vertices.
    const CvssAnnotation& effective_annotation(int id) const;

    // Outgoing edges of a vertex, sorted by destination id.
    const std::vector<const Edge*>& out_edges(int id) const {
        return out_edges_[index_of(id)];
    }

    // Undirected neighbor ids (union of in- and out-neighbors), sorted.
    const std::vector<int>& undirected_neighbors(int id) const {
        return undirected_[index_of(id)];
    }

    bool operator==(const AttackGraph& other) const {
        return vertices_ == other.vertices_ && edges_ == other.edges_ &&
               crown_jewels_ == other.crown_jewels_ &&
               candidate_initial_nodes_ == other.candidate_initial_nodes_;
    }

private:
    AttackGraph() = default;
    void build_indexes();

    std::vector<Vertex> vertices_;                // sorted by id
    std::vector<Edge> edges_;                     // sorted by (src,dst)
    std::vector<int> crown_jewels_;               // sorted
    std::vector<int> candidate_initial_nodes_;    // sorted
    std::unordered_map<int, std::size_t> index_of_;
    std::vector<std::vector<const Edge*>> out_edges_;
    std::vector<std::vector<int>> undirected_;
};

} // namespace cja
