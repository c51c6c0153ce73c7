#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cja/graph.hpp"
#include "cja/path.hpp"

namespace cja {

// Text forms of one graph: MulVal-style vertex/arc listings plus a JSON
// annotation sidecar.
//
// VERTICES file: one record per line, `id,"label","kind"`,
//   kind in {LEAF, AND, OR}. `#` begins a comment line.
// ARCS file: one record per line, `src,dst`; comments as above.
// Annotations file: JSON object
//   {"vertices": {"<id>": {"base": x, "exploitability": y,
//                          "complexity": "LOW|MEDIUM|HIGH"}},
//    "edges": [{"src": i, "dst": j, "firewall": bool,
//               "service": "FTP|SMTP|HTTP|SSH|NONE"}],
//    "crown_jewels": [ids], "initial_candidates": [ids]}
struct GraphText {
    std::string vertices_text;
    std::string arcs_text;
    std::string annotations_text;
};

// Parses and validates the three text inputs into an AttackGraph.
// Default annotations applied by AttackGraph::create are reported through
// `warnings` when given.
AttackGraph parse_graph(const std::string& vertices_text,
                        const std::string& arcs_text,
                        const std::string& annotations_text,
                        std::vector<std::string>* warnings = nullptr);

// Inverse of parse_graph. Output is deterministic: vertices by id, arcs by
// (src,dst), annotation keys in sorted order.
GraphText serialize_graph(const AttackGraph& graph);

// Directory layout used by the CLI: vertices.csv, arcs.csv, annotations.json.
inline constexpr const char* kVerticesFile = "vertices.csv";
inline constexpr const char* kArcsFile = "arcs.csv";
inline constexpr const char* kAnnotationsFile = "annotations.json";

AttackGraph load_graph_dir(const std::filesystem::path& dir,
                           std::vector<std::string>* warnings = nullptr);
void write_graph_dir(const AttackGraph& graph,
                     const std::filesystem::path& dir);

// Renders the graph as a DOT digraph. Crown jewels, candidate initial nodes,
// firewall edges, and the given paths are visually distinguished.
std::string emit_dot(const AttackGraph& graph,
                     const std::vector<AttackPath>& highlight_paths = {});

} // namespace cja
