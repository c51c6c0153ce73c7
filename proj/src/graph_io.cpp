#include "cja/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cja {

namespace {

using ordered_json = nlohmann::ordered_json;

// Splits text into logical lines, tolerating LF and CRLF. Comment (#) and
// blank lines are dropped; `line_no` is 1-based over the raw input.
struct Line {
    int line_no;
    std::string text;
};

std::vector<Line> content_lines(const std::string& text) {
    std::vector<Line> lines;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(
            pos, eol == std::string::npos ? std::string::npos : eol - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] != '#')
            lines.push_back({line_no, line});
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return lines;
}

int parse_int(std::string_view text, int line_no) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw MalformedLine(line_no, "expected an integer, got '" +
                                         std::string(text) + "'");
    return value;
}

// Reads a double-quoted field starting at `pos`; doubled quotes escape a
// literal quote. Leaves `pos` just past the closing quote.
std::string parse_quoted(const std::string& line, std::size_t& pos,
                         int line_no) {
    if (pos >= line.size() || line[pos] != '"')
        throw MalformedLine(line_no, "expected '\"'");
    ++pos;
    std::string out;
    while (pos < line.size()) {
        const char c = line[pos];
        if (c == '"') {
            if (pos + 1 < line.size() && line[pos + 1] == '"') {
                out.push_back('"');
                pos += 2;
                continue;
            }
            ++pos;
            return out;
        }
        out.push_back(c);
        ++pos;
    }
    throw MalformedLine(line_no, "unterminated quoted field");
}

void expect_comma(const std::string& line, std::size_t& pos, int line_no) {
    if (pos >= line.size() || line[pos] != ',')
        throw MalformedLine(line_no, "expected ','");
    ++pos;
}

std::string quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<Vertex> parse_vertices(const std::string& text) {
    std::vector<Vertex> vertices;
    for (const Line& line : content_lines(text)) {
        std::size_t pos = 0;
        const std::size_t comma = line.text.find(',');
        if (comma == std::string::npos)
            throw MalformedLine(line.line_no, "expected `id,\"label\",\"kind\"`");
        Vertex v;
        v.id = parse_int(std::string_view(line.text).substr(0, comma),
                         line.line_no);
        pos = comma + 1;
        v.label = parse_quoted(line.text, pos, line.line_no);
        expect_comma(line.text, pos, line.line_no);
        const std::string kind = parse_quoted(line.text, pos, line.line_no);
        if (pos != line.text.size())
            throw MalformedLine(line.line_no, "trailing characters");
        try {
            v.kind = vertex_kind_from_string(kind);
        } catch (const Error&) {
            throw MalformedLine(line.line_no, "unknown vertex kind '" + kind +
                                                  "'");
        }
        vertices.push_back(std::move(v));
    }
    return vertices;
}

std::vector<Edge> parse_arcs(const std::string& text) {
    std::vector<Edge> edges;
    std::set<std::pair<int, int>> seen;
    for (const Line& line : content_lines(text)) {
        const std::size_t comma = line.text.find(',');
        if (comma == std::string::npos)
            throw MalformedLine(line.line_no, "expected `src,dst`");
        Edge e;
        const std::string_view view(line.text);
        e.src = parse_int(view.substr(0, comma), line.line_no);
        e.dst = parse_int(view.substr(comma + 1), line.line_no);
        if (e.src == e.dst)
            throw MalformedLine(line.line_no, "self-loop arc " +
                                                  std::to_string(e.src) +
                                                  " -> " +
                                                  std::to_string(e.dst));
        if (!seen.insert({e.src, e.dst}).second)
            throw MalformedLine(line.line_no,
                                "duplicate arc " + std::to_string(e.src) +
                                    " -> " + std::to_string(e.dst));
        edges.push_back(e);
    }
    return edges;
}

int line_of_byte(const std::string& text, std::size_t byte) {
    return 1 + static_cast<int>(std::count(
                   text.begin(),
                   text.begin() + static_cast<std::ptrdiff_t>(
                                      std::min(byte, text.size())),
                   '\n'));
}

} // namespace

AttackGraph parse_graph(const std::string& vertices_text,
                        const std::string& arcs_text,
                        const std::string& annotations_text,
                        std::vector<std::string>* warnings) {
    std::vector<Vertex> vertices = parse_vertices(vertices_text);
    std::vector<Edge> edges = parse_arcs(arcs_text);

    ordered_json doc;
    try {
        doc = ordered_json::parse(annotations_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedLine(line_of_byte(annotations_text, e.byte),
                            "annotations JSON: " + std::string(e.what()));
    }

    std::map<int, std::size_t> vertex_pos;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        // Duplicate ids are caught again in create(); first hit wins here.
        vertex_pos.emplace(vertices[i].id, i);
    }

    try {
        if (doc.contains("vertices")) {
            for (const auto& [key, entry] : doc.at("vertices").items()) {
                int id = 0;
                auto [ptr, ec] = std::from_chars(
                    key.data(), key.data() + key.size(), id);
                if (ec != std::errc() || ptr != key.data() + key.size())
                    throw Error("bad_annotations",
                                "vertex key '" + key + "' is not an integer");
                auto it = vertex_pos.find(id);
                if (it == vertex_pos.end()) throw UnknownVertex(id);
                CvssAnnotation a;
                a.base_score = entry.at("base").get<double>();
                a.exploitability_score =
                    entry.at("exploitability").get<double>();
                a.complexity = complexity_from_string(
                    entry.at("complexity").get<std::string>());
                vertices[it->second].annotation = a;
            }
        }
        if (doc.contains("edges")) {
            std::map<std::pair<int, int>, std::size_t> edge_pos;
            for (std::size_t i = 0; i < edges.size(); ++i)
                edge_pos.emplace(std::pair(edges[i].src, edges[i].dst), i);
            for (const auto& entry : doc.at("edges")) {
                const int src = entry.at("src").get<int>();
                const int dst = entry.at("dst").get<int>();
                auto it = edge_pos.find({src, dst});
                if (it == edge_pos.end())
                    throw DanglingArc(src, dst,
                                      "annotated but absent from arcs");
                Edge& e = edges[it->second];
                if (entry.contains("firewall"))
                    e.firewall = entry.at("firewall").get<bool>();
                if (entry.contains("service"))
                    e.service = service_from_string(
                        entry.at("service").get<std::string>());
            }
        }
        std::vector<int> cjs;
        std::vector<int> candidates;
        if (doc.contains("crown_jewels"))
            cjs = doc.at("crown_jewels").get<std::vector<int>>();
        if (doc.contains("initial_candidates"))
            candidates = doc.at("initial_candidates").get<std::vector<int>>();
        return AttackGraph::create(std::move(vertices), std::move(edges),
                                   std::move(cjs), std::move(candidates),
                                   warnings);
    } catch (const nlohmann::json::exception& e) {
        throw Error("bad_annotations",
                    "annotations JSON: " + std::string(e.what()));
    }
}

GraphText serialize_graph(const AttackGraph& graph) {
    GraphText text;

    std::ostringstream vertices;
    vertices << "# id,\"label\",\"kind\"\n";
    for (const Vertex& v : graph.vertices())
        vertices << v.id << ',' << quote(v.label) << ",\""
                 << to_string(v.kind) << "\"\n";
    text.vertices_text = vertices.str();

    std::ostringstream arcs;
    arcs << "# src,dst\n";
    for (const Edge& e : graph.edges()) arcs << e.src << ',' << e.dst << '\n';
    text.arcs_text = arcs.str();

    ordered_json doc;
    ordered_json vertex_annotations = ordered_json::object();
    for (const Vertex& v : graph.vertices()) {
        if (!v.annotation) continue;
        ordered_json entry;
        entry["base"] = v.annotation->base_score;
        entry["exploitability"] = v.annotation->exploitability_score;
        entry["complexity"] = to_string(v.annotation->complexity);
        vertex_annotations[std::to_string(v.id)] = std::move(entry);
    }
    doc["vertices"] = std::move(vertex_annotations);
    ordered_json edge_annotations = ordered_json::array();
    for (const Edge& e : graph.edges()) {
        if (!e.firewall && e.service == Service::None) continue;
        ordered_json entry;
        entry["src"] = e.src;
        entry["dst"] = e.dst;
        entry["firewall"] = e.firewall;
        entry["service"] = to_string(e.service);
        edge_annotations.push_back(std::move(entry));
    }
    doc["edges"] = std::move(edge_annotations);
    doc["crown_jewels"] = graph.crown_jewels();
    doc["initial_candidates"] = graph.candidate_initial_nodes();
    text.annotations_text = doc.dump(2) + "\n";
    return text;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("io_error", "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("io_error", "cannot write " + path.string());
    out << text;
}

std::string dot_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace

AttackGraph load_graph_dir(const std::filesystem::path& dir,
                           std::vector<std::string>* warnings) {
    return parse_graph(read_file(dir / kVerticesFile),
                       read_file(dir / kArcsFile),
                       read_file(dir / kAnnotationsFile), warnings);
}

void write_graph_dir(const AttackGraph& graph,
                     const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const GraphText text = serialize_graph(graph);
    write_file(dir / kVerticesFile, text.vertices_text);
    write_file(dir / kArcsFile, text.arcs_text);
    write_file(dir / kAnnotationsFile, text.annotations_text);
}

std::string emit_dot(const AttackGraph& graph,
                     const std::vector<AttackPath>& highlight_paths) {
    std::set<int> path_vertices;
    std::set<std::pair<int, int>> path_edges;
    for (const AttackPath& path : highlight_paths) {
        for (int id : path.vertices) {
            if (!graph.has_vertex(id)) throw UnknownVertexInPath(id);
            path_vertices.insert(id);
        }
        for (std::size_t i = 1; i < path.vertices.size(); ++i)
            path_edges.insert({path.vertices[i - 1], path.vertices[i]});
    }

    const std::set<int> cjs(graph.crown_jewels().begin(),
                            graph.crown_jewels().end());
    const std::set<int> candidates(graph.candidate_initial_nodes().begin(),
                                   graph.candidate_initial_nodes().end());

    std::ostringstream out;
    out << "digraph attack_graph {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=ellipse, fontsize=10];\n";
    for (const Vertex& v : graph.vertices()) {
        out << "  " << v.id << " [label=\"" << v.id << ": "
            << dot_escape(v.label) << "\"";
        if (cjs.count(v.id))
            out << ", shape=doublecircle, style=filled, fillcolor=gold";
        else if (candidates.count(v.id))
            out << ", shape=box, style=filled, fillcolor=lightblue";
        if (path_vertices.count(v.id)) out << ", penwidth=2";
        out << "];\n";
    }
    for (const Edge& e : graph.edges()) {
        out << "  " << e.src << " -> " << e.dst << " [";
        bool first = true;
        auto attr = [&](const std::string& text) {
            if (!first) out << ", ";
            out << text;
            first = false;
        };
        if (path_edges.count({e.src, e.dst}))
            attr("color=red, penwidth=2");
        if (e.firewall) {
            attr("style=dashed");
            if (e.service != Service::None)
                attr(std::string("label=\"") + to_string(e.service) + "\"");
        }
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace cja
