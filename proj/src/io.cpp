#include "phylo/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace phylo {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

void require_user_id(const std::string& id, int line_no) {
    if (!is_user_vertex_id(id))
        throw ParseError(line_no, "vertex id '" + id + "' uses a reserved prefix");
}

}  // namespace

NetworkFile parse_network_text(const std::string& text) {
    std::vector<EdgeKey> edges;
    std::vector<ArcKey> arcs;
    std::map<VertexId, std::string> labels;
    std::optional<EdgeKey> root_edge;
    std::map<VertexId, int> retics;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> tok = tokenize(line);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        auto need = [&](std::size_t lo, std::size_t hi) {
            if (tok.size() < lo + 1 || tok.size() > hi + 1)
                throw ParseError(line_no, "'" + kw + "' expects " + std::to_string(lo) +
                                              (lo == hi ? "" : ".." + std::to_string(hi)) +
                                              " arguments");
        };
        if (kw == "edge") {
            need(2, 2);
            require_user_id(tok[1], line_no);
            require_user_id(tok[2], line_no);
            edges.emplace_back(tok[1], tok[2]);
        } else if (kw == "arc") {
            need(2, 2);
            require_user_id(tok[1], line_no);
            require_user_id(tok[2], line_no);
            arcs.emplace_back(tok[1], tok[2]);
        } else if (kw == "leaf") {
            need(2, 2);
            require_user_id(tok[1], line_no);
            if (!labels.emplace(tok[1], tok[2]).second)
                throw ParseError(line_no, "second label for leaf '" + tok[1] + "'");
        } else if (kw == "root-edge") {
            need(2, 2);
            if (root_edge) throw ParseError(line_no, "second root-edge line");
            root_edge = EdgeKey(tok[1], tok[2]);
        } else if (kw == "retic") {
            need(1, 2);
            require_user_id(tok[1], line_no);
            int d = 2;
            if (tok.size() == 3) {
                try {
                    d = std::stoi(tok[2]);
                } catch (const std::exception&) {
                    throw ParseError(line_no, "retic indegree '" + tok[2] + "' is not a number");
                }
                if (d < 2) throw ParseError(line_no, "retic indegree must be at least 2");
            }
            if (!retics.emplace(tok[1], d).second)
                throw ParseError(line_no, "second retic line for '" + tok[1] + "'");
        } else {
            throw ParseError(line_no, "unknown keyword '" + kw + "'");
        }
    }

    if (edges.empty() && arcs.empty()) throw ParseError(line_no, "no edge or arc lines");

    NetworkFile file;
    file.root_edge = root_edge;
    file.retic_degrees = retics;
    if (arcs.empty()) {
        file.kind = NetworkFile::Kind::undirected;
        file.undirected = UndirectedNetwork(std::move(edges), std::move(labels));
    } else if (edges.empty()) {
        file.kind = NetworkFile::Kind::directed;
        file.directed = DirectedNetwork(std::move(arcs), std::move(labels));
    } else {
        file.kind = NetworkFile::Kind::partly_directed;
        file.partly = PartlyDirectedNetwork(std::move(edges), std::move(arcs), std::move(labels));
    }

    // Annotation sanity: declared vertices must exist.
    auto has_vertex = [&](const VertexId& v) {
        switch (file.kind) {
            case NetworkFile::Kind::undirected: return file.undirected->has_vertex(v);
            case NetworkFile::Kind::directed: return file.directed->has_vertex(v);
            default: return file.partly->underlying().has_vertex(v);
        }
    };
    for (const auto& [v, d] : retics)
        if (!has_vertex(v)) throw ValidationError("retic-declaration", v, "unknown vertex");
    if (root_edge && !(has_vertex(root_edge->a) && has_vertex(root_edge->b)))
        throw ValidationError("root-edge", root_edge->a, "root edge endpoint missing");
    return file;
}

UnderlyingResult NetworkFile::as_undirected() const {
    switch (kind) {
        case Kind::undirected: return {*undirected, std::nullopt};
        case Kind::partly_directed: return {partly->underlying(), std::nullopt};
        default: return underlying_network(*directed);
    }
}

NetworkFile load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network_text(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

void emit_labels(std::ostringstream& out, const std::map<VertexId, std::string>& labels) {
    for (const auto& [v, label] : labels) out << "leaf " << v << " " << label << "\n";
}

}  // namespace

std::string to_text(const UndirectedNetwork& net, const std::optional<EdgeKey>& root_edge,
                    const std::map<VertexId, int>& retic_degrees) {
    std::ostringstream out;
    for (const EdgeKey& e : net.edges()) out << "edge " << e.a << " " << e.b << "\n";
    emit_labels(out, net.leaf_labels());
    if (root_edge) out << "root-edge " << root_edge->a << " " << root_edge->b << "\n";
    for (const auto& [v, d] : retic_degrees) {
        out << "retic " << v;
        if (d != 2) out << " " << d;
        out << "\n";
    }
    return out.str();
}

std::string to_text(const DirectedNetwork& net) {
    std::ostringstream out;
    std::vector<ArcKey> arcs = net.arcs();
    std::sort(arcs.begin(), arcs.end());
    for (const ArcKey& a : arcs) out << "arc " << a.tail << " " << a.head << "\n";
    emit_labels(out, net.leaf_labels());
    return out.str();
}

std::string to_text(const PartlyDirectedNetwork& net) {
    std::ostringstream out;
    for (const EdgeKey& e : net.undirected_edges()) out << "edge " << e.a << " " << e.b << "\n";
    for (const ArcKey& a : net.arcs()) out << "arc " << a.tail << " " << a.head << "\n";
    emit_labels(out, net.leaf_labels());
    return out.str();
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

void emit_dot_node(std::ostringstream& out, const VertexId& v, bool leaf,
                   const std::string& label, bool retic) {
    out << "  \"" << dot_escape(v) << "\" [";
    if (leaf)
        out << "shape=none, label=\"" << dot_escape(label) << "\"";
    else if (retic)
        out << "shape=doublecircle, label=\"\"";
    else
        out << "shape=circle, label=\"\"";
    out << "];\n";
}

}  // namespace

std::string to_dot(const UndirectedNetwork& net, const std::map<VertexId, int>& retics) {
    std::ostringstream out;
    out << "graph network {\n";
    for (const VertexId& v : net.vertices())
        emit_dot_node(out, v, net.is_leaf(v), net.is_leaf(v) ? net.label_of(v) : "",
                      retics.count(v) > 0);
    for (const EdgeKey& e : net.edges())
        out << "  \"" << dot_escape(e.a) << "\" -- \"" << dot_escape(e.b) << "\";\n";
    out << "}\n";
    return out.str();
}

std::string to_dot(const DirectedNetwork& net) {
    std::ostringstream out;
    out << "digraph network {\n";
    std::vector<VertexId> verts = net.vertices();
    std::sort(verts.begin(), verts.end());
    for (const VertexId& v : verts)
        emit_dot_node(out, v, net.is_leaf(v), net.is_leaf(v) ? net.label_of(v) : "",
                      net.is_reticulation(v));
    std::vector<ArcKey> arcs = net.arcs();
    std::sort(arcs.begin(), arcs.end());
    for (const ArcKey& a : arcs)
        out << "  \"" << dot_escape(a.tail) << "\" -> \"" << dot_escape(a.head) << "\";\n";
    out << "}\n";
    return out.str();
}

std::string to_dot(const PartlyDirectedNetwork& net) {
    std::ostringstream out;
    out << "digraph network {\n";
    const UndirectedNetwork& u = net.underlying();
    std::map<VertexId, int> indeg;
    for (const ArcKey& a : net.arcs()) ++indeg[a.head];
    for (const VertexId& v : u.vertices())
        emit_dot_node(out, v, u.is_leaf(v), u.is_leaf(v) ? u.label_of(v) : "", indeg[v] >= 2);
    for (const EdgeKey& e : net.undirected_edges())
        out << "  \"" << dot_escape(e.a) << "\" -> \"" << dot_escape(e.b)
            << "\" [dir=none];\n";
    for (const ArcKey& a : net.arcs())
        out << "  \"" << dot_escape(a.tail) << "\" -> \"" << dot_escape(a.head) << "\";\n";
    out << "}\n";
    return out.str();
}

DegreeMap parse_degree_text(const std::string& text) {
    DegreeMap degrees;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> tok = tokenize(line);
        if (tok.empty()) continue;
        if (tok.size() != 2) throw ParseError(line_no, "expected: VERTEX INDEGREE");
        int d = 0;
        try {
            d = std::stoi(tok[1]);
        } catch (const std::exception&) {
            throw ParseError(line_no, "indegree '" + tok[1] + "' is not a number");
        }
        if (!degrees.emplace(tok[0], d).second)
            throw ParseError(line_no, "second entry for vertex '" + tok[0] + "'");
    }
    return degrees;
}

}  // namespace phylo
