#pragma once

#include <map>
#include <optional>
#include <string>

#include "phylo/network.hpp"

namespace phylo {

/// A parsed network file. The kind is inferred from the line types present:
/// only `edge` lines give an undirected network, only `arc` lines a directed
/// one, a mix gives a partly-directed network. `root-edge` and `retic` lines
/// are instance annotations and are carried alongside the network.
struct NetworkFile {
    enum class Kind { undirected, partly_directed, directed };

    Kind kind;
    std::optional<UndirectedNetwork> undirected;
    std::optional<PartlyDirectedNetwork> partly;
    std::optional<DirectedNetwork> directed;

    std::optional<EdgeKey> root_edge;
    /// Desired indegree per declared reticulation (default 2).
    std::map<VertexId, int> retic_degrees;

    /// The underlying undirected network regardless of kind (for the
    /// directed kind this suppresses the root and may flag a parallel pair).
    UnderlyingResult as_undirected() const;
};

/// Parses the line-based network format:
///   edge u v        undirected edge
///   arc u v         arc u -> v
///   leaf v LABEL    leaf label (mandatory for every degree-1 vertex)
///   root-edge u v   designated root edge for orientation instances
///   retic v [d]     declared reticulation with desired indegree d (default 2)
/// `#` starts a comment; tokens are whitespace-separated.
/// Throws ParseError for malformed text and ValidationError for structural
/// violations.
NetworkFile parse_network_text(const std::string& text);

/// Reads and parses a file; throws std::runtime_error when unreadable.
NetworkFile load_network_file(const std::string& path);

/// Serializers producing the same line-based format. Deterministic:
/// lines are emitted in sorted order.
std::string to_text(const UndirectedNetwork& net,
                    const std::optional<EdgeKey>& root_edge = std::nullopt,
                    const std::map<VertexId, int>& retic_degrees = {});
std::string to_text(const DirectedNetwork& net);
std::string to_text(const PartlyDirectedNetwork& net);

/// GraphViz exports. Undirected edges use `--`, arcs `->`; reticulations
/// are drawn double-circled. For the undirected overload the reticulations
/// must be supplied (e.g. from `retic` declarations).
std::string to_dot(const UndirectedNetwork& net, const std::map<VertexId, int>& retics = {});
std::string to_dot(const DirectedNetwork& net);
std::string to_dot(const PartlyDirectedNetwork& net);

/// Parses a desired-indegree file: lines `v d`, `#` comments.
DegreeMap parse_degree_text(const std::string& text);

}  // namespace phylo
