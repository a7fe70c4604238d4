#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phylo/network.hpp"

namespace phylo {

/// The directed network classes the orientation tools can target.  `any`
/// means "no class constraint": every directed phylogenetic network counts.
enum class NetworkClass {
    tree_child,
    stack_free,
    tree_based,
    valid,
    reticulation_visible,
    orchard,
    any,
};

/// All concrete classes (everything except `any`), in declaration order.
const std::vector<NetworkClass>& all_network_classes();

std::string to_string(NetworkClass c);

/// Parses the hyphenated class name ("tree-child", "stack-free",
/// "tree-based", "valid", "reticulation-visible", "orchard", "any");
/// underscores are accepted in place of hyphens.
std::optional<NetworkClass> parse_network_class(const std::string& name);

/// How many leaves per generator side the class-orientation search must
/// keep when shortening chains; membership in the class is unaffected by
/// trimming a chain down to this many leaves.
int chain_keep_length(NetworkClass c);

/// An arc joining two reticulations (smallest such arc), if any.
std::optional<ArcKey> find_stack(const DirectedNetwork& net);

/// A vertex with at least two children, all of them reticulations
/// (smallest such vertex id), if any.
std::optional<VertexId> find_w_shape(const DirectedNetwork& net);

/// A W-shape vertex v that shares a parent with one of its reticulation
/// children (smallest such v), if any.
std::optional<VertexId> find_camel(const DirectedNetwork& net);

/// True iff every non-leaf vertex has at least one child of in-degree 1
/// (a tree vertex or a leaf).
bool is_tree_child(const DirectedNetwork& net);

/// True iff no arc joins two reticulations.
bool is_stack_free(const DirectedNetwork& net);

/// True iff deleting a reticulation arc and suppressing its endpoints
/// always leaves a phylogenetic network; equivalently, the network has no
/// stack and no camel.
bool is_valid(const DirectedNetwork& net);

/// True iff the network can be obtained from a rooted tree by subdividing
/// arcs and adding arcs between subdividing vertices.  For binary networks
/// this is a linear-time scan for a fence: a trail
/// u_1, v_1, u_2, v_2, ..., u_k, v_k, u_{k+1} (k >= 1, arcs all distinct)
/// where each v_i is a child of both u_i and u_{i+1} and the two end
/// vertices u_1, u_{k+1} are reticulations; the network is tree-based
/// exactly when no fence exists.  Nonbinary networks fall back to the
/// definitional search (`is_tree_based_exhaustive`).
bool is_tree_based(const DirectedNetwork& net);

/// Decides tree-basedness from the definition instead: some choice of one
/// incoming arc per reticulation must span the vertices while keeping every
/// internal vertex's out-degree positive.  Exponential in the reticulation
/// count (the number of arc choices is capped at 2^20; throws
/// std::invalid_argument beyond that).  Independent of the fence scan.
bool is_tree_based_exhaustive(const DirectedNetwork& net);

/// The arcs of a base tree (one incoming arc per non-root vertex, spanning
/// all vertices, every internal vertex keeping out-degree > 0), or nullopt
/// when the network is not tree-based.  Same search and cap as
/// is_tree_based_exhaustive.
std::optional<std::vector<ArcKey>> find_base_tree(const DirectedNetwork& net);

/// True iff every reticulation is visible: deleting it makes some leaf
/// unreachable from the root.
bool is_reticulation_visible(const DirectedNetwork& net);

/// A reticulation whose deletion leaves every leaf reachable (smallest
/// such vertex id), if any; its existence negates reticulation visibility.
std::optional<VertexId> find_invisible_reticulation(const DirectedNetwork& net);

/// One step of a cherry-picking sequence.  For a plain cherry, `first` is
/// the kept leaf and `second` the removed one.  For a reticulated cherry,
/// no leaf is removed: `first` hangs under the reticulation, `second` under
/// the tree vertex, and the arc from second's parent to first's parent is
/// deleted.
struct CherryPick {
    std::string first;
    std::string second;
    bool reticulated = false;
};

struct OrchardResult {
    bool orchard = false;
    /// The picks applied, in order.  When `orchard` is false, the sequence
    /// shows how far the reduction got before stalling.
    std::vector<CherryPick> sequence;
};

/// Repeatedly picks cherries and reticulated cherries, always the
/// lexicographically smallest available pick (ordered by the two leaf
/// labels, plain cherries before reticulated ones).  Whether the reduction
/// reaches a reticulation-free network does not depend on the pick order,
/// so a single greedy pass decides membership.
OrchardResult is_orchard(const DirectedNetwork& net);

struct ClassReport {
    bool tree_child = false;
    bool stack_free = false;
    bool tree_based = false;
    bool valid = false;
    bool reticulation_visible = false;
    bool orchard = false;
};

/// Membership in all six concrete classes at once.
ClassReport class_membership(const DirectedNetwork& net);

/// Membership in a single class; `NetworkClass::any` is always satisfied.
bool satisfies(const DirectedNetwork& net, NetworkClass c);

}  // namespace phylo
