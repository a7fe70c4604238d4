#include "phylo/classes.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace phylo {

const std::vector<NetworkClass>& all_network_classes() {
    static const std::vector<NetworkClass> classes = {
        NetworkClass::tree_child,   NetworkClass::stack_free,
        NetworkClass::tree_based,   NetworkClass::valid,
        NetworkClass::reticulation_visible, NetworkClass::orchard,
    };
    return classes;
}

std::string to_string(NetworkClass c) {
    switch (c) {
        case NetworkClass::tree_child: return "tree-child";
        case NetworkClass::stack_free: return "stack-free";
        case NetworkClass::tree_based: return "tree-based";
        case NetworkClass::valid: return "valid";
        case NetworkClass::reticulation_visible: return "reticulation-visible";
        case NetworkClass::orchard: return "orchard";
        case NetworkClass::any: return "any";
    }
    return "unknown";
}

std::optional<NetworkClass> parse_network_class(const std::string& name) {
    std::string normalized = name;
    std::replace(normalized.begin(), normalized.end(), '_', '-');
    for (NetworkClass c : all_network_classes())
        if (normalized == to_string(c)) return c;
    if (normalized == "any") return NetworkClass::any;
    return std::nullopt;
}

int chain_keep_length(NetworkClass c) {
    switch (c) {
        case NetworkClass::tree_child: return 3;
        case NetworkClass::stack_free: return 3;
        case NetworkClass::tree_based: return 2;
        case NetworkClass::valid: return 3;
        case NetworkClass::reticulation_visible: return 3;
        case NetworkClass::orchard: return 3;
        // Keeping one leaf per side is not enough even without a class
        // constraint: rooting at a chain leaf may force the *next* chain
        // vertex to be a reticulation absorbing the flow from the far end
        // of the side, so a second kept leaf is required.
        case NetworkClass::any: return 2;
    }
    return 3;
}

std::optional<ArcKey> find_stack(const DirectedNetwork& net) {
    for (const ArcKey& a : net.arcs())
        if (net.is_reticulation(a.tail) && net.is_reticulation(a.head)) return a;
    return std::nullopt;
}

namespace {

// W-shape test on one vertex: at least two children, all reticulations.
bool w_shape_at(const DirectedNetwork& net, const VertexId& v) {
    const std::vector<VertexId> kids = net.children(v);
    if (kids.size() < 2) return false;
    for (const VertexId& c : kids)
        if (!net.is_reticulation(c)) return false;
    return true;
}

bool camel_at(const DirectedNetwork& net, const VertexId& v) {
    if (!w_shape_at(net, v)) return false;
    const std::vector<VertexId> my_parents = net.parents(v);
    const std::set<VertexId> parent_set(my_parents.begin(), my_parents.end());
    for (const VertexId& w : net.children(v))
        for (const VertexId& u : net.parents(w))
            if (u != v && parent_set.count(u)) return true;
    return false;
}

template <typename Pred>
std::optional<VertexId> smallest_vertex_where(const DirectedNetwork& net, Pred pred) {
    std::optional<VertexId> best;
    for (const VertexId& v : net.vertices())
        if (pred(v) && (!best || v < *best)) best = v;
    return best;
}

}  // namespace

std::optional<VertexId> find_w_shape(const DirectedNetwork& net) {
    return smallest_vertex_where(net, [&](const VertexId& v) { return w_shape_at(net, v); });
}

std::optional<VertexId> find_camel(const DirectedNetwork& net) {
    return smallest_vertex_where(net, [&](const VertexId& v) { return camel_at(net, v); });
}

bool is_tree_child(const DirectedNetwork& net) {
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (net.outdegree_at(v) == 0) continue;  // leaf
        bool has_tree_child = false;
        for (const AdjEntry& c : net.children_of(v))
            if (net.indegree_at(c.neighbor) == 1) {
                has_tree_child = true;
                break;
            }
        if (!has_tree_child) return false;
    }
    return true;
}

bool is_stack_free(const DirectedNetwork& net) { return !find_stack(net); }

bool is_valid(const DirectedNetwork& net) {
    return !find_stack(net) && !find_camel(net);
}

namespace {

// Binary fence scan.  Crossing a reticulation v moves between its two
// parents; a vertex can relay between two such crossings only when it has
// two distinct reticulation children.  A fence is then a simple path in
// this crossing graph between two reticulations that have a reticulation
// child ("terminals").  A path returning to its own start would have to
// reuse the start's single reticulation-child crossing, which the trail
// condition forbids, so such arrivals are skipped.
bool has_fence_binary(const DirectedNetwork& net) {
    const int n = net.vertex_count();
    std::vector<bool> is_retic(n), is_terminal(n), can_relay(n);
    for (int v = 0; v < n; ++v) is_retic[v] = net.indegree_at(v) >= 2;
    for (int v = 0; v < n; ++v) {
        int retic_children = 0;
        for (const AdjEntry& c : net.children_of(v))
            if (is_retic[c.neighbor]) ++retic_children;
        is_terminal[v] = is_retic[v] && retic_children >= 1;
        can_relay[v] = retic_children >= 2;
    }

    std::vector<bool> visited(n);
    for (int start = 0; start < n; ++start) {
        if (!is_terminal[start]) continue;
        std::fill(visited.begin(), visited.end(), false);
        visited[start] = true;
        std::deque<int> queue = {start};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (const AdjEntry& ce : net.children_of(u)) {
                const int v = ce.neighbor;
                if (!is_retic[v]) continue;
                for (const AdjEntry& pe : net.parents_of(v)) {
                    const int p = pe.neighbor;
                    if (p == u || p == start) continue;
                    if (is_terminal[p]) return true;
                    if (can_relay[p] && !visited[p]) {
                        visited[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
    }
    return false;
}

}  // namespace

bool is_tree_based(const DirectedNetwork& net) {
    if (net.is_binary()) return !has_fence_binary(net);
    return is_tree_based_exhaustive(net);
}

bool is_tree_based_exhaustive(const DirectedNetwork& net) {
    return find_base_tree(net).has_value();
}

std::optional<std::vector<ArcKey>> find_base_tree(const DirectedNetwork& net) {
    const int n = net.vertex_count();
    std::vector<int> retics;
    std::uint64_t combinations = 1;
    for (int v = 0; v < n; ++v)
        if (net.indegree_at(v) >= 2) {
            retics.push_back(v);
            combinations *= net.indegree_at(v);
            if (combinations > (std::uint64_t{1} << 20))
                throw std::invalid_argument(
                    "exhaustive tree-based check: too many incoming-arc choices");
        }

    // Fixed part: every non-reticulation vertex keeps its single parent.
    std::vector<int> base_out(n, 0);
    for (int v = 0; v < n; ++v)
        if (net.indegree_at(v) == 1) ++base_out[net.parents_of(v).front().neighbor];

    const int r = static_cast<int>(retics.size());
    std::vector<std::size_t> choice(r, 0);
    std::vector<int> out(n);
    for (std::uint64_t step = 0; step < combinations; ++step) {
        out = base_out;
        for (int i = 0; i < r; ++i)
            ++out[net.parents_of(retics[i])[choice[i]].neighbor];
        // The chosen arcs always form a tree spanning all vertices (each
        // non-root vertex keeps exactly one parent and the network is
        // acyclic); it is a base tree iff no internal vertex became a leaf
        // of it.
        bool ok = true;
        for (int v = 0; v < n && ok; ++v)
            if (net.outdegree_at(v) != 0 && out[v] == 0) ok = false;
        if (ok) {
            std::vector<ArcKey> arcs;
            for (int v = 0; v < n; ++v) {
                if (net.indegree_at(v) == 1) {
                    arcs.emplace_back(net.id_of(net.parents_of(v).front().neighbor),
                                      net.id_of(v));
                }
            }
            for (int i = 0; i < r; ++i) {
                arcs.emplace_back(net.id_of(net.parents_of(retics[i])[choice[i]].neighbor),
                                  net.id_of(retics[i]));
            }
            std::sort(arcs.begin(), arcs.end());
            return arcs;
        }
        for (int i = 0; i < r; ++i) {
            if (++choice[i] < net.parents_of(retics[i]).size()) break;
            choice[i] = 0;
        }
    }
    return std::nullopt;
}

bool is_reticulation_visible(const DirectedNetwork& net) {
    return !find_invisible_reticulation(net).has_value();
}

std::optional<VertexId> find_invisible_reticulation(const DirectedNetwork& net) {
    const int n = net.vertex_count();
    std::optional<VertexId> best;
    std::vector<int> order;  // reachability scratch
    for (int r = 0; r < n; ++r) {
        if (net.indegree_at(r) < 2) continue;
        // Which leaves does the root still reach when r is deleted?
        std::vector<bool> seen(n, false);
        order.assign(1, net.root_index());
        seen[net.root_index()] = true;
        for (std::size_t i = 0; i < order.size(); ++i)
            for (const AdjEntry& ce : net.children_of(order[i]))
                if (ce.neighbor != r && !seen[ce.neighbor]) {
                    seen[ce.neighbor] = true;
                    order.push_back(ce.neighbor);
                }
        bool some_leaf_lost = false;
        for (int v = 0; v < n && !some_leaf_lost; ++v)
            if (net.outdegree_at(v) == 0 && !seen[v]) some_leaf_lost = true;
        if (!some_leaf_lost) {
            // r is not visible from any leaf.
            const VertexId& id = net.id_of(r);
            if (!best || id < *best) best = id;
        }
    }
    return best;
}

namespace {

// Mutable picture of a network under cherry picking.  Vertices are ids;
// leaves carry labels.  The structure tolerates shapes a DirectedNetwork
// cannot (a root of out-degree 1 mid-reduction), so it is kept as plain
// adjacency sets.
struct PickState {
    std::map<VertexId, std::set<VertexId>> children;
    std::map<VertexId, std::set<VertexId>> parents;
    std::map<VertexId, std::string> leaf_label;

    explicit PickState(const DirectedNetwork& net) {
        for (const VertexId& v : net.vertices()) {
            children[v] = {};
            parents[v] = {};
        }
        for (const ArcKey& a : net.arcs()) {
            children[a.tail].insert(a.head);
            parents[a.head].insert(a.tail);
        }
        for (const auto& [v, label] : net.leaf_labels()) leaf_label[v] = label;
    }

    bool is_retic(const VertexId& v) const { return parents.at(v).size() >= 2; }

    int reticulation_count() const {
        int count = 0;
        for (const auto& [v, ps] : parents) {
            (void)v;
            if (ps.size() >= 2) ++count;
        }
        return count;
    }

    void remove_arc(const VertexId& tail, const VertexId& head) {
        children[tail].erase(head);
        parents[head].erase(tail);
    }

    void add_arc(const VertexId& tail, const VertexId& head) {
        children[tail].insert(head);
        parents[head].insert(tail);
    }

    // Splices out a vertex with one parent and one child.
    void suppress_if_degree_two(const VertexId& v) {
        if (parents[v].size() != 1 || children[v].size() != 1) return;
        const VertexId p = *parents[v].begin();
        const VertexId c = *children[v].begin();
        remove_arc(p, v);
        remove_arc(v, c);
        children.erase(v);
        parents.erase(v);
        add_arc(p, c);
    }

    void remove_leaf(const VertexId& leaf) {
        const VertexId p = *parents[leaf].begin();
        remove_arc(p, leaf);
        children.erase(leaf);
        parents.erase(leaf);
        leaf_label.erase(leaf);
        suppress_if_degree_two(p);
    }
};

struct Move {
    std::string first, second;  // leaf labels; ordering key
    bool reticulated = false;
    VertexId first_id, second_id;

    bool operator<(const Move& o) const {
        if (first != o.first) return first < o.first;
        if (second != o.second) return second < o.second;
        return reticulated < o.reticulated;
    }
};

std::optional<Move> best_move(const PickState& s) {
    std::optional<Move> best;
    auto consider = [&](const Move& m) {
        if (!best || m < *best) best = m;
    };
    for (const auto& [x, label_x] : s.leaf_label) {
        const VertexId px = *s.parents.at(x).begin();
        // Plain cherry: another leaf under the same parent.
        for (const VertexId& y : s.children.at(px)) {
            if (y == x || !s.leaf_label.count(y)) continue;
            const std::string& label_y = s.leaf_label.at(y);
            if (label_x < label_y)
                consider(Move{label_x, label_y, false, x, y});
        }
        // Reticulated cherry: x under a reticulation, a leaf y under one of
        // the reticulation's other parents.
        if (!s.is_retic(px)) continue;
        for (const VertexId& q : s.parents.at(px)) {
            for (const VertexId& y : s.children.at(q)) {
                if (y == x || !s.leaf_label.count(y)) continue;
                consider(Move{label_x, s.leaf_label.at(y), true, x, y});
            }
        }
    }
    return best;
}

}  // namespace

OrchardResult is_orchard(const DirectedNetwork& net) {
    PickState state(net);
    OrchardResult result;
    while (true) {
        if (state.reticulation_count() == 0) {
            result.orchard = true;
            return result;
        }
        const std::optional<Move> move = best_move(state);
        if (!move) return result;  // stalled with reticulations left
        result.sequence.push_back(CherryPick{move->first, move->second, move->reticulated});
        if (move->reticulated) {
            const VertexId px = *state.parents.at(move->first_id).begin();
            const VertexId py = *state.parents.at(move->second_id).begin();
            state.remove_arc(py, px);
            state.suppress_if_degree_two(px);
            state.suppress_if_degree_two(py);
        } else {
            state.remove_leaf(move->second_id);
        }
    }
}

ClassReport class_membership(const DirectedNetwork& net) {
    ClassReport report;
    report.tree_child = is_tree_child(net);
    report.stack_free = is_stack_free(net);
    report.tree_based = is_tree_based(net);
    report.valid = is_valid(net);
    report.reticulation_visible = is_reticulation_visible(net);
    report.orchard = is_orchard(net).orchard;
    return report;
}

bool satisfies(const DirectedNetwork& net, NetworkClass c) {
    switch (c) {
        case NetworkClass::tree_child: return is_tree_child(net);
        case NetworkClass::stack_free: return is_stack_free(net);
        case NetworkClass::tree_based: return is_tree_based(net);
        case NetworkClass::valid: return is_valid(net);
        case NetworkClass::reticulation_visible: return is_reticulation_visible(net);
        case NetworkClass::orchard: return is_orchard(net).orchard;
        case NetworkClass::any: return true;
    }
    return false;
}

}  // namespace phylo
