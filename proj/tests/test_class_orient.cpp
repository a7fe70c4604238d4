#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "phylo/class_orient.hpp"
#include "phylo/classes.hpp"
#include "phylo/decompose.hpp"
#include "phylo/io.hpp"
#include "phylo/network.hpp"
#include "phylo/orient.hpp"
#include "phylo/random_net.hpp"

using namespace phylo;
using testutil::load_fixture;
using testutil::self_labels;

namespace {

/// Third, deliberately naive implementation of the rootable edge set: try
/// every edge against every reticulation set.
std::vector<EdgeKey> rootable_raw(const UndirectedNetwork& net, NetworkClass c) {
    std::vector<VertexId> internal;
    for (const VertexId& v : net.vertices())
        if (!net.is_leaf(v)) internal.push_back(v);
    const int k = net.edge_count() - net.vertex_count() + 1;
    const int n = static_cast<int>(internal.size());

    std::vector<std::vector<VertexId>> retic_sets;
    std::vector<int> pick;
    auto rec = [&](auto&& self, int from) -> void {
        if (static_cast<int>(pick.size()) == k) {
            std::vector<VertexId> set;
            for (int i : pick) set.push_back(internal[i]);
            retic_sets.push_back(set);
            return;
        }
        for (int i = from; i < n; ++i) {
            pick.push_back(i);
            self(self, i + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);

    std::vector<EdgeKey> rootable;
    for (const EdgeKey& e : net.edges()) {
        for (const std::vector<VertexId>& retics : retic_sets) {
            OrientationResult r = orient_binary(net, e, retics);
            if (r.oriented() && satisfies(*r.network, c)) {
                rootable.push_back(e);
                break;
            }
        }
    }
    return rootable;
}

/// Checks that a stored witness is a class orientation of `net` rooted at
/// `e`: the root's children are the edge's endpoints and suppressing the
/// root gives back exactly the input edges.
void check_witness(const UndirectedNetwork& net, const EdgeKey& e, const DirectedNetwork& w,
                   NetworkClass c) {
    REQUIRE(w.root() == kRootId);
    std::vector<VertexId> kids = w.children(w.root());
    REQUIRE(kids.size() == 2);
    CHECK(EdgeKey(kids[0], kids[1]) == e);
    CHECK(satisfies(w, c));
    UnderlyingResult u = underlying_network(w);
    CHECK_FALSE(u.parallel_pair.has_value());
    CHECK(u.network.edges() == net.edges());
}

void check_all_agree(const UndirectedNetwork& net, NetworkClass c) {
    RootableSet ex = rootable_edges_exhaustive(net, c);
    RootableSet fpt = rootable_edges_fpt(net, c);
    CHECK(ex.edge_set() == fpt.edge_set());
    CHECK(ex.edge_set() == rootable_raw(net, c));
    for (const auto& [e, w] : fpt.entries) check_witness(net, e, w, c);
}

UndirectedNetwork theta_with_chain(int long_side) {
    // Two degree-3 vertices u, v joined by three paths: one carrying
    // `long_side` leaves, one carrying a single leaf, one a bare edge.
    std::vector<EdgeKey> edges = {{"u", "w"}, {"w", "v"}, {"w", "lw"}, {"u", "v"}};
    std::vector<VertexId> leaves = {"lw"};
    VertexId prev = "u";
    for (int i = 1; i <= long_side; ++i) {
        const VertexId s = "s" + std::to_string(i), l = "ls" + std::to_string(i);
        edges.emplace_back(prev, s);
        edges.emplace_back(s, l);
        leaves.push_back(l);
        prev = s;
    }
    edges.emplace_back(prev, "v");
    return UndirectedNetwork(edges, self_labels(leaves));
}

}  // namespace

TEST_CASE("rootable edges of the two-reticulation fixture") {
    UndirectedNetwork net = *load_fixture("fix_a.net").undirected;

    SUBCASE("without a class constraint every edge can carry the root") {
        RootableSet any = rootable_edges_exhaustive(net, NetworkClass::any);
        CHECK(any.edge_set() == net.edges());
    }
    SUBCASE("stack-free orientations need the root inside the blob") {
        RootableSet sf = rootable_edges_exhaustive(net, NetworkClass::stack_free);
        std::vector<EdgeKey> expected = {
            {"a", "b"}, {"a", "c"}, {"b", "c"}, {"b", "d"}, {"c", "d"}};
        CHECK(sf.edge_set() == expected);
        CHECK(sf.contains(EdgeKey("b", "c")));
        CHECK_FALSE(sf.contains(EdgeKey("a", "x")));
        for (const auto& [e, w] : sf.entries)
            check_witness(net, e, w, NetworkClass::stack_free);
    }
    SUBCASE("no orientation is tree-child") {
        CHECK(rootable_edges_exhaustive(net, NetworkClass::tree_child).edge_set().empty());
    }
    SUBCASE("all three searches agree") {
        for (NetworkClass c : {NetworkClass::any, NetworkClass::stack_free,
                               NetworkClass::tree_child, NetworkClass::orchard})
            check_all_agree(net, c);
    }
}

TEST_CASE("the level-3 blob fixture orients but never stack-free") {
    UndirectedNetwork net = *load_fixture("fix_b.net").undirected;
    CHECK_FALSE(rootable_edges_exhaustive(net, NetworkClass::any).edge_set().empty());
    CHECK(rootable_edges_exhaustive(net, NetworkClass::stack_free).edge_set().empty());
    for (NetworkClass c : {NetworkClass::any, NetworkClass::stack_free,
                           NetworkClass::tree_based})
        check_all_agree(net, c);
}

TEST_CASE("chain shortening") {
    SUBCASE("short chains are kept whole") {
        UndirectedNetwork net = *load_fixture("fix_a.net").undirected;
        ChainReduction r = chain_reduce(net, 3);
        CHECK(r.network.edges() == net.edges());
        for (const ReducedSide& s : r.sides) CHECK(s.kept == s.side.leaf_count());
    }
    SUBCASE("a seven-leaf chain keeps its first three leaves") {
        UndirectedNetwork net = theta_with_chain(7);
        ChainReduction r = chain_reduce(net, 3);
        CHECK(r.network.vertex_count() == net.vertex_count() - 8);
        CHECK(r.network.has_edge("s3", "v"));
        CHECK(r.network.has_edge("s1", "s2"));
        CHECK_FALSE(r.network.has_edge("s3", "s4"));
        const std::vector<VertexId>& vs = r.network.vertices();
        CHECK(std::find(vs.begin(), vs.end(), "s4") == vs.end());
        CHECK(std::find(vs.begin(), vs.end(), "ls4") == vs.end());

        bool saw_long = false;
        for (const ReducedSide& s : r.sides) {
            if (s.side.leaf_count() == 7) {
                saw_long = true;
                CHECK(s.kept == 3);
                CHECK(s.side.chain.size() == 7);  // original chain preserved
            } else {
                CHECK(s.kept == s.side.leaf_count());
            }
        }
        CHECK(saw_long);
    }
    SUBCASE("a side whose endpoints coincide keeps two leaves") {
        // A loop at u with three chain leaves, a loop at v with two.
        std::vector<EdgeKey> edges = {
            {"u", "a1"}, {"a1", "a2"}, {"a2", "a3"}, {"a3", "u"}, {"a1", "la1"},
            {"a2", "la2"}, {"a3", "la3"}, {"u", "v"}, {"v", "b1"}, {"b1", "b2"},
            {"b2", "v"}, {"b1", "lb1"}, {"b2", "lb2"}};
        UndirectedNetwork net(edges, self_labels({"la1", "la2", "la3", "lb1", "lb2"}));
        ChainReduction r = chain_reduce(net, 1);
        CHECK(r.network.has_edge("a2", "u"));
        const std::vector<VertexId>& vs = r.network.vertices();
        CHECK(std::find(vs.begin(), vs.end(), "a3") == vs.end());
        CHECK(std::find(vs.begin(), vs.end(), "b2") != vs.end());
        for (const ReducedSide& s : r.sides)
            if (s.side.u == s.side.v) CHECK(s.kept == 2);
    }
    SUBCASE("invalid inputs") {
        UndirectedNetwork net = *load_fixture("fix_a.net").undirected;
        CHECK_THROWS_AS(chain_reduce(net, 0), std::invalid_argument);
        std::vector<EdgeKey> tri = {{"a", "b"}, {"a", "c"}, {"b", "c"},
                                    {"a", "x"}, {"b", "y"}, {"c", "z"}};
        UndirectedNetwork low(tri, self_labels({"x", "y", "z"}));
        CHECK_THROWS_AS(chain_reduce(low, 3), ValidationError);
    }
}

TEST_CASE("the chain search matches plain enumeration on a reducible network") {
    UndirectedNetwork net = theta_with_chain(5);
    for (NetworkClass c : {NetworkClass::any, NetworkClass::stack_free,
                           NetworkClass::tree_child, NetworkClass::tree_based})
        check_all_agree(net, c);
}

TEST_CASE("blob-by-blob orientation of the two-blob fixture") {
    UndirectedNetwork net = *load_fixture("fix_c.net").undirected;

    SUBCASE("orientable without class constraint") {
        COrientation co = c_orientation(net, NetworkClass::any);
        REQUIRE(co.orientable);
        CHECK(co.reason.empty());
        REQUIRE(co.network.has_value());
        UnderlyingResult u = underlying_network(*co.network);
        CHECK(u.network.edges() == net.edges());
        CHECK_FALSE(co.rootable_edges.empty());
    }
    SUBCASE("no orientation is tree-based") {
        COrientation co = c_orientation(net, NetworkClass::tree_based);
        CHECK_FALSE(co.orientable);
        CHECK_FALSE(co.reason.empty());
        CHECK(co.rootable_edges.empty());
        CHECK_FALSE(is_tree_based_undirected(net));
    }
    SUBCASE("the plan's vertex classes partition the network") {
        BlobOrientationPlan plan = plan_blob_orientation(net, NetworkClass::any);
        CHECK(plan.decomposition.blobs.size() == 2);
        CHECK(plan.induced.size() == 2);
        for (const RootableSet& rs : plan.blob_rootable) CHECK_FALSE(rs.entries.empty());

        std::vector<VertexId> all;
        for (const std::vector<VertexId>& cls : plan.classes)
            all.insert(all.end(), cls.begin(), cls.end());
        std::sort(all.begin(), all.end());
        std::vector<VertexId> vs = net.vertices();
        std::sort(vs.begin(), vs.end());
        CHECK(all == vs);

        // Both blobs accept the shared cut edge, so nothing is forced.
        CHECK(plan.directions_of(EdgeKey("l11", "r2")).empty());
        CHECK_THROWS_AS(plan.directions_of(EdgeKey("l1", "l2")), std::invalid_argument);
        REQUIRE(plan.rooted_tree);
        CHECK(plan.root_class >= 0);
        CHECK(plan.class_of("l1") >= 0);
        CHECK(plan.class_of("nope") == -1);
    }
}

TEST_CASE("single-blob networks agree between the two drivers") {
    UndirectedNetwork net = *load_fixture("fix_a.net").undirected;
    COrientation co = c_orientation(net, NetworkClass::stack_free);
    REQUIRE(co.orientable);
    CHECK(co.rootable_edges == rootable_edges_exhaustive(net, NetworkClass::stack_free).edge_set());
    CHECK_FALSE(c_orientation(net, NetworkClass::tree_child).orientable);
}

TEST_CASE("trees are rootable everywhere in every class") {
    std::vector<EdgeKey> edges = {{"u", "a"}, {"u", "b"}, {"u", "w"}, {"w", "c"}, {"w", "d"}};
    UndirectedNetwork tree(edges, self_labels({"a", "b", "c", "d"}));
    for (NetworkClass c : all_network_classes()) {
        COrientation co = c_orientation(tree, c);
        REQUIRE(co.orientable);
        CHECK(co.rootable_edges == tree.edges());
    }
    CHECK(is_tree_based_undirected(tree));
}

TEST_CASE("tree-based orientations rooted on cut edges") {
    // K4 with one edge subdivided and a leaf below the subdivision vertex:
    // tree-based rootable at every blob edge, including both edges next to
    // the pendant one, but not at the only cut edge {s,l} itself — so the
    // cut-edge criterion answers no.
    std::vector<EdgeKey> edges = {{"a", "s"}, {"s", "b"}, {"a", "c"}, {"a", "d"},
                                  {"b", "c"}, {"b", "d"}, {"c", "d"}, {"s", "l"}};
    UndirectedNetwork net(edges, self_labels({"l"}));
    RootableSet rootable = rootable_edges_exhaustive(net, NetworkClass::tree_based);
    CHECK(rootable.contains(EdgeKey("a", "s")));
    CHECK(rootable.contains(EdgeKey("s", "b")));
    CHECK_FALSE(rootable.contains(EdgeKey("s", "l")));
    CHECK_FALSE(is_tree_based_undirected(net));

    // The annotated fixture is tree-based from its pendant (cut) edge.
    CHECK(is_tree_based_undirected(*load_fixture("fix_a.net").undirected));
}

TEST_CASE("partly-directed orientation end to end") {
    SUBCASE("the orientable variant") {
        PartlyDirectedNetwork pd = *load_fixture("fix_d_l.net").partly;
        PartlyDirectedOrientation r = partly_directed_c_orientation(pd);
        REQUIRE(r.orientable);
        REQUIRE(r.network.has_value());
        for (const ArcKey& a : pd.arcs()) CHECK(r.network->has_arc(a.tail, a.head));
        // The root subdivides an undirected edge of the input.
        std::vector<VertexId> kids = r.network->children(r.network->root());
        REQUIRE(kids.size() == 2);
        const EdgeKey root_edge(kids[0], kids[1]);
        CHECK(pd.underlying().has_edge(root_edge));
        CHECK_FALSE(pd.direction_of(root_edge).has_value());
    }
    SUBCASE("the conflicting variant") {
        PartlyDirectedNetwork pd = *load_fixture("fix_d_r.net").partly;
        PartlyDirectedOrientation r = partly_directed_c_orientation(pd);
        CHECK_FALSE(r.orientable);
        CHECK_FALSE(r.reason.empty());
    }
    SUBCASE("bridge arcs pointing at each other leave no root region") {
        std::vector<EdgeKey> edges = {{"l1", "a"}, {"l2", "a"}, {"b", "l3"}, {"c", "l4"},
                                      {"d", "l5"}, {"d", "l6"}, {"b", "c"}};
        std::vector<ArcKey> arcs = {{"a", "b"}, {"d", "c"}};
        PartlyDirectedNetwork pd(edges, arcs, self_labels({"l1", "l2", "l3", "l4", "l5", "l6"}));
        PartlyDirectedOrientation r = partly_directed_c_orientation(pd);
        CHECK_FALSE(r.orientable);
        CHECK_FALSE(r.reason.empty());
    }
    SUBCASE("a twice-alternating chain is hopeless") {
        std::vector<EdgeKey> edges = {{"s4", "v"},  {"s1", "ls1"}, {"s2", "ls2"},
                                      {"s3", "ls3"}, {"s4", "ls4"}, {"u", "p"},
                                      {"p", "v"},   {"p", "lp"},   {"u", "q"},
                                      {"q", "v"},   {"q", "lq"}};
        std::vector<ArcKey> arcs = {{"u", "s1"}, {"s2", "s1"}, {"s2", "s3"}, {"s4", "s3"}};
        PartlyDirectedNetwork pd(edges, arcs,
                                 self_labels({"ls1", "ls2", "ls3", "ls4", "lp", "lq"}));
        PartlyDirectedOrientation r = partly_directed_c_orientation(pd);
        CHECK_FALSE(r.orientable);
        CHECK(r.reason.find("alternates") != std::string::npos);
    }
}

TEST_CASE("partly-directed verdicts match root-and-reticulation enumeration") {
    std::mt19937_64 aux(77);
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 12; ++seed) {
        GeneratorConfig cfg;
        cfg.leaf_count = 3;
        cfg.target_level = 1 + static_cast<int>(seed % 2);
        cfg.target_reticulation_number = cfg.target_level;
        cfg.rng_seed = seed;
        DirectedNetwork dn = generate_random_directed(cfg);
        UnderlyingResult u = underlying_network(dn);
        if (u.parallel_pair || u.network.edge_count() > 12) continue;
        ++checked;

        // Prescribe a random subset of the true orientation's arcs; flip one
        // arc on odd rounds to often (not always) break orientability.
        std::vector<ArcKey> pool;
        for (const ArcKey& a : dn.arcs())
            if (a.tail != dn.root() && aux() % 2 == 0) pool.push_back(a);
        if (checked % 2 == 1 && !pool.empty()) {
            ArcKey& f = pool[aux() % pool.size()];
            f = ArcKey(f.head, f.tail);
        }
        std::set<EdgeKey> covered;
        for (const ArcKey& a : pool) covered.insert(a.as_edge());
        std::vector<EdgeKey> edges;
        for (const EdgeKey& e : u.network.edges())
            if (covered.count(e) == 0) edges.push_back(e);
        PartlyDirectedNetwork pd(edges, pool, u.network.leaf_labels());

        // Oracle: some undirected root edge and reticulation set must make
        // the constrained orientation succeed.
        std::vector<VertexId> internal;
        for (const VertexId& v : u.network.vertices())
            if (!u.network.is_leaf(v)) internal.push_back(v);
        const int k = u.network.edge_count() - u.network.vertex_count() + 1;
        bool oracle = false;
        std::vector<int> pick;
        auto rec = [&](auto&& self, int from) -> void {
            if (static_cast<int>(pick.size()) == k) {
                std::vector<VertexId> retics;
                for (int i : pick) retics.push_back(internal[i]);
                for (const EdgeKey& e : edges)
                    if (orient_partly_directed(pd, e, retics).oriented()) oracle = true;
                return;
            }
            for (int i = from; i < static_cast<int>(internal.size()) && !oracle; ++i) {
                pick.push_back(i);
                self(self, i + 1);
                pick.pop_back();
            }
        };
        rec(rec, 0);

        PartlyDirectedOrientation got = partly_directed_c_orientation(pd);
        CHECK(got.orientable == oracle);
        if (got.orientable)
            for (const ArcKey& a : pd.arcs()) CHECK(got.network->has_arc(a.tail, a.head));
    }
}

TEST_CASE("work budgets cap the exhaustive searches") {
    UndirectedNetwork big = *load_fixture("fix_c.net").undirected;
    CHECK_THROWS_AS(rootable_edges_exhaustive(big, NetworkClass::any, 10), BudgetExceeded);
    try {
        rootable_edges_exhaustive(big, NetworkClass::any, 10);
    } catch (const BudgetExceeded& e) {
        CHECK(e.required() > 10);
        CHECK(e.allowed() == 10);
    }
    CHECK_THROWS_AS(c_orientation(big, NetworkClass::any, 10), BudgetExceeded);
}
