#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "phylo/decompose.hpp"
#include "phylo/io.hpp"
#include "phylo/network.hpp"

using namespace phylo;
using testutil::load_fixture;
using testutil::self_labels;

TEST_CASE("blob decomposition of a single-blob network") {
    UndirectedNetwork net = *load_fixture("fix_a.net").undirected;
    BlobDecomposition dec = blob_decomposition(net);

    REQUIRE(dec.blobs.size() == 1);
    CHECK(dec.blobs[0] == std::vector<VertexId>{"a", "b", "c", "d"});
    CHECK(dec.blob_edges[0].size() == 5);
    CHECK(dec.cut_edges == std::vector<EdgeKey>{{"a", "x"}, {"d", "y"}});
    CHECK(dec.cut_vertices == std::vector<VertexId>{"a", "d"});
    CHECK(dec.blob_of("b") == 0);
    CHECK(dec.blob_of("x") == -1);

    // Every block is either a blob or a bridge.
    CHECK(dec.block_vertices.size() == 3);
    CHECK_FALSE(dec.tree.nodes.empty());
}

TEST_CASE("blob decomposition of a two-blob network") {
    UndirectedNetwork net = *load_fixture("fix_c.net").undirected;
    BlobDecomposition dec = blob_decomposition(net);

    REQUIRE(dec.blobs.size() == 2);
    CHECK(dec.blobs[0].size() == 12);
    CHECK(dec.blobs[1].size() == 12);
    CHECK(dec.cut_edges ==
          std::vector<EdgeKey>{{"l11", "r2"}, {"l12", "x"}, {"r1", "y"}});
    CHECK(dec.cut_vertices == std::vector<VertexId>{"l11", "l12", "r1", "r2"});

    // The joining cut edge leaves l11 in the left blob and r2 in the right.
    const int left = dec.blob_of("l11");
    const int right = dec.blob_of("r2");
    CHECK(left != right);
    CHECK(dec.blob_of("l5") == left);
    CHECK(dec.blob_of("r7") == right);
}

TEST_CASE("graph stats of the bundled fixtures") {
    GraphStats a = graph_stats(*load_fixture("fix_a.net").undirected);
    CHECK(a.vertex_count == 6);
    CHECK(a.edge_count == 7);
    CHECK(a.leaf_count == 2);
    CHECK(a.reticulation_number == 2);
    CHECK(a.level == 2);
    CHECK(a.blob_count == 1);
    CHECK(a.binary);

    GraphStats b = graph_stats(*load_fixture("fix_b.net").undirected);
    CHECK(b.vertex_count == 8);
    CHECK(b.edge_count == 10);
    CHECK(b.reticulation_number == 3);
    CHECK(b.level == 3);
    CHECK(b.blob_count == 1);
    CHECK(b.binary);

    GraphStats c = graph_stats(*load_fixture("fix_c.net").undirected);
    CHECK(c.vertex_count == 26);
    CHECK(c.edge_count == 37);
    CHECK(c.leaf_count == 2);
    CHECK(c.reticulation_number == 12);
    CHECK(c.level == 6);
    CHECK(c.blob_count == 2);
    CHECK(c.binary);
}

TEST_CASE("directed stats measure the underlying rooted graph") {
    GraphStats s = graph_stats(*load_fixture("stack.net").directed);
    CHECK(s.leaf_count == 2);
    CHECK(s.reticulation_number == 2);
    CHECK(s.binary);
}

TEST_CASE("orientability needs at most one single-exit blob") {
    CHECK(is_orientable(*load_fixture("fix_a.net").undirected));
    CHECK(is_orientable(*load_fixture("fix_c.net").undirected));

    // K4 plus a pendant leaf: its blob has exactly one cut vertex, which is
    // allowed once.
    std::vector<EdgeKey> k4 = {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"},
                               {"b", "d"}, {"c", "d"}, {"d", "x"}};
    CHECK(is_orientable(UndirectedNetwork(k4, self_labels({"x"}))));

    // Two K4s joined by a bridge: both blobs have a single cut vertex, so
    // one of them can never send its edges toward the other.
    std::vector<EdgeKey> dumbbell = {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"},
                                     {"b", "d"}, {"c", "d"}, {"d", "e"}, {"e", "f"},
                                     {"e", "g"}, {"e", "h"}, {"f", "g"}, {"f", "h"},
                                     {"g", "h"}};
    CHECK_FALSE(is_orientable(UndirectedNetwork(dumbbell, {})));
}

TEST_CASE("pendant subtree reduction") {
    SUBCASE("a cherry collapses to one fresh leaf") {
        // fix_a with leaf y replaced by the cherry {y1, y2} under p.
        std::vector<EdgeKey> edges = {{"x", "a"}, {"a", "b"}, {"a", "c"},  {"b", "c"},
                                      {"b", "d"}, {"c", "d"}, {"d", "p"},  {"p", "y1"},
                                      {"p", "y2"}};
        UndirectedNetwork net(edges, self_labels({"x", "y1", "y2"}));
        PendantReduction red = reduce_pendant_subtrees(net);

        CHECK(red.network.edge_count() == 7);
        CHECK(red.network.has_edge("x", "a"));  // single-edge pendant kept as-is
        CHECK_FALSE(red.network.has_vertex("p"));
        REQUIRE(red.replaced.size() == 1);

        const auto& [fresh, mapped] = *red.replaced.begin();
        CHECK(red.network.is_leaf(fresh));
        CHECK(red.network.has_edge("d", fresh));
        std::set<EdgeKey> expected{{"d", "p"}, {"p", "y1"}, {"p", "y2"}};
        CHECK(std::set<EdgeKey>(mapped.begin(), mapped.end()) == expected);
    }
    SUBCASE("a pure tree collapses to its two smallest labels") {
        std::vector<EdgeKey> edges = {{"u", "a"}, {"u", "b"}, {"u", "v"}, {"v", "c"},
                                      {"v", "d"}};
        UndirectedNetwork net(edges, self_labels({"a", "b", "c", "d"}));
        PendantReduction red = reduce_pendant_subtrees(net);

        CHECK(red.network.edge_count() == 1);
        CHECK(red.network.has_edge("a", "b"));
        REQUIRE(red.replaced.count("a") == 1);
        CHECK(red.replaced.at("a").size() == net.edges().size());
    }
    SUBCASE("a network without non-trivial pendant subtrees is unchanged") {
        UndirectedNetwork net = *load_fixture("fix_b.net").undirected;
        PendantReduction red = reduce_pendant_subtrees(net);
        CHECK(red.network.edges() == net.edges());
        CHECK(red.replaced.empty());
    }
}

TEST_CASE("generator of a level-2 network") {
    UndirectedNetwork net = *load_fixture("fix_a.net").undirected;
    Generator gen = generator(net);

    CHECK(gen.vertices == std::vector<VertexId>{"b", "c"});
    REQUIRE(gen.sides.size() == 3);
    // All three sides join b and c: the direct edge, the path through a
    // (chain leaf x), and the path through d (chain leaf y).
    std::multiset<int> side_lengths;
    std::multiset<std::vector<VertexId>> chains;
    for (const GeneratorSide& s : gen.sides) {
        CHECK(s.u == "b");
        CHECK(s.v == "c");
        side_lengths.insert(static_cast<int>(s.path.size()));
        chains.insert(s.chain);
        CHECK(s.edges().size() == s.path.size() - 1);
    }
    CHECK(side_lengths == std::multiset<int>{2, 3, 3});
    CHECK(chains == std::multiset<std::vector<VertexId>>{{}, {"x"}, {"y"}});
}

TEST_CASE("generator is undefined below reticulation number 2") {
    std::vector<EdgeKey> triangle = {{"a", "b"}, {"a", "c"}, {"b", "c"},
                                     {"a", "x"}, {"b", "y"}, {"c", "z"}};
    UndirectedNetwork net(triangle, self_labels({"x", "y", "z"}));
    CHECK_THROWS_WITH_AS(generator(net), doctest::Contains("generator-defined"), ValidationError);
}

TEST_CASE("induced blob networks stand alone") {
    UndirectedNetwork net = *load_fixture("fix_c.net").undirected;
    BlobDecomposition dec = blob_decomposition(net);
    const int left = dec.blob_of("l1");
    REQUIRE(left >= 0);

    InducedBlob ib = induced_blob_network(net, dec.blobs[left]);
    // Two fresh leaves: one standing in for the cut edge at l11, one for
    // the pendant edge at l12.
    CHECK(ib.leaf_for_vertex.size() == 2);
    REQUIRE(ib.leaf_for_vertex.count("l11") == 1);
    REQUIRE(ib.leaf_for_vertex.count("l12") == 1);
    CHECK(ib.network.vertex_count() == 14);
    CHECK(ib.network.is_binary());
    CHECK(ib.network.is_leaf(ib.leaf_for_vertex.at("l11")));
    CHECK(ib.network.has_edge("l11", ib.leaf_for_vertex.at("l11")));
    CHECK(graph_stats(ib.network).reticulation_number == 6);

    CHECK_THROWS_AS(induced_blob_network(net, {"l1", "l2"}), ValidationError);
}
