#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "phylo/network.hpp"

using namespace phylo;
using testutil::self_labels;

TEST_CASE("edge and arc keys normalize and order") {
    EdgeKey e("b", "a");
    CHECK(e.a == "a");
    CHECK(e.b == "b");
    CHECK(e == EdgeKey("a", "b"));
    CHECK(e.contains("a"));
    CHECK(e.other("a") == "b");
    CHECK(EdgeKey("a", "b") < EdgeKey("a", "c"));
    CHECK(e.str() == "{a,b}");

    ArcKey arc("b", "a");
    CHECK(arc.tail == "b");
    CHECK(arc.head == "a");
    CHECK(arc.as_edge() == e);
    CHECK(arc.str() == "(b,a)");
}

TEST_CASE("reserved vertex ids are recognized") {
    CHECK(is_user_vertex_id("a"));
    CHECK(is_user_vertex_id("rho"));
    CHECK_FALSE(is_user_vertex_id(kRootId));
    CHECK_FALSE(is_user_vertex_id("_g0"));
}

static UndirectedNetwork diamond_with_pendants() {
    // x - a - {b,c} - d - y with the 4-cycle a-b-d-c-a closed by b-c.
    std::vector<EdgeKey> edges = {{"x", "a"}, {"a", "b"}, {"a", "c"}, {"b", "c"},
                                  {"b", "d"}, {"c", "d"}, {"d", "y"}};
    return UndirectedNetwork(edges, self_labels({"x", "y"}));
}

TEST_CASE("undirected network accessors") {
    UndirectedNetwork net = diamond_with_pendants();
    CHECK(net.vertex_count() == 6);
    CHECK(net.edge_count() == 7);
    CHECK(net.degree("a") == 3);
    CHECK(net.degree("x") == 1);
    CHECK(net.is_leaf("x"));
    CHECK_FALSE(net.is_leaf("a"));
    CHECK(net.label_of("y") == "y");
    CHECK(net.has_edge("a", "b"));
    CHECK(net.has_edge(EdgeKey("b", "a")));
    CHECK_FALSE(net.has_edge("a", "d"));
    CHECK(net.is_binary());
    CHECK(net.neighbors("b") == std::vector<VertexId>{"a", "c", "d"});
    CHECK(std::is_sorted(net.edges().begin(), net.edges().end()));
    CHECK(net.edge_index(EdgeKey("a", "b")) >= 0);
    CHECK(net.edge_index(EdgeKey("a", "d")) == -1);
}

TEST_CASE("undirected network validation") {
    SUBCASE("degree-2 vertex") {
        std::vector<EdgeKey> edges = {{"x", "m"}, {"m", "y"}};
        CHECK_THROWS_WITH_AS(UndirectedNetwork(edges, self_labels({"x", "y"})),
                             doctest::Contains("no-degree-2"), ValidationError);
    }
    SUBCASE("missing leaf label") {
        std::vector<EdgeKey> edges = {{"x", "a"}, {"a", "b"}, {"a", "c"}, {"b", "c"},
                                      {"b", "d"}, {"c", "d"}, {"d", "y"}};
        CHECK_THROWS_AS(UndirectedNetwork(edges, self_labels({"x"})), ValidationError);
    }
    SUBCASE("label on an internal vertex") {
        std::vector<EdgeKey> edges = {{"x", "a"}, {"a", "b"}, {"a", "c"}, {"b", "c"},
                                      {"b", "d"}, {"c", "d"}, {"d", "y"}};
        CHECK_THROWS_AS(UndirectedNetwork(edges, self_labels({"x", "y", "a"})), ValidationError);
    }
    SUBCASE("duplicate label") {
        std::vector<EdgeKey> edges = {{"x", "a"}, {"a", "b"}, {"a", "c"}, {"b", "c"},
                                      {"b", "d"}, {"c", "d"}, {"d", "y"}};
        std::map<VertexId, std::string> labels{{"x", "same"}, {"y", "same"}};
        CHECK_THROWS_WITH_AS(UndirectedNetwork(edges, labels), doctest::Contains("twice"),
                             ValidationError);
    }
    SUBCASE("disconnected") {
        std::vector<EdgeKey> edges = {{"x", "y"}, {"u", "v"}};
        CHECK_THROWS_WITH_AS(UndirectedNetwork(edges, self_labels({"x", "y", "u", "v"})),
                             doctest::Contains("connected"), ValidationError);
    }
    SUBCASE("duplicate edge") {
        std::vector<EdgeKey> edges = {{"x", "y"}, {"y", "x"}};
        CHECK_THROWS_WITH_AS(UndirectedNetwork(edges, self_labels({"x", "y"})),
                             doctest::Contains("simple"), ValidationError);
    }
    SUBCASE("loop edge") {
        std::vector<EdgeKey> edges = {{"x", "x"}};
        CHECK_THROWS_AS(UndirectedNetwork(edges, self_labels({})), ValidationError);
    }
    SUBCASE("empty") {
        CHECK_THROWS_WITH_AS(UndirectedNetwork({}, {}), doctest::Contains("nonempty"),
                             ValidationError);
    }
}

static DirectedNetwork small_reticulated() {
    // rho -> {a, b}; a,b -> r (reticulation); a -> x, r -> z, b -> y.
    std::vector<ArcKey> arcs = {{"rho", "a"}, {"rho", "b"}, {"a", "r"}, {"b", "r"},
                                {"a", "x"},   {"b", "y"},   {"r", "z"}};
    return DirectedNetwork(arcs, self_labels({"x", "y", "z"}));
}

TEST_CASE("directed network accessors") {
    DirectedNetwork net = small_reticulated();
    CHECK(net.vertex_count() == 7);
    CHECK(net.arc_count() == 7);
    CHECK(net.root() == "rho");
    CHECK(net.indegree("r") == 2);
    CHECK(net.outdegree("a") == 2);
    CHECK(net.is_leaf("z"));
    CHECK(net.is_reticulation("r"));
    CHECK_FALSE(net.is_reticulation("a"));
    CHECK(net.reticulations() == std::vector<VertexId>{"r"});
    CHECK(net.parents("r") == std::vector<VertexId>{"a", "b"});
    CHECK(net.children("rho") == std::vector<VertexId>{"a", "b"});
    CHECK(net.has_arc("a", "r"));
    CHECK_FALSE(net.has_arc("r", "a"));
    CHECK(net.is_binary());
}

TEST_CASE("directed network validation") {
    SUBCASE("cycle") {
        std::vector<ArcKey> arcs = {{"rho", "a"}, {"rho", "b"}, {"a", "b"}, {"b", "c"},
                                    {"c", "a"},   {"a", "x"},   {"b", "y"}, {"c", "z"}};
        CHECK_THROWS_WITH_AS(DirectedNetwork(arcs, self_labels({"x", "y", "z"})),
                             doctest::Contains("acyclic"), ValidationError);
    }
    SUBCASE("two roots") {
        std::vector<ArcKey> arcs = {{"r1", "a"}, {"r1", "b"}, {"r2", "a"}, {"r2", "b"},
                                    {"a", "x"},  {"b", "y"}};
        CHECK_THROWS_WITH_AS(DirectedNetwork(arcs, self_labels({"x", "y"})),
                             doctest::Contains("unique-root"), ValidationError);
    }
    SUBCASE("suppressible vertex") {
        std::vector<ArcKey> arcs = {{"rho", "a"}, {"rho", "y"}, {"a", "x"}};
        CHECK_THROWS_WITH_AS(DirectedNetwork(arcs, self_labels({"x", "y"})),
                             doctest::Contains("no-indeg1-outdeg1"), ValidationError);
    }
    SUBCASE("root with outdegree 1") {
        std::vector<ArcKey> arcs = {{"rho", "a"}, {"a", "x"}, {"a", "y"}};
        CHECK_THROWS_WITH_AS(DirectedNetwork(arcs, self_labels({"x", "y"})),
                             doctest::Contains("root-outdegree-2"), ValidationError);
    }
    SUBCASE("leaf with indegree 2") {
        std::vector<ArcKey> arcs = {{"rho", "a"}, {"rho", "b"}, {"a", "z"}, {"b", "z"},
                                    {"a", "x"},   {"b", "y"}};
        CHECK_THROWS_WITH_AS(DirectedNetwork(arcs, self_labels({"x", "y", "z"})),
                             doctest::Contains("leaf"), ValidationError);
    }
    SUBCASE("unlabelled leaf") {
        std::vector<ArcKey> arcs = {{"rho", "a"}, {"rho", "b"}, {"a", "r"}, {"b", "r"},
                                    {"a", "x"},   {"b", "y"},   {"r", "z"}};
        CHECK_THROWS_AS(DirectedNetwork(arcs, self_labels({"x", "y"})), ValidationError);
    }
    SUBCASE("duplicate arc") {
        std::vector<ArcKey> arcs = {{"rho", "x"}, {"rho", "x"}};
        CHECK_THROWS_AS(DirectedNetwork(arcs, self_labels({"x"})), ValidationError);
    }
}

TEST_CASE("partly directed network") {
    std::vector<EdgeKey> edges = {{"x", "a"}, {"a", "b"}, {"a", "c"}, {"b", "d"},
                                  {"c", "d"}, {"d", "y"}};
    std::vector<ArcKey> arcs = {{"b", "c"}};
    PartlyDirectedNetwork net(edges, arcs, self_labels({"x", "y"}));

    CHECK(net.undirected_edges().size() == 6);
    CHECK(net.arcs().size() == 1);
    CHECK(net.underlying().edge_count() == 7);
    CHECK(net.is_binary());
    CHECK(net.direction_of(EdgeKey("b", "c")) == ArcKey("b", "c"));
    CHECK_FALSE(net.direction_of(EdgeKey("a", "b")).has_value());

    SUBCASE("edge and arc on the same pair") {
        std::vector<EdgeKey> both_edges = edges;
        both_edges.emplace_back("b", "c");
        CHECK_THROWS_WITH_AS(PartlyDirectedNetwork(both_edges, arcs, self_labels({"x", "y"})),
                             doctest::Contains("edge-or-arc"), ValidationError);
    }
}

TEST_CASE("degree map validation") {
    UndirectedNetwork net = diamond_with_pendants();
    DegreeMap degrees;
    for (const VertexId& v : net.vertices()) degrees[v] = 1;

    CHECK_NOTHROW(validate_degree_map(net, degrees));

    SUBCASE("missing vertex") {
        degrees.erase("a");
        CHECK_THROWS_AS(validate_degree_map(net, degrees), ValidationError);
    }
    SUBCASE("out of range") {
        degrees["a"] = 4;  // deg(a) = 3
        CHECK_THROWS_AS(validate_degree_map(net, degrees), ValidationError);
    }
    SUBCASE("unknown vertex") {
        degrees["ghost"] = 1;
        CHECK_THROWS_AS(validate_degree_map(net, degrees), ValidationError);
    }
}

TEST_CASE("underlying network suppresses the root") {
    DirectedNetwork net = small_reticulated();
    UnderlyingResult u = underlying_network(net);
    CHECK_FALSE(u.parallel_pair.has_value());
    CHECK_FALSE(u.network.has_vertex("rho"));
    CHECK(u.network.has_edge("a", "b"));  // the suppressed root edge
    CHECK(u.network.edge_count() == net.arc_count() - 1);
    CHECK(u.network.leaf_labels() == net.leaf_labels());
}

TEST_CASE("underlying network flags a parallel pair") {
    // Root children a and b are adjacent: suppressing the root doubles a-b.
    std::vector<ArcKey> arcs = {{"rho", "a"}, {"rho", "b"}, {"a", "b"}, {"a", "y"}, {"b", "x"}};
    DirectedNetwork net(arcs, self_labels({"x", "y"}));
    UnderlyingResult u = underlying_network(net);
    REQUIRE(u.parallel_pair.has_value());
    CHECK(*u.parallel_pair == EdgeKey("a", "b"));
    // The simple graph keeps one copy; its endpoints are exempt from the
    // no-degree-2 rule.
    CHECK(u.network.has_edge("a", "b"));
    CHECK(u.network.degree("a") == 2);
}

TEST_CASE("isomorphism respects labels") {
    UndirectedNetwork lhs = diamond_with_pendants();

    // Same shape with internal vertices renamed.
    std::vector<EdgeKey> renamed = {{"x", "p"}, {"p", "q"}, {"p", "r"}, {"q", "r"},
                                    {"q", "s"}, {"r", "s"}, {"s", "y"}};
    UndirectedNetwork rhs(renamed, self_labels({"x", "y"}));
    CHECK(isomorphic(lhs, rhs));

    // Swapping the leaf labels still works: the diamond is symmetric end
    // to end.
    std::map<VertexId, std::string> swapped{{"x", "y"}, {"y", "x"}};
    UndirectedNetwork rhs_swapped(renamed, swapped);
    CHECK(isomorphic(lhs, rhs_swapped));

    // Different label sets can never correspond.
    std::map<VertexId, std::string> other_labels{{"x", "x"}, {"y", "z"}};
    UndirectedNetwork rhs_other(renamed, other_labels);
    CHECK_FALSE(isomorphic(lhs, rhs_other));

    // Different shape: triangle with three pendant leaves.
    std::vector<EdgeKey> triangle = {{"a", "b"}, {"a", "c"}, {"b", "c"},
                                     {"a", "x"}, {"b", "y"}, {"c", "z"}};
    UndirectedNetwork other(triangle, self_labels({"x", "y", "z"}));
    CHECK_FALSE(isomorphic(lhs, other));
}
