#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "phylo/decompose.hpp"
#include "phylo/io.hpp"
#include "phylo/network.hpp"
#include "phylo/orient.hpp"
#include "phylo/random_net.hpp"

using namespace phylo;

TEST_CASE("the generator is deterministic in its seed") {
    GeneratorConfig cfg;
    cfg.leaf_count = 6;
    cfg.target_level = 2;
    cfg.target_reticulation_number = 3;
    cfg.chain_length_range = {1, 3};
    cfg.rng_seed = 42;
    DirectedNetwork a = generate_random_directed(cfg);
    DirectedNetwork b = generate_random_directed(cfg);
    CHECK(to_text(a) == to_text(b));

    cfg.rng_seed = 43;
    DirectedNetwork c = generate_random_directed(cfg);
    CHECK(to_text(a) != to_text(c));
}

TEST_CASE("a four-leaf level-2 request hits its targets") {
    GeneratorConfig cfg;
    cfg.leaf_count = 4;
    cfg.target_level = 2;
    cfg.target_reticulation_number = 2;
    cfg.chain_length_range = {0, 0};
    cfg.rng_seed = 7;
    DirectedNetwork net = generate_random_directed(cfg);
    GraphStats s = graph_stats(net);
    CHECK(s.leaf_count == 4);
    CHECK(s.reticulation_number == 2);
    CHECK(s.level == 2);
    CHECK(s.binary);
}

TEST_CASE("generated networks match their configuration") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GeneratorConfig cfg;
        cfg.leaf_count = 5 + static_cast<int>(seed % 3);
        cfg.target_level = static_cast<int>(seed % 3);
        cfg.target_reticulation_number =
            cfg.target_level == 0 ? 0 : cfg.target_level + static_cast<int>(seed % 2);
        cfg.chain_length_range = seed % 2 == 0 ? std::pair<int, int>{1, 2}
                                               : std::pair<int, int>{0, 0};
        cfg.rng_seed = seed;
        DirectedNetwork net = generate_random_directed(cfg);

        GraphStats s = graph_stats(net);
        CHECK(s.leaf_count == cfg.leaf_count);
        CHECK(s.reticulation_number == cfg.target_reticulation_number);
        CHECK(s.level == cfg.target_level);
        CHECK(s.binary);
        CHECK(static_cast<int>(net.reticulations().size()) ==
              cfg.target_reticulation_number);
    }
}

TEST_CASE("generated networks survive a text round-trip") {
    GeneratorConfig cfg;
    cfg.leaf_count = 5;
    cfg.target_level = 2;
    cfg.target_reticulation_number = 3;
    cfg.rng_seed = 11;
    DirectedNetwork net = generate_random_directed(cfg);

    NetworkFile file = parse_network_text(to_text(net));
    REQUIRE(file.kind == NetworkFile::Kind::directed);
    CHECK(to_text(*file.directed) == to_text(net));

    UnderlyingResult u = underlying_network(net);
    if (!u.parallel_pair) {
        NetworkFile uf = parse_network_text(to_text(u.network));
        REQUIRE(uf.kind == NetworkFile::Kind::undirected);
        CHECK(uf.undirected->edges() == u.network.edges());
    }
}

TEST_CASE("infeasible configurations are rejected") {
    GeneratorConfig cfg;

    SUBCASE("reticulations without a blob to put them in") {
        cfg.target_level = 0;
        cfg.target_reticulation_number = 2;
        CHECK_THROWS_AS(generate_random_directed(cfg), std::invalid_argument);
    }
    SUBCASE("level above the reticulation number") {
        cfg.target_level = 3;
        cfg.target_reticulation_number = 2;
        CHECK_THROWS_AS(generate_random_directed(cfg), std::invalid_argument);
    }
    SUBCASE("too few leaves") {
        cfg.leaf_count = 1;
        CHECK_THROWS_AS(generate_random_directed(cfg), std::invalid_argument);
    }
    SUBCASE("reticulated networks need at least three leaves") {
        cfg.leaf_count = 2;
        cfg.target_level = 1;
        cfg.target_reticulation_number = 1;
        CHECK_THROWS_AS(generate_random_directed(cfg), std::invalid_argument);
    }
    SUBCASE("negative counts") {
        cfg.leaf_count = -1;
        CHECK_THROWS_AS(generate_random_directed(cfg), std::invalid_argument);
    }
}

TEST_CASE("the blob chain scales as documented and orients") {
    for (int blobs : {1, 3, 8}) {
        BlobChain chain = make_blob_chain(blobs);
        CHECK(chain.network.vertex_count() == 4 * blobs + 2);
        CHECK(chain.network.edge_count() == 6 * blobs + 1);
        CHECK(graph_stats(chain.network).blob_count == blobs);

        RootedInstance inst{chain.network, chain.root_edge, chain.degrees, std::nullopt};
        OrientationResult r = orient(inst);
        REQUIRE(r.oriented());
        CHECK(static_cast<int>(r.network->reticulations().size()) == 2 * blobs);
    }
}
