#include <sys/wait.h>

#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "phylo/io.hpp"
#include "phylo/network.hpp"

using nlohmann::json;
using phylo::NetworkFile;
using testutil::fixture_path;

namespace {

struct CmdResult {
    int code;
    std::string out;
};

/// Runs the CLI binary with the given arguments, capturing stdout+stderr.
CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PHYLO_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string net_arg(const std::string& fixture) {
    return "--network " + fixture_path(fixture);
}

int count_lines_with(const std::string& text, const std::string& needle) {
    int count = 0;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("orient reports the fixture's degree cut") {
    CmdResult r = run_cli("orient " + net_arg("fix_a.net"));
    CHECK(r.code == 3);
    CHECK(r.out.find("not orientable") != std::string::npos);
    CHECK(r.out.find("cut-vertex b") != std::string::npos);
    CHECK(r.out.find("cut-vertex c") != std::string::npos);
    CHECK(r.out.find("cut-edge _rho b") != std::string::npos);
    CHECK(r.out.find("cut-edge a c") != std::string::npos);
}

TEST_CASE("orient prints a reloadable orientation on success") {
    CmdResult r = run_cli("orient " + net_arg("fix_a.net") + " --retic c --retic d");
    CHECK(r.code == 0);
    CHECK(r.out.find("_rho") == std::string::npos);
    NetworkFile file = phylo::parse_network_text(r.out);
    REQUIRE(file.kind == NetworkFile::Kind::directed);
    CHECK(file.directed->root() == "rho");
    CHECK(file.directed->indegree("c") == 2);
    CHECK(file.directed->indegree("d") == 2);
}

TEST_CASE("orient accepts an explicit root edge") {
    CmdResult r = run_cli("orient " + net_arg("fix_a.net") +
                          " --root-edge x,a --retic b --retic d");
    CHECK(r.code == 0);
    CHECK(r.out.find("arc") != std::string::npos);
}

TEST_CASE("orient flags an impossible in-degree sum") {
    CmdResult r = run_cli("orient " + net_arg("fix_a.net") + " --retic b");
    CHECK(r.code == 3);
    CHECK(r.out.find("do not sum") != std::string::npos);
}

TEST_CASE("orient requires a root edge from somewhere") {
    CmdResult r = run_cli("orient " + net_arg("fix_b.net") + " --retic a --retic b --retic c");
    CHECK(r.code == 2);
}

TEST_CASE("check classifies the micro-fixtures") {
    SUBCASE("a stack breaks stack-freeness") {
        CmdResult r = run_cli("check " + net_arg("stack.net") + " --class stack-free");
        CHECK(r.code == 3);
        CHECK(r.out.rfind("false", 0) == 0);
        CHECK(r.out.find("stack r1 r2") != std::string::npos);
    }
    SUBCASE("the stacked network is still tree-based") {
        CmdResult r = run_cli("check " + net_arg("stack.net") + " --class tree-based");
        CHECK(r.code == 0);
        CHECK(r.out.rfind("true", 0) == 0);
        CHECK(r.out.find("base-tree-arc") != std::string::npos);
    }
    SUBCASE("a camel breaks validity") {
        CmdResult ok = run_cli("check " + net_arg("wshape.net") + " --class valid");
        CHECK(ok.code == 0);
        CmdResult bad = run_cli("check " + net_arg("camel.net") + " --class valid");
        CHECK(bad.code == 3);
        CHECK(bad.out.find("camel v") != std::string::npos);
    }
    SUBCASE("an invisible reticulation is named") {
        CmdResult r = run_cli("check " + net_arg("stack.net") +
                              " --class reticulation-visible");
        CHECK(r.code == 3);
        CHECK(r.out.find("invisible-reticulation r1") != std::string::npos);
    }
    SUBCASE("orchard membership prints its picks") {
        CmdResult r = run_cli("check " + net_arg("camel.net") + " --class orchard");
        CHECK(r.code == 0);
        CHECK(r.out.find("pick l2 l1 reticulated") != std::string::npos);
    }
    SUBCASE("undirected input is rejected") {
        CmdResult r = run_cli("check " + net_arg("fix_a.net") + " --class valid");
        CHECK(r.code == 2);
    }
    SUBCASE("unknown class names are rejected") {
        CmdResult r = run_cli("check " + net_arg("stack.net") + " --class bogus");
        CHECK(r.code == 2);
    }
}

TEST_CASE("class-orient searches within a class") {
    SUBCASE("stack-free succeeds on the annotated fixture") {
        CmdResult r = run_cli("class-orient " + net_arg("fix_a.net") + " --class stack-free");
        CHECK(r.code == 0);
        NetworkFile file = phylo::parse_network_text(r.out);
        CHECK(file.kind == NetworkFile::Kind::directed);
    }
    SUBCASE("tree-child is impossible there") {
        CmdResult r = run_cli("class-orient " + net_arg("fix_a.net") + " --class tree-child");
        CHECK(r.code == 3);
        CHECK(r.out.rfind("NO:", 0) == 0);
    }
    SUBCASE("--all-roots lists every rootable edge") {
        CmdResult r = run_cli("class-orient " + net_arg("fix_a.net") +
                              " --class stack-free --all-roots");
        CHECK(r.code == 0);
        CHECK(count_lines_with(r.out, "rootable-edge") == 5);
        CHECK(r.out.find("rootable-edge b c") != std::string::npos);
    }
    SUBCASE("json output carries the whole result") {
        CmdResult r = run_cli("class-orient " + net_arg("fix_a.net") +
                              " --class stack-free --format json");
        CHECK(r.code == 0);
        json j = json::parse(r.out);
        CHECK(j["orientable"] == true);
        CHECK(j["rootable_edges"].size() == 5);
        CHECK(j["network"]["arcs"].size() == 8);
    }
    SUBCASE("the exhaustive and chain-search algorithms agree") {
        CmdResult blob = run_cli("class-orient " + net_arg("fix_b.net") +
                                 " --class tree-based --all-roots");
        CmdResult ex = run_cli("class-orient " + net_arg("fix_b.net") +
                               " --class tree-based --all-roots --algorithm exhaustive");
        CmdResult fpt = run_cli("class-orient " + net_arg("fix_b.net") +
                                " --class tree-based --all-roots --algorithm fpt");
        CHECK(blob.code == ex.code);
        CHECK(blob.out == ex.out);
        CHECK(blob.out == fpt.out);
    }
    SUBCASE("a tight budget aborts the search") {
        CmdResult r = run_cli("class-orient " + net_arg("fix_c.net") + " --budget 10");
        CHECK(r.code == 4);
        CHECK(r.out.find("budget") != std::string::npos);
    }
}

TEST_CASE("partly-directed subcommands") {
    SUBCASE("pd-orient finds an orientation honouring the arcs") {
        CmdResult r = run_cli("pd-orient " + net_arg("fix_d_l.net"));
        CHECK(r.code == 0);
        NetworkFile file = phylo::parse_network_text(r.out);
        REQUIRE(file.kind == NetworkFile::Kind::directed);
        CHECK(file.directed->has_arc("a", "b"));
        CHECK(file.directed->has_arc("b", "g"));
    }
    SUBCASE("pd-orient refuses the conflicting variant") {
        CmdResult r = run_cli("pd-orient " + net_arg("fix_d_r.net"));
        CHECK(r.code == 3);
        CHECK(r.out.rfind("NO:", 0) == 0);
    }
    SUBCASE("semi-directed accepts the left and rejects the right variant") {
        CmdResult yes = run_cli("semi-directed " + net_arg("fix_d_l.net"));
        CHECK(yes.code == 0);
        CHECK(yes.out.rfind("true", 0) == 0);
        CHECK(yes.out.find("root-edge d e") != std::string::npos);
        CmdResult no = run_cli("semi-directed " + net_arg("fix_d_r.net"));
        CHECK(no.code == 3);
        CHECK(no.out.rfind("false", 0) == 0);
    }
}

TEST_CASE("tree-based-undirected answers for both fixtures") {
    CmdResult yes = run_cli("tree-based-undirected " + net_arg("fix_a.net"));
    CHECK(yes.code == 0);
    CHECK(yes.out.rfind("true", 0) == 0);
    CmdResult no = run_cli("tree-based-undirected " + net_arg("fix_c.net"));
    CHECK(no.code == 3);
    CHECK(no.out.rfind("false", 0) == 0);
}

TEST_CASE("stats summarises a network") {
    CmdResult r = run_cli("stats " + net_arg("fix_c.net"));
    CHECK(r.code == 0);
    CHECK(r.out.find("reticulation-number: 12") != std::string::npos);
    CHECK(r.out.find("level: 6") != std::string::npos);
    CHECK(r.out.find("blobs: 2") != std::string::npos);

    CmdResult j = run_cli("stats " + net_arg("fix_c.net") + " --format json");
    CHECK(j.code == 0);
    json parsed = json::parse(j.out);
    CHECK(parsed["level"] == 6);
    CHECK(parsed["binary"] == true);
}

TEST_CASE("to-dot renders all three kinds") {
    CmdResult undirected = run_cli("to-dot " + net_arg("fix_a.net"));
    CHECK(undirected.code == 0);
    CHECK(undirected.out.rfind("graph network {", 0) == 0);
    CHECK(undirected.out.find("doublecircle") != std::string::npos);

    CmdResult directed = run_cli("to-dot " + net_arg("stack.net"));
    CHECK(directed.code == 0);
    CHECK(directed.out.rfind("digraph network {", 0) == 0);

    CmdResult partly = run_cli("to-dot " + net_arg("fix_d_l.net"));
    CHECK(partly.code == 0);
    CHECK(partly.out.find("dir=none") != std::string::npos);
}

TEST_CASE("gen is deterministic and validates its arguments") {
    const std::string args = "gen --leaves 5 --level 2 --retics 3 --seed 9";
    CmdResult a = run_cli(args);
    CmdResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    NetworkFile file = phylo::parse_network_text(a.out);
    CHECK(file.kind == NetworkFile::Kind::directed);

    CmdResult bad = run_cli("gen --level 3 --retics 2");
    CHECK(bad.code == 2);
}

TEST_CASE("bad invocations exit with the usage code") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("orient").code == 2);  // missing --network
    CHECK(run_cli("orient --network /no/such/file.net").code == 2);
    CHECK(run_cli("suite acceptance --fixtures /no/such/dir").code == 2);
    CHECK(run_cli("orient " + net_arg("fix_a.net") + " --root-edge nonsense").code == 2);
    CHECK(run_cli("orient " + net_arg("stack.net")).code == 2);  // directed input
}
