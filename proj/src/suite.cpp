#include "phylo/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

#include "phylo/class_orient.hpp"
#include "phylo/classes.hpp"
#include "phylo/decompose.hpp"
#include "phylo/io.hpp"
#include "phylo/network.hpp"
#include "phylo/orient.hpp"
#include "phylo/random_net.hpp"

namespace phylo {

bool SuiteReport::all_passed() const {
    for (const SuiteCase& c : cases) {
        if (!c.passed) return false;
    }
    return true;
}

std::string SuiteReport::text() const {
    std::string out;
    int passed = 0;
    for (const SuiteCase& c : cases) {
        out += c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
        out += " " + c.id + " " + c.description;
        if (!c.detail.empty()) out += " -- " + c.detail;
        out += "\n";
        if (c.passed) ++passed;
    }
    out += "passed " + std::to_string(passed) + "/" + std::to_string(cases.size()) + "\n";
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f ms", ms);
    return buf;
}

NetworkFile load_fixture(const std::string& dir, const std::string& name) {
    const std::string path = dir + "/" + name;
    try {
        return load_network_file(path);
    } catch (const std::exception& e) {
        throw std::runtime_error("missing or unreadable fixture " + path + ": " + e.what());
    }
}

int draw(std::mt19937_64& rng, int n) {  // uniform in [0, n)
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

bool same_arc_set(const DirectedNetwork& a, const DirectedNetwork& b) {
    auto key = [](const DirectedNetwork& n) {
        std::set<std::pair<VertexId, VertexId>> s;
        for (const ArcKey& arc : n.arcs()) s.emplace(arc.tail, arc.head);
        return s;
    };
    return key(a) == key(b);
}

// Criterion 1: the annotated instance is refused with the expected
// certificate, within 10 ms.
SuiteCase criterion_cut_certificate(const std::string& dir) {
    SuiteCase out{"criterion-01",
                  "annotated fix_a instance is refused with the expected degree cut",
                  false, false, "", "", 0.0};
    NetworkFile f = load_fixture(dir, "fix_a.net");
    const UndirectedNetwork& net = *f.undirected;
    std::vector<VertexId> retics;
    for (const auto& [v, d] : f.retic_degrees) retics.push_back(v);
    RootedInstance inst{net, *f.root_edge, binary_degree_map(net, retics), std::nullopt};

    auto t0 = Clock::now();
    OrientationResult res = orient(inst);
    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);

    if (res.outcome != OrientOutcome::degree_cut || !res.cut.has_value()) {
        out.detail = "expected a degree-cut refusal, got " + to_string(res.outcome);
        return out;
    }
    const std::vector<VertexId> want_v{"b", "c"};
    const std::vector<EdgeKey> want_e{EdgeKey(kRootId, "b"), EdgeKey("a", "c")};
    std::string why;
    if (res.cut->cut_vertices != want_v || res.cut->cut_edges != want_e) {
        out.detail = "unexpected certificate " + res.cut->str();
        return out;
    }
    if (!is_valid_degree_cut(inst, *res.cut, &why)) {
        out.detail = "certificate fails the definitional validator: " + why;
        return out;
    }
    out.passed = out.millis < 10.0;
    out.detail = "certificate " + res.cut->str();
    if (!out.passed) out.detail += "; over the 10 ms bound";
    return out;
}

// Criterion 2: without annotations, fix_a has stack-free roots but no
// tree-child root, found exhaustively within 1 s.
SuiteCase criterion_fix_a_classes(const std::string& dir) {
    SuiteCase out{"criterion-02",
                  "fix_a roots as stack-free but not as tree-child",
                  false, false, "", "", 0.0};
    const UndirectedNetwork net = *load_fixture(dir, "fix_a.net").undirected;
    auto t0 = Clock::now();
    RootableSet sf = rootable_edges_exhaustive(net, NetworkClass::stack_free);
    RootableSet tc = rootable_edges_exhaustive(net, NetworkClass::tree_child);
    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);
    out.detail = "stack-free roots: " + std::to_string(sf.entries.size()) +
                 ", tree-child roots: " + std::to_string(tc.entries.size());
    out.passed = !sf.entries.empty() && tc.entries.empty() && out.millis < 1000.0;
    return out;
}

// Criterion 3: fix_b is orientable but not stack-free orientable, found
// exhaustively within 5 s.
SuiteCase criterion_fix_b_classes(const std::string& dir) {
    SuiteCase out{"criterion-03",
                  "fix_b roots unrestricted but not as stack-free",
                  false, false, "", "", 0.0};
    const UndirectedNetwork net = *load_fixture(dir, "fix_b.net").undirected;
    auto t0 = Clock::now();
    RootableSet anyr = rootable_edges_exhaustive(net, NetworkClass::any);
    RootableSet sf = rootable_edges_exhaustive(net, NetworkClass::stack_free);
    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);
    out.detail = "unrestricted roots: " + std::to_string(anyr.entries.size()) +
                 ", stack-free roots: " + std::to_string(sf.entries.size());
    out.passed = !anyr.entries.empty() && sf.entries.empty() && out.millis < 5000.0;
    return out;
}

// Criterion 4: fix_c is orientable but not tree-based orientable, decided
// by the blob assembly within 60 s.
SuiteCase criterion_fix_c_tree_based(const std::string& dir) {
    SuiteCase out{"criterion-04",
                  "fix_c roots unrestricted but not as tree-based",
                  false, false, "", "", 0.0};
    const UndirectedNetwork net = *load_fixture(dir, "fix_c.net").undirected;
    auto t0 = Clock::now();
    COrientation anyo = c_orientation(net, NetworkClass::any);
    COrientation tb = c_orientation(net, NetworkClass::tree_based);
    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);
    out.detail = std::string("unrestricted: ") + (anyo.orientable ? "yes" : "no") +
                 ", tree-based: " + (tb.orientable ? "yes" : "no");
    out.passed = anyo.orientable && !tb.orientable && out.millis < 60000.0;
    return out;
}

// Criterion 5: fix_d_l is semi-directed and fix_d_r is not, each decided
// within 1 s.
SuiteCase criterion_semi_directed(const std::string& dir) {
    SuiteCase out{"criterion-05",
                  "fix_d_l is semi-directed, fix_d_r is not",
                  false, false, "", "", 0.0};
    const PartlyDirectedNetwork left = *load_fixture(dir, "fix_d_l.net").partly;
    const PartlyDirectedNetwork right = *load_fixture(dir, "fix_d_r.net").partly;
    auto t0 = Clock::now();
    SemiDirectedResult l = is_semi_directed(left);
    double ms_l = ms_since(t0);
    auto t1 = Clock::now();
    SemiDirectedResult r = is_semi_directed(right);
    double ms_r = ms_since(t1);
    out.millis = ms_l + ms_r;
    out.metrics = format_ms(ms_l) + " / " + format_ms(ms_r);
    out.detail = std::string("left: ") + (l.semi_directed ? "yes" : "no") +
                 (l.root_edge ? " at " + l.root_edge->str() : "") +
                 ", right: " + (r.semi_directed ? "yes" : "no");
    out.passed = l.semi_directed && !r.semi_directed && ms_l < 1000.0 && ms_r < 1000.0;
    return out;
}

// Criterion 6: the propagation algorithm agrees with the brute-force
// oracle on random small instances, and orientations are unique.
SuiteCase criterion_orientation_oracle(int count) {
    SuiteCase out{"criterion-06",
                  "orientation decisions match the brute-force oracle on " +
                      std::to_string(count) + " instances",
                  false, false, "", "", 0.0};
    auto t0 = Clock::now();
    std::mt19937_64 aux(987654321);
    int tested = 0, mismatches = 0;
    std::string first_bad;
    for (std::uint64_t seed = 1; tested < count && seed <= 50ull * count; ++seed) {
        GeneratorConfig cfg;
        cfg.rng_seed = seed;
        switch (seed % 5) {
            case 0: cfg = {3, 0, 0, {0, 0}, seed}; break;
            case 1: cfg = {4, 0, 0, {0, 0}, seed}; break;
            case 2: cfg = {3, 1, 1, {0, 0}, seed}; break;
            case 3: cfg = {4, 1, 2, {0, 0}, seed}; break;
            case 4: cfg = {3, 2, 2, {0, 0}, seed}; break;
        }
        DirectedNetwork dn = generate_random_directed(cfg);
        UnderlyingResult und = underlying_network(dn);
        if (und.parallel_pair.has_value()) continue;
        const UndirectedNetwork& net = und.network;
        if (net.edge_count() > 12) continue;

        const std::vector<EdgeKey> edges = net.edges();
        EdgeKey root = edges[draw(aux, net.edge_count())];
        const int k = net.edge_count() - net.vertex_count() + 1;
        std::vector<VertexId> retics;
        if (tested % 2 == 0) {
            retics = dn.reticulations();
        } else {
            std::vector<VertexId> internal;
            for (const VertexId& v : net.vertices()) {
                if (!net.is_leaf(v)) internal.push_back(v);
            }
            for (int i = 0; i < k; ++i) {
                std::swap(internal[i], internal[i + draw(aux, static_cast<int>(internal.size()) - i)]);
                retics.push_back(internal[i]);
            }
        }
        DegreeMap degrees = binary_degree_map(net, retics);
        RootedInstance inst{net, root, degrees, std::nullopt};

        std::vector<DirectedNetwork> oracle = brute_force_orientations(net, root, degrees);
        OrientationResult mine = orient(inst);
        bool ok = oracle.size() <= 1 && mine.oriented() == (oracle.size() == 1);
        if (ok && mine.oriented()) ok = same_arc_set(*mine.network, oracle.front());
        if (ok && mine.outcome == OrientOutcome::degree_cut) {
            ok = is_valid_degree_cut(inst, *mine.cut);
        }
        ++tested;
        if (!ok && mismatches++ == 0) {
            first_bad = "first mismatch at seed " + std::to_string(seed) + ", root " + root.str();
        }
    }
    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);
    out.detail = "instances: " + std::to_string(tested) +
                 ", mismatches: " + std::to_string(mismatches);
    if (!first_bad.empty()) out.detail += "; " + first_bad;
    out.passed = tested == count && mismatches == 0;
    return out;
}

// Criterion 7: the chain-reduced search and blob assembly agree with the
// whole-network exhaustive search on random low-reticulation networks with
// chains, across all six classes.
SuiteCase criterion_reduction_agreement(int count) {
    SuiteCase out{"criterion-07",
                  "reduced searches match the exhaustive search on " +
                      std::to_string(count) + " networks, all classes",
                  false, false, "", "", 0.0};
    auto t0 = Clock::now();
    static constexpr std::pair<int, int> kShapes[5] = {{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}};
    int nets = 0, multiblob = 0, set_mismatches = 0, verdict_mismatches = 0;
    std::string first_bad;
    for (std::uint64_t seed = 1; nets < count && seed <= 50ull * count; ++seed) {
        GeneratorConfig cfg;
        cfg.leaf_count = 5 + static_cast<int>(seed % 3);
        cfg.target_level = kShapes[seed % 5].first;
        cfg.target_reticulation_number = kShapes[seed % 5].second;
        cfg.chain_length_range = {1, 6};
        cfg.rng_seed = seed;
        DirectedNetwork dn = generate_random_directed(cfg);
        UnderlyingResult und = underlying_network(dn);
        if (und.parallel_pair.has_value()) continue;
        const UndirectedNetwork& net = und.network;
        ++nets;
        if (blob_decomposition(net).blobs.size() >= 2) ++multiblob;
        for (NetworkClass c : all_network_classes()) {
            RootableSet ex = rootable_edges_exhaustive(net, c);
            RootableSet fpt = rootable_edges_fpt(net, c);
            if (ex.edge_set() != fpt.edge_set() && set_mismatches++ == 0) {
                first_bad = "first mismatch at seed " + std::to_string(seed) + ", class " +
                            to_string(c);
            }
            COrientation blob = c_orientation(net, c);
            if (blob.orientable != !ex.entries.empty() && verdict_mismatches++ == 0) {
                first_bad = "first verdict mismatch at seed " + std::to_string(seed) +
                            ", class " + to_string(c);
            }
        }
    }
    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);
    out.detail = "networks: " + std::to_string(nets) + " (" + std::to_string(multiblob) +
                 " multi-blob), edge-set mismatches: " + std::to_string(set_mismatches) +
                 ", verdict mismatches: " + std::to_string(verdict_mismatches);
    if (!first_bad.empty()) out.detail += "; " + first_bad;
    out.passed = nets == count && multiblob > 0 && set_mismatches == 0 &&
                 verdict_mismatches == 0;
    return out;
}

// Criterion 8: class inclusions hold on generated directed networks.
SuiteCase criterion_class_inclusions(int count) {
    SuiteCase out{"criterion-08",
                  "class inclusions hold on " + std::to_string(count) + " generated networks",
                  false, false, "", "", 0.0};
    auto t0 = Clock::now();
    static constexpr std::pair<int, int> kShapes[8] = {
        {0, 0}, {1, 1}, {1, 2}, {2, 2}, {2, 3}, {1, 3}, {3, 3}, {3, 4}};
    int nets = 0, violations = 0;
    std::string first_bad;
    for (std::uint64_t seed = 1; nets < count && seed <= 50ull * count; ++seed) {
        GeneratorConfig cfg;
        cfg.leaf_count = 5 + static_cast<int>(seed % 5);
        cfg.target_level = kShapes[seed % 8].first;
        cfg.target_reticulation_number = kShapes[seed % 8].second;
        cfg.chain_length_range = seed % 2 == 0 ? std::pair<int, int>{1, 3}
                                               : std::pair<int, int>{0, 0};
        cfg.rng_seed = seed;
        DirectedNetwork dn = generate_random_directed(cfg);
        ++nets;
        ClassReport r = class_membership(dn);
        bool ok = (!r.tree_child || r.valid) && (!r.valid || r.stack_free) &&
                  (!r.stack_free || r.tree_based) && (!r.orchard || r.tree_based) &&
                  (!r.reticulation_visible || r.stack_free);
        if (!ok && violations++ == 0) {
            first_bad = "first violation at seed " + std::to_string(seed);
        }
    }
    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);
    out.detail = "networks: " + std::to_string(nets) +
                 ", violations: " + std::to_string(violations);
    if (!first_bad.empty()) out.detail += "; " + first_bad;
    out.passed = nets == count && violations == 0;
    return out;
}

// Criterion 9: orientation runtime grows linearly with the edge count on
// chained-blob networks (log-log slope 1.0 +- 0.15 over 10^3..10^5 edges).
SuiteCase criterion_linear_runtime() {
    SuiteCase out{"criterion-09",
                  "orientation runtime scales linearly on blob chains",
                  false, false, "", "", 0.0};
    auto t0 = Clock::now();
    static constexpr int kBlobs[3] = {167, 1667, 16667};  // |E| = 1003, 10003, 100003
    static constexpr int kReps[3] = {16, 8, 4};
    double xs[3], ys[3];
    bool all_oriented = true;
    for (int i = 0; i < 3; ++i) {
        BlobChain bc = make_blob_chain(kBlobs[i]);
        RootedInstance inst{bc.network, bc.root_edge, bc.degrees, std::nullopt};
        double best = 1e300;
        for (int rep = 0; rep < kReps[i]; ++rep) {
            auto r0 = Clock::now();
            OrientationResult res = orient(inst);
            best = std::min(best, ms_since(r0));
            if (!res.oriented()) all_oriented = false;
        }
        xs[i] = std::log(static_cast<double>(bc.network.edge_count()));
        ys[i] = std::log(best);
    }
    double mx = (xs[0] + xs[1] + xs[2]) / 3.0, my = (ys[0] + ys[1] + ys[2]) / 3.0;
    double cov = 0.0, var = 0.0;
    for (int i = 0; i < 3; ++i) {
        cov += (xs[i] - mx) * (ys[i] - my);
        var += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = cov / var;
    out.millis = ms_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "slope %.3f; best-of-rep times %.2f / %.2f / %.2f ms",
                  slope, std::exp(ys[0]), std::exp(ys[1]), std::exp(ys[2]));
    out.metrics = buf;
    out.detail = all_oriented ? "all chained instances oriented"
                              : "a chained instance failed to orient";
    out.passed = all_oriented && std::abs(slope - 1.0) <= 0.15;
    return out;
}

// Criterion 10: the directed micro-fixtures hit exactly their forbidden
// structures, and the definitional tree-based search agrees with the scan.
SuiteCase criterion_micro_fixtures(const std::string& dir) {
    SuiteCase out{"criterion-10",
                  "micro-fixtures hit exactly their forbidden structures",
                  false, false, "", "", 0.0};
    auto t0 = Clock::now();
    std::string bad;
    auto expect = [&bad](bool cond, const std::string& what) {
        if (!cond) bad += (bad.empty() ? "" : "; ") + what;
    };

    DirectedNetwork stack = *load_fixture(dir, "stack.net").directed;
    ClassReport s = class_membership(stack);
    expect(!s.stack_free && !s.valid && !s.tree_child,
           "stack should fail stack-free, valid and tree-child");
    expect(s.tree_based && is_tree_based_exhaustive(stack) == s.tree_based,
           "stack should stay tree-based, oracle agreeing");

    DirectedNetwork wshape = *load_fixture(dir, "wshape.net").directed;
    ClassReport w = class_membership(wshape);
    expect(!w.tree_child && w.stack_free,
           "wshape should fail tree-child only among {tree-child, stack-free}");

    DirectedNetwork camel = *load_fixture(dir, "camel.net").directed;
    ClassReport c = class_membership(camel);
    expect(!c.valid && c.stack_free, "camel should fail valid while staying stack-free");

    DirectedNetwork wfence = *load_fixture(dir, "wfence.net").directed;
    bool tb = is_tree_based(wfence);
    expect(!tb, "wfence should fail tree-based");
    expect(is_tree_based_exhaustive(wfence) == tb, "wfence oracle should agree with the scan");

    out.millis = ms_since(t0);
    out.metrics = format_ms(out.millis);
    out.detail = bad.empty() ? "stack, wshape, camel, wfence all as expected" : bad;
    out.passed = bad.empty();
    return out;
}

}  // namespace

SuiteReport run_acceptance_suite(const std::string& fixture_dir) {
    SuiteReport report;
    report.cases.push_back(criterion_cut_certificate(fixture_dir));
    report.cases.push_back(criterion_fix_a_classes(fixture_dir));
    report.cases.push_back(criterion_fix_b_classes(fixture_dir));
    report.cases.push_back(criterion_fix_c_tree_based(fixture_dir));
    report.cases.push_back(criterion_semi_directed(fixture_dir));
    report.cases.push_back(criterion_orientation_oracle(200));
    report.cases.push_back(criterion_reduction_agreement(100));
    report.cases.push_back(criterion_class_inclusions(500));
    report.cases.push_back(criterion_linear_runtime());
    report.cases.push_back(criterion_micro_fixtures(fixture_dir));
    return report;
}

SuiteReport run_property_suite(int budget_seconds) {
    SuiteReport report;
    auto start = Clock::now();
    auto within_budget = [&] {
        return ms_since(start) < 1000.0 * budget_seconds;
    };
    auto add = [&report](SuiteCase c) { report.cases.push_back(std::move(c)); };
    auto skip = [&add](const std::string& id, const std::string& desc) {
        add(SuiteCase{id, desc, false, true, "skipped: budget exhausted", "", 0.0});
    };

    if (within_budget()) {
        add(criterion_orientation_oracle(200));
    } else {
        skip("criterion-06", "orientation decisions match the brute-force oracle");
    }
    if (within_budget()) {
        add(criterion_reduction_agreement(100));
    } else {
        skip("criterion-07", "reduced searches match the exhaustive search");
    }
    if (within_budget()) {
        add(criterion_class_inclusions(500));
    } else {
        skip("criterion-08", "class inclusions hold on generated networks");
    }
    return report;
}

}  // namespace phylo
