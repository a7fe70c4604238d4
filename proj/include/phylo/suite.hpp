#pragma once

#include <string>
#include <vector>

namespace phylo {

/// Outcome of one suite criterion.
struct SuiteCase {
    std::string id;           ///< stable id; fixes report ordering
    std::string description;
    bool passed = false;
    bool skipped = false;     ///< not run (budget exhausted)
    /// Deterministic supporting facts (counts, verdicts, certificates);
    /// never contains measured times, so reports compare byte-for-byte
    /// across runs with fixed seeds.
    std::string detail;
    /// Non-deterministic measurements (times, fitted slopes); excluded
    /// from text().
    std::string metrics;
    double millis = 0.0;
};

struct SuiteReport {
    std::vector<SuiteCase> cases;

    bool all_passed() const;
    /// One line per case ("PASS <id> <description> -- <detail>"), plus a
    /// summary line. Deterministic for fixed seeds.
    std::string text() const;
};

/// Runs the ten acceptance criteria against the fixture files in
/// `fixture_dir` (fix_a.net, fix_b.net, fix_c.net, fix_d_l.net,
/// fix_d_r.net, stack.net, wshape.net, camel.net, wfence.net).
/// Throws std::runtime_error naming the path when a fixture is missing or
/// unreadable.
SuiteReport run_acceptance_suite(const std::string& fixture_dir);

/// Runs the randomized property suites (orientation-oracle agreement,
/// reduced-search/exhaustive agreement, class inclusions) with fixed seeds.
/// Cases that would start after `budget_seconds` of wall time are reported
/// as skipped rather than run.
SuiteReport run_property_suite(int budget_seconds);

}  // namespace phylo
