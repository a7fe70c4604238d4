// Acceptance gate: runs the ten acceptance criteria against the bundled
// fixtures and prints one PASS/FAIL line per criterion. Exits non-zero when
// any criterion fails, so CTest treats the gate as a single test.
#include <cstdio>
#include <exception>

#include "phylo/suite.hpp"

int main() {
    try {
        phylo::SuiteReport report = phylo::run_acceptance_suite(PHYLO_FIXTURE_DIR);
        for (const phylo::SuiteCase& c : report.cases) {
            std::printf("%s %s: %s", c.passed ? "PASS" : "FAIL", c.id.c_str(),
                        c.description.c_str());
            if (!c.detail.empty()) std::printf(" -- %s", c.detail.c_str());
            if (!c.metrics.empty()) std::printf(" [%s]", c.metrics.c_str());
            std::printf(" (%.1f ms)\n", c.millis);
        }
        std::printf("%s\n", report.all_passed() ? "acceptance: all criteria passed"
                                                : "acceptance: FAILURES above");
        return report.all_passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
        return 2;
    }
}
