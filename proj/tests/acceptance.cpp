// Acceptance gate for the laboratory: nine criteria, one pass/fail line
// each, nonzero exit if any fails. Sub-check details are printed only for
// failures; run `tscp verify <suite>` for the full per-check report.

#include "tscp/verify.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace {

struct Criterion {
    int number;
    std::string label;
    std::function<std::vector<tscp::CheckResult>()> run;
};

std::vector<tscp::CheckResult> filter(const tscp::SuiteResult& suite,
                                      const std::function<bool(const std::string&)>& pred) {
    std::vector<tscp::CheckResult> out;
    for (const auto& c : suite.checks)
        if (pred(c.id)) out.push_back(c);
    return out;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;

    // The exact-chain suite covers criteria 1, 2 and 4; run it once and
    // partition its checks.
    tscp::SuiteResult ychain;
    bool ychain_ran = false;
    auto ychain_once = [&]() -> const tscp::SuiteResult& {
        if (!ychain_ran) {
            ychain = tscp::verify_ychain(100000);
            ychain_ran = true;
        }
        return ychain;
    };

    std::vector<Criterion> criteria;
    criteria.push_back({1, "exact identity suite (kernel, first passage, printed bounds)", [&] {
                            return filter(ychain_once(), [](const std::string& id) {
                                return !starts_with(id, "exact_drift") &&
                                       !starts_with(id, "mc_drift") &&
                                       !starts_with(id, "healthy_boundary");
                            });
                        }});
    criteria.push_back({2, "two-level drift: exact sign and Monte Carlo agreement", [&] {
                            return filter(ychain_once(), [](const std::string& id) {
                                return starts_with(id, "exact_drift") || starts_with(id, "mc_drift");
                            });
                        }});
    criteria.push_back({3, "window progress dominates exact chain progress", [] {
                            return tscp::verify_coupling(10000).checks;
                        }});
    criteria.push_back({4, "healthy-boundary cycle-weight identity", [&] {
                            return filter(ychain_once(), [](const std::string& id) {
                                return starts_with(id, "healthy_boundary");
                            });
                        }});
    criteria.push_back({5, "large-q interval ordering and regress persistence", [] {
                            return tscp::verify_largeq(200, 200, 200, 1).checks;
                        }});
    criteria.push_back({6, "survival/extinction proxy and front slope signs", [] {
                            return tscp::verify_phase_diagram(200, 200, 100, 1).checks;
                        }});
    criteria.push_back({7, "distance drift bound, Wald identity, step law", [] {
                            return tscp::verify_fa1f(500, 4000, 1).checks;
                        }});
    criteria.push_back({8, "pathwise invariants (connectivity, traps, dominations)", [] {
                            return tscp::verify_invariants(1000, 1000, 500, 1).checks;
                        }});
    criteria.push_back({9, "byte-identical sweep re-emission across thread counts", [] {
                            const auto scratch = std::filesystem::temp_directory_path() /
                                                 "tscp-acceptance-determinism";
                            return tscp::verify_determinism(scratch).checks;
                        }});

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto t0 = clock::now();
        std::vector<tscp::CheckResult> checks;
        bool threw = false;
        std::string what;
        try {
            checks = criterion.run();
        } catch (const std::exception& e) {
            threw = true;
            what = e.what();
        }
        bool pass = !threw && !checks.empty();
        for (const auto& c : checks) pass = pass && c.pass;
        const double secs =
            std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count() /
            1000.0;
        std::printf("[%s] criterion %d: %s (%zu checks, %.1fs)\n", pass ? "PASS" : "FAIL",
                    criterion.number, criterion.label.c_str(), checks.size(), secs);
        if (threw) std::printf("    [FAIL] exception: %s\n", what.c_str());
        for (const auto& c : checks)
            if (!c.pass) std::printf("    [FAIL] %s  %s\n", c.id.c_str(), c.detail.c_str());
        if (!pass) ++failures;
    }

    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
