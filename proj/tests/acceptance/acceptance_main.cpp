// Acceptance suite driver: one pass/fail line per criterion, nonzero exit
// when any criterion fails.

#include <cstdio>

#include "galband/verify.hpp"

int main() {
    const std::vector<galband::CriterionResult> results = galband::run_acceptance();
    bool all_pass = true;
    double total = 0.0;
    for (const galband::CriterionResult& r : results) {
        std::printf("%s  %2d  %-28s  %6.1f s  %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.detail.c_str());
        all_pass = all_pass && r.pass;
        total += r.seconds;
    }
    std::printf("%s  (%zu criteria, %.1f s total)\n", all_pass ? "ALL PASS" : "FAILURES",
                results.size(), total);
    return all_pass ? 0 : 1;
}
