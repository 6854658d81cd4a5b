// Runs the property battery at full size and prints one line per criterion.
// A criterion passes when its check holds and finishes within its budget.

#include "vrpsd/checks.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

using namespace vrpsd;

int main(int argc, char **argv) {
    std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20240101;
    BatterySizes sz = battery_sizes("full");
    Rng rng(seed);

    struct Criterion {
        const char *label;
        double budget_s;
        std::function<CheckResult()> run;
    };
    const Criterion criteria[] = {
        {"golden set cut, exact", 1, [] { return check_golden_set_cut(); }},
        {"classical recourse formula equals simulation", 10,
         [&] { return check_classical_formula(sz.classical_routes, rng); }},
        {"scenario-optimal recourse equals brute force", 60,
         [&] { return check_scenario_optimal(sz.qstar_routes, rng); }},
        {"recourse hull integrality", 60,
         [&] { return check_integrality(sz.probe_routes, sz.probe_trials, rng); }},
        {"subroute membership equals max-flow", 10, [&] { return check_membership(sz.membership_triples, rng); }},
        {"dominating projected SRI implies ILS cut", 120,
         [&] { return check_dominance(sz.dominance_supports, sz.dominance_points, rng); }},
        {"root bound recovery", 300, [&] { return check_bound_recovery(sz.recovery_instances, rng); }},
        {"end-to-end exactness", 600, [&] { return check_end_to_end(sz.e2e_instances, rng); }},
        {"separation soundness", 120, [&] { return check_separation_soundness(sz.separation_candidates, rng); }},
        {"MILP separation threshold", 30, [&] { return check_milp_threshold(sz.milp_instances, rng); }},
    };

    int failed = 0;
    for (const auto &c : criteria) {
        CheckResult r = c.run();
        bool in_time = r.seconds <= c.budget_s;
        bool ok = r.passed && in_time;
        failed += !ok;
        std::printf("%s %s: %ld cases, %.2f s (budget %.0f s)%s%s\n", ok ? "PASS" : "FAIL", c.label, r.cases,
                    r.seconds, c.budget_s, r.info.empty() ? "" : "; ", r.info.c_str());
        if (!r.passed)
            std::printf("  %ld failures, first:\n%s\n", r.failures, r.detail.c_str());
        else if (!in_time)
            std::printf("  over budget\n");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(std::size(criteria)) - failed, std::size(criteria));
    return failed ? 1 : 0;
}
