#pragma once

#include "vrpsd/oracles.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vrpsd {

struct CheckResult {
    std::string name;
    bool passed = true;
    long cases = 0;
    long failures = 0;
    double seconds = 0.0;
    // Coverage counters worth reporting on success.
    std::string info;
    // First counterexample, if any.
    std::string detail;
};

struct BatterySizes {
    int classical_routes = 1000;
    int qstar_routes = 300;
    int probe_routes = 200;
    int probe_trials = 10;
    int membership_triples = 1000;
    int dominance_supports = 200;
    int dominance_points = 50;
    int recovery_instances = 30;
    int e2e_instances = 50;
    int separation_candidates = 1000;
    int milp_instances = 5;
};

// "tiny", "small" or "full".
BatterySizes battery_sizes(const std::string &name);

CheckResult check_golden_set_cut();
CheckResult check_classical_formula(int routes, Rng &rng);
CheckResult check_scenario_optimal(int routes, Rng &rng);
CheckResult check_integrality(int routes, int trials, Rng &rng);
CheckResult check_membership(int triples, Rng &rng);
CheckResult check_dominance(int supports, int points, Rng &rng);
CheckResult check_bound_recovery(int instances, Rng &rng);
CheckResult check_end_to_end(int instances, Rng &rng);
CheckResult check_separation_soundness(int candidates, Rng &rng);
CheckResult check_milp_threshold(int instances, Rng &rng);

std::vector<CheckResult> run_battery(const BatterySizes &sizes, std::uint64_t seed);

} // namespace vrpsd
