#pragma once

#include "vrpsd/config.hpp"
#include "vrpsd/model.hpp"
#include "vrpsd/recourse.hpp"

#include <boost/random/mersenne_twister.hpp>

#include <optional>
#include <span>
#include <vector>

namespace vrpsd {

using Rng = boost::random::mt19937_64;

struct EnumeratedOptimum {
    Rational value;
    std::vector<Route> plan;
    bool feasible = false;
};

// Exhaustive search over set partitions and customer orders. Preprocesses the
// instance and includes the base cost. n <= 8.
EnumeratedOptimum enumerate_optimal(const Instance &inst, const SolverConfig &cfg);

// Minimum over enumerated y in prod [0, b_v] filtered by is_recourse_action.
// Empty when some scenario has no admissible action. len(seq) <= 6.
std::optional<Rational> brute_force_scenario_optimal(const Instance &inst, const std::vector<int> &seq,
                                                     const RecourseWeights &weights);

// Same value by dynamic programming over the vehicle load, unloading
// greedily; independent of the subroute inequalities.
std::optional<Rational> load_dp_scenario_optimal(const Instance &inst, const std::vector<int> &seq,
                                                 const RecourseWeights &weights);

// Solves the recourse LP over the subroute inequalities and box [0, b] for
// random objectives and checks every returned vertex is integral.
bool hull_integrality_probe(const Instance &inst, const std::vector<int> &seq, const std::vector<int> &b,
                            int trials, Rng &rng);

// Circulation feasibility on the route network with return arcs of capacity
// C * y_i, decided by max-flow. y is indexed by position along seq.
bool maxflow_membership(const Instance &inst, const std::vector<int> &seq, int xi, std::span<const int> y);

// All integer routing plans of the instance admissible under fs.
std::vector<std::vector<Route>> enumerate_plans(const Instance &inst, FirstStage fs);

} // namespace vrpsd
