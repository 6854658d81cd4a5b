#pragma once

#include "vrpsd/cuts.hpp"
#include "vrpsd/model.hpp"
#include "vrpsd/recourse.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace vrpsd {

struct SeparationContext {
    const Instance *inst = nullptr;
    const EdgeIndex *edges = nullptr;
    const RecourseWeights *weights = nullptr;
    std::vector<double> x;
    std::vector<double> theta;
    // y[xi][v]; empty outside the first phase.
    std::vector<std::vector<double>> y;
    bool use_sri = true;
    RecourseKind recourse = RecourseKind::ScenarioOptimal;
    FirstStage first_stage = FirstStage::Cvrp;
    std::vector<int> order;
    double tol = 1e-4;
};

// Scenarios by nonincreasing total demand, ties by index.
std::vector<int> scenario_order(const Instance &inst);

SeparationContext make_context(const Instance &inst, const EdgeIndex &edges, const RecourseWeights &weights);

using VehicleCount = std::function<int(std::span<const int>)>;

// Sets S with x(E(S)) > |S| - k(S) + tol, most violated first, at most
// max_sets of them.
std::vector<std::vector<int>> separate_rci(const EdgeIndex &edges, const std::vector<double> &x, const VehicleCount &k,
                                           double tol = 1e-4, int max_sets = 10);
std::vector<std::vector<int>> separate_rci(const EdgeIndex &edges, const std::vector<double> &x,
                                           std::span<const long long> d, long long C, double tol = 1e-4,
                                           int max_sets = 10);

std::vector<AggregatedSri> separate_sri_heuristic(const SeparationContext &ctx);

// Feasibility MIP over sets S whose SRI for scenario xi is violated by at
// least `threshold`.
std::optional<std::vector<int>> separate_sri_milp(const SeparationContext &ctx, int xi, double time_limit,
                                                  double epsilon = 0.5, double threshold = 0.01);

std::vector<PartialRoute> extract_partial_routes(const Instance &inst, const EdgeIndex &edges,
                                                 const std::vector<double> &x, double high = 0.9, double low = 0.1);

std::vector<Cut> separation_round(const SeparationContext &ctx);

} // namespace vrpsd
