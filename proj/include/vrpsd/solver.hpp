#pragma once

#include "vrpsd/config.hpp"
#include "vrpsd/cuts.hpp"
#include "vrpsd/lp.hpp"
#include "vrpsd/model.hpp"
#include "vrpsd/recourse.hpp"
#include "vrpsd/separation.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace vrpsd {

// Column layout shared by every model: x edges, then theta_1..theta_n, then
// (first phase only) y^xi_v scenario by scenario.
struct VarLayout {
    int edges = 0;
    int n = 0;
    int scenarios = 0;
    int x(int e) const { return e; }
    int theta(int v) const { return edges + v - 1; }
    int y(int xi, int v) const { return edges + n + xi * n + v - 1; }
};

Row to_row(const Cut &cut, const VarLayout &layout);

struct DualBundle {
    std::vector<std::pair<AggregatedSri, Rational>> iota;
    std::vector<std::map<int, Rational>> beta;
    double z_tilde = 0.0;
    bool converged = false;
};

struct Phase1Result {
    double z_tilde = 0.0;
    DualBundle bundle;
    std::vector<AggregatedSri> sri_pool;
    std::vector<Cut> x_rows;
    int lp_solves = 0;
    double seconds = 0.0;
};

// Degree rows and bounds of the first-stage relaxation over the given layout.
LinearModel base_model(const Instance &inst, const EdgeIndex &edges, const VarLayout &layout, FirstStage fs,
                       bool integer_x);

Phase1Result solve_root_phase1(const Instance &inst, const SolverConfig &cfg);

struct RootRelaxation {
    LinearModel model;
    double value = 0.0;
    bool single_cut_added = false;
    std::vector<Cut> cuts;
};

RootRelaxation build_root_relaxation(const Instance &inst, const SolverConfig &cfg, const Phase1Result &phase1);

// sigma_x + sigma_y + nu for multipliers implied by the bundle; -infinity
// when sigma_y is unbounded.
double lagrangian_bound(const Instance &inst, const SolverConfig &cfg, const std::vector<Cut> &x_rows,
                        const DualBundle &bundle);

struct CutCounts {
    int rci = 0;
    int sri = 0;
    int proj_sri = 0;
    int set = 0;
    int partial = 0;
    void add(CutKind kind);
};

struct RouteReport {
    Route route;
    long long cost = 0;
    Rational recourse;
};

struct SolveReport {
    std::string status;
    bool has_value = false;
    double value = 0.0;
    Rational exact_value;
    double bound = 0.0;
    double gap_pct = 0.0;
    double root_bound = 0.0;
    double root_gap_pct = 0.0;
    double z_tilde = 0.0;
    double time_s = 0.0;
    double phase1_time_s = 0.0;
    int outer_rounds = 0;
    CutCounts counts;
    std::vector<RouteReport> routes;
};

using RecourseCache = std::map<std::vector<int>, Rational>;

struct CandidateResult {
    std::vector<Cut> cuts;
    bool is_plan = false;
    bool feasible = false;
    std::vector<Route> routes;
    // c(x) + sum of route recourse; meaningful when feasible.
    Rational cost;
};

// Verifies an integer first-stage candidate: separation round, routing
// structure, fleet feasibility and recourse exactness per route.
CandidateResult examine_candidate(SeparationContext &ctx, const SolverConfig &cfg, const std::vector<int> &x,
                                  const std::vector<double> &theta, RecourseCache &cache);

struct SolveHooks {
    std::function<void(const Cut &, const EdgeIndex &)> on_cut;
    std::string dump_model_path;
};

SolveReport solve(const Instance &inst, const SolverConfig &cfg, const SolveHooks &hooks = {});

} // namespace vrpsd
