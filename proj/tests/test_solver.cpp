#include "support.hpp"

#include "vrpsd/generate.hpp"
#include "vrpsd/oracles.hpp"
#include "vrpsd/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace vrpsd;
using vrpsd::test::line_instance;

namespace {

SolverConfig config(FirstStage fs, RecourseKind rk, Mode mode) {
    SolverConfig cfg;
    cfg.first_stage = fs;
    cfg.recourse = rk;
    cfg.mode = mode;
    cfg.time_limit_s = 60;
    cfg.root_phase1_limit_s = 10;
    return cfg;
}

} // namespace

TEST_CASE("config rejects SRIs with classical recourse") {
    SolverConfig cfg = config(FirstStage::Cvrp, RecourseKind::Classical, Mode::Sri);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.mode = Mode::Ils;
    CHECK_NOTHROW(cfg.validate());
    cfg.mode = Mode::IlsPlusSri;
    CHECK_NOTHROW(cfg.validate());
    cfg.recourse = RecourseKind::ScenarioOptimal;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(parse_mode("ils+sri") == Mode::IlsPlusSri);
    CHECK_THROWS_AS(parse_mode("lp"), std::invalid_argument);
}

TEST_CASE("single customer") {
    Instance inst = line_instance(1, 10, {{5}});
    inst.cost = {{0, 7}, {7, 0}};
    inst.fleet_size = 1;
    SolveReport r = solve(inst, config(FirstStage::Cvrp, RecourseKind::ScenarioOptimal, Mode::Sri));
    CHECK(r.status == "optimal");
    CHECK(r.exact_value == 14);
}

TEST_CASE("light demands give the shortest tour in every mode") {
    Instance inst = line_instance(4, 40, {{1, 2, 3, 4}, {4, 3, 2, 1}});
    inst.cost = {{0, 2, 3, 3, 2}, {2, 0, 2, 3, 3}, {3, 2, 0, 2, 3}, {3, 3, 2, 0, 2}, {2, 3, 3, 2, 0}};
    inst.fleet_size = 1;
    for (Mode m : {Mode::Ils, Mode::Sri}) {
        SolveReport r = solve(inst, config(FirstStage::Cvrp, RecourseKind::ScenarioOptimal, m));
        CHECK(r.status == "optimal");
        CHECK(r.exact_value == 10);
    }
    for (Mode m : {Mode::Ils, Mode::IlsPlusSri}) {
        SolveReport r = solve(inst, config(FirstStage::Cvrp, RecourseKind::Classical, m));
        CHECK(r.status == "optimal");
        CHECK(r.exact_value == 10);
    }
}

TEST_CASE("four-customer route pays its recourse") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}});
    SolverConfig cfg = config(FirstStage::Subtour, RecourseKind::ScenarioOptimal, Mode::Sri);
    SolveReport r = solve(inst, cfg);
    CHECK(r.status == "optimal");
    // Route (1,2,3,4) costs 8 and one return at v3 covers it; (2,3,1,4)
    // costs 12 and needs only a return at v1.
    CHECK(r.exact_value == 14);
    CHECK(r.exact_value == enumerate_optimal(inst, cfg).value);
    Rational total = 0;
    for (const auto &rr : r.routes)
        total += to_rational(rr.cost) + rr.recourse;
    CHECK(total == r.exact_value);
    CHECK(r.root_bound <= r.value + 1e-6);
}

TEST_CASE("phase one bound and its recovery") {
    GenParams gp;
    gp.n = 6;
    gp.scenarios = 3;
    gp.capacity = 20;
    gp.seed = 4;
    gp.demand_mean = 7;
    gp.demand_spread = 5;
    Instance inst = generate_instance(gp);
    SolverConfig cfg = config(FirstStage::Cvrp, RecourseKind::ScenarioOptimal, Mode::Sri);
    Phase1Result p1 = solve_root_phase1(inst, cfg);
    RootRelaxation root = build_root_relaxation(inst, cfg, p1);
    CHECK(root.value >= p1.z_tilde - 1e-6);
    if (p1.bundle.converged)
        CHECK(root.value == doctest::Approx(p1.z_tilde).epsilon(1e-6));
    double lb = lagrangian_bound(inst, cfg, p1.x_rows, p1.bundle);
    if (p1.bundle.converged)
        CHECK(lb == doctest::Approx(p1.z_tilde).epsilon(1e-6));

    DualBundle empty;
    empty.beta.resize(inst.scenarios());
    CHECK(std::isfinite(lagrangian_bound(inst, cfg, p1.x_rows, empty)));
    DualBundle broken = empty;
    broken.iota.push_back({AggregatedSri{{1}, {0}}, Rational(1000000)});
    CHECK(lagrangian_bound(inst, cfg, p1.x_rows, broken) == -kInf);
}

TEST_CASE("modes agree with enumeration on a generated instance") {
    GenParams gp;
    gp.n = 6;
    gp.scenarios = 3;
    gp.capacity = 20;
    gp.seed = 9;
    Instance inst = generate_instance(gp);
    for (FirstStage fs : {FirstStage::Cvrp, FirstStage::Subtour}) {
        SolverConfig base = config(fs, RecourseKind::ScenarioOptimal, Mode::Sri);
        Rational want = enumerate_optimal(inst, base).value;
        for (Mode m : {Mode::Ils, Mode::Sri}) {
            SolveReport r = solve(inst, config(fs, RecourseKind::ScenarioOptimal, m));
            CHECK(r.status == "optimal");
            CHECK(r.exact_value == want);
        }
        SolverConfig cc = config(fs, RecourseKind::Classical, Mode::Ils);
        Rational classical = enumerate_optimal(inst, cc).value;
        for (Mode m : {Mode::Ils, Mode::IlsPlusSri}) {
            SolveReport r = solve(inst, config(fs, RecourseKind::Classical, m));
            CHECK(r.status == "optimal");
            CHECK(r.exact_value == classical);
        }
    }
}

TEST_CASE("large demands are preprocessed before solving") {
    Instance inst = line_instance(3, 10, {{25, 4, 3}, {5, 12, 2}});
    SolverConfig cfg = config(FirstStage::Subtour, RecourseKind::Classical, Mode::Ils);
    SolveReport r = solve(inst, cfg);
    CHECK(r.status == "optimal");
    CHECK(r.exact_value == enumerate_optimal(inst, cfg).value);
}

TEST_CASE("cut hook sees every added cut") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}});
    int seen = 0;
    SolveHooks hooks;
    hooks.on_cut = [&](const Cut &c, const EdgeIndex &edges) {
        seen++;
        CHECK_FALSE(c.serialize(edges).empty());
    };
    SolveReport r = solve(inst, config(FirstStage::Subtour, RecourseKind::ScenarioOptimal, Mode::Ils), hooks);
    CHECK(seen >= r.counts.rci + r.counts.set + r.counts.partial);
    CHECK(seen > 0);
}
