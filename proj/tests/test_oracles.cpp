#include "support.hpp"

#include "vrpsd/generate.hpp"
#include "vrpsd/oracles.hpp"
#include "vrpsd/recourse.hpp"

#include <doctest.h>

#include <boost/random/uniform_int_distribution.hpp>

using namespace vrpsd;
using vrpsd::test::line_instance;

TEST_CASE("brute force and load DP agree on random routes") {
    Rng rng(11);
    boost::random::uniform_int_distribution<int> len(1, 5), dem(0, 10), bb(1, 2), nsc(1, 3), ww(0, 9);
    for (int t = 0; t < 150; t++) {
        int n = len(rng), N = nsc(rng);
        std::vector<std::vector<long long>> d(N, std::vector<long long>(n));
        for (auto &row : d)
            for (auto &v : row)
                v = dem(rng);
        Instance inst = line_instance(n, 10, d);
        RecourseWeights rw;
        rw.w.assign(n + 1, Rational(0));
        rw.b.assign(n + 1, 0);
        int b = bb(rng);
        for (int v = 1; v <= n; v++) {
            rw.w[v] = ww(rng);
            rw.b[v] = b;
        }
        std::vector<int> seq;
        for (int v = 1; v <= n; v++)
            seq.push_back(v);
        auto a = brute_force_scenario_optimal(inst, seq, rw);
        auto c = load_dp_scenario_optimal(inst, seq, rw);
        REQUIRE(a.has_value() == c.has_value());
        if (a) {
            CHECK(*a == *c);
            CHECK(*a == scenario_optimal_recourse(inst, Route{seq}, rw).value);
        }
    }
}

TEST_CASE("max-flow membership agrees with the subroute test") {
    Rng rng(12);
    boost::random::uniform_int_distribution<int> len(1, 6), dem(0, 10), yy(0, 1);
    for (int t = 0; t < 300; t++) {
        int n = len(rng);
        std::vector<long long> d(n);
        for (auto &v : d)
            v = dem(rng);
        Instance inst = line_instance(n, 10, {d});
        std::vector<int> seq, y;
        for (int v = 1; v <= n; v++) {
            seq.push_back(v);
            y.push_back(yy(rng));
        }
        CHECK(maxflow_membership(inst, seq, 0, y) == is_recourse_action(inst, seq, 0, y));
    }
}

TEST_CASE("plan enumeration counts") {
    Instance inst = line_instance(3, 10, {{1, 1, 1}});
    // Routes are counted once per direction pair: 3 + 3 + 1.
    CHECK(enumerate_plans(inst, FirstStage::Subtour).size() == 7);
    inst.fleet_size = 1;
    CHECK(enumerate_plans(inst, FirstStage::Cvrp).size() == 3);
}

TEST_CASE("enumerated optimum of trivial instances") {
    SolverConfig cfg;
    cfg.first_stage = FirstStage::Subtour;
    Instance one = line_instance(1, 10, {{5}});
    one.cost = {{0, 7}, {7, 0}};
    EnumeratedOptimum opt = enumerate_optimal(one, cfg);
    REQUIRE(opt.feasible);
    CHECK(opt.value == 14);

    // Light demands: the optimum is the shortest tour.
    Instance inst = line_instance(3, 10, {{1, 1, 1}, {2, 2, 2}});
    inst.cost = {{0, 2, 3, 2}, {2, 0, 2, 3}, {3, 2, 0, 2}, {2, 3, 2, 0}};
    opt = enumerate_optimal(inst, cfg);
    CHECK(opt.value == 8);
    REQUIRE(opt.plan.size() == 1);
}

TEST_CASE("enumerated optimum of the four-customer route") {
    // Customers on a line with round trips 2, 4, 6, 8: the single route
    // costs 8 and a return at v3 covers every overloaded subroute.
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}});
    SolverConfig cfg;
    cfg.first_stage = FirstStage::Subtour;
    EnumeratedOptimum opt = enumerate_optimal(inst, cfg);
    REQUIRE(opt.feasible);
    CHECK(opt.value == 14);
    RecourseWeights rw = classical_weights(inst);
    Rational best = -1;
    for (const auto &plan : enumerate_plans(inst, FirstStage::Subtour)) {
        Rational total = 0;
        for (const auto &r : plan)
            total += to_rational(route_cost(inst, r.sequence())) + scenario_optimal_recourse(inst, r, rw).value;
        if (best < 0 || total < best)
            best = total;
    }
    CHECK(opt.value == best);
}

TEST_CASE("generator is deterministic and valid") {
    GenParams gp;
    gp.n = 5;
    gp.scenarios = 3;
    gp.seed = 7;
    Instance a = generate_instance(gp), b = generate_instance(gp);
    CHECK(format_instance(a) == format_instance(b));
    CHECK_NOTHROW(a.validate());
    CHECK_NOTHROW(a.validate_for(FirstStage::Cvrp));
    gp.seed = 8;
    CHECK(format_instance(generate_instance(gp)) != format_instance(a));
}
