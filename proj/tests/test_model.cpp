#include "support.hpp"

#include "vrpsd/oracles.hpp"
#include "vrpsd/recourse.hpp"

#include <doctest.h>

#include <algorithm>

using namespace vrpsd;
using vrpsd::test::line_instance;

TEST_CASE("parse smallest instance") {
    Instance inst = parse_instance("NAME one\nN_CUSTOMERS 1\nCAPACITY 10\nCOST_MATRIX\n0\n4 0\nN_SCENARIOS 1\n"
                                   "PROB 1\nDEMANDS\n5\nEOF\n");
    CHECK(inst.n == 1);
    CHECK(inst.scenarios() == 1);
    CHECK(inst.d(0, 1) == 5);
    CHECK(inst.c(1, 0) == 4);
    CHECK_NOTHROW(inst.validate());
}

TEST_CASE("thirds sum to one and round trip") {
    Instance inst = line_instance(2, 10, {{1, 2}, {3, 4}, {5, 6}}, {ratio(1, 3), ratio(1, 3), ratio(1, 3)});
    CHECK_NOTHROW(inst.validate());
    Instance back = parse_instance(format_instance(inst));
    CHECK(back.prob == inst.prob);
    CHECK(back.demand == inst.demand);
    CHECK(back.cost == inst.cost);
}

TEST_CASE("broken instances are rejected") {
    Instance inst = line_instance(2, 10, {{1, 2}}, {ratio(1, 2)});
    CHECK_THROWS_AS(inst.validate(), InstanceError);
    inst = line_instance(2, 10, {{1, 2}});
    inst.cost[0][1] = 7;
    CHECK_THROWS_AS(inst.validate(), InstanceError);
    inst = line_instance(2, 10, {{-1, 2}});
    CHECK_THROWS_AS(inst.validate(), InstanceError);
}

TEST_CASE("large demand is flagged and preprocessed") {
    Instance inst = line_instance(1, 10, {{25}});
    inst.cost = {{0, 3}, {3, 0}};
    CHECK(inst.needs_preprocessing());
    Preprocessed pre = preprocess_large_demands(inst);
    CHECK(pre.inst.d(0, 1) == 5);
    CHECK(pre.base_cost == 12);

    inst.demand[0][1] = 7;
    CHECK_FALSE(inst.needs_preprocessing());
    pre = preprocess_large_demands(inst);
    CHECK(pre.inst.d(0, 1) == 7);
    CHECK(pre.base_cost == 0);

    inst.demand[0][1] = 20;
    pre = preprocess_large_demands(inst);
    CHECK(pre.inst.d(0, 1) == 10);
    CHECK(pre.base_cost == 6);
}

TEST_CASE("preprocessing preserves the classical optimum") {
    // Brute force on the original demands through the multi-failure formula.
    Instance inst = line_instance(3, 10, {{20, 4, 7}, {3, 25, 6}});
    inst.cost = {{0, 3, 5, 4}, {3, 0, 2, 6}, {5, 2, 0, 3}, {4, 6, 3, 0}};
    inst.validate();
    SolverConfig cfg;
    cfg.first_stage = FirstStage::Subtour;
    cfg.recourse = RecourseKind::Classical;
    cfg.mode = Mode::Ils;
    EnumeratedOptimum opt = enumerate_optimal(inst, cfg);
    REQUIRE(opt.feasible);

    Rational best = -1;
    std::vector<int> perm{1, 2, 3};
    do {
        // Every split of the permutation into consecutive routes.
        for (int mask = 0; mask < 4; mask++) {
            Rational total = 0;
            std::vector<int> cur;
            for (int i = 0; i < 3; i++) {
                cur.push_back(perm[i]);
                if (i == 2 || (mask >> i) & 1) {
                    Route r{cur};
                    total += to_rational(route_cost(inst, r.sequence())) + classical_recourse(inst, r).breakdown.total;
                    cur.clear();
                }
            }
            if (best < 0 || total < best)
                best = total;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(opt.value == best);
}

TEST_CASE("min_vehicles") {
    std::vector<long long> d{0, 6, 6, 4, 0};
    std::vector<int> a{1, 2}, b{1, 3}, c{4};
    CHECK(min_vehicles(a, d, 10) == 2);
    CHECK(min_vehicles(b, d, 10) == 1);
    CHECK(min_vehicles(c, d, 10) == 0);
    CHECK_THROWS(min_vehicles(std::vector<int>{}, d, 10));
}

TEST_CASE("edge index numbering") {
    EdgeIndex edges(4);
    CHECK(edges.size() == 10);
    for (int e = 0; e < edges.size(); e++) {
        CHECK(edges.id(edges.u(e), edges.v(e)) == e);
        CHECK(edges.id(edges.v(e), edges.u(e)) == e);
        CHECK(edges.u(e) < edges.v(e));
    }
    CHECK(edges.is_depot_edge(edges.id(0, 3)));
    CHECK_FALSE(edges.is_depot_edge(edges.id(1, 3)));
}

TEST_CASE("routes_of decodes routes") {
    EdgeIndex edges(3);
    std::vector<int> x(edges.size(), 0);
    x[edges.id(0, 1)] = 1;
    x[edges.id(1, 2)] = 1;
    x[edges.id(0, 2)] = 1;
    x[edges.id(0, 3)] = 2;
    RoutingPlan plan = routes_of(edges, x);
    REQUIRE(plan.routes.size() == 2);
    std::vector<std::vector<int>> got;
    for (const auto &r : plan.routes) {
        auto s = r.customers;
        if (s.front() > s.back())
            std::reverse(s.begin(), s.end());
        got.push_back(s);
    }
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::vector<int>>{{1, 2}, {3}});
    CHECK(encode_routes(edges, plan.routes) == x);
}

TEST_CASE("routes_of rejects a customer cycle") {
    EdgeIndex edges(3);
    std::vector<int> x(edges.size(), 0);
    x[edges.id(1, 2)] = 1;
    x[edges.id(2, 3)] = 1;
    x[edges.id(1, 3)] = 1;
    try {
        routes_of(edges, x);
        FAIL("no error");
    } catch (const RoutingError &e) {
        CHECK(e.kind == RoutingError::Kind::DepotFreeCycle);
        CHECK(e.cycle.size() == 3);
    }
}

TEST_CASE("adherence to a partial route") {
    PartialRoute H({{1}, {2, 3}});
    CHECK(adheres(Route{{1, 2, 3}}, H));
    CHECK(adheres(Route{{1, 3, 2}}, H));
    CHECK_FALSE(adheres(Route{{2, 1, 3}}, H));
    CHECK(adheres(Route{{3, 2, 1}}, H));
    CHECK_FALSE(adheres(Route{{1, 2}}, H));
    CHECK(PartialRoute::of_route({4, 2}).all_singletons());
    CHECK_FALSE(H.all_singletons());
}
