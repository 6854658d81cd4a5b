#include "support.hpp"

#include "vrpsd/oracles.hpp"
#include "vrpsd/recourse.hpp"

#include <doctest.h>

using namespace vrpsd;
using vrpsd::test::line_instance;

TEST_CASE("classical failure counts") {
    Instance inst = line_instance(3, 10, {{6, 6, 4}, {4, 4, 4}});
    CHECK(simulate_classical(inst, {1, 2}, 0) == std::vector<int>{0, 1});
    CHECK(simulate_classical(inst, {1}, 0) == std::vector<int>{0});
    CHECK(simulate_classical(inst, {1, 2, 3}, 1) == std::vector<int>{0, 0, 1});
    CHECK(classical_failures(inst, {1, 2, 3}, 1) == std::vector<int>{0, 0, 1});
    CHECK(classical_failures(inst, {1, 2}, 0) == std::vector<int>{0, 1});
}

TEST_CASE("classical failure formula counts repeated crossings") {
    Instance inst = line_instance(2, 10, {{5, 27}});
    CHECK(classical_failures(inst, {1, 2}, 0) == std::vector<int>{0, 3});
    CHECK(classical_failures(inst, {2, 1}, 0) == std::vector<int>{2, 1});
    CHECK_THROWS(simulate_classical(inst, {1, 2}, 0));
}

TEST_CASE("classical recourse picks the cheaper orientation") {
    Instance inst = line_instance(2, 10, {{6, 6}});
    inst.cost = {{0, 3, 5}, {3, 0, 4}, {5, 4, 0}};
    CHECK(classical_recourse_directed(inst, {1, 2}).total == 10);
    CHECK(classical_recourse_directed(inst, {2, 1}).total == 6);
    ClassicalResult r = classical_recourse(inst, Route{{1, 2}});
    CHECK(r.orientation == Orientation::Reverse);
    CHECK(r.breakdown.total == 6);
    CHECK(r.breakdown.per_customer[1] == 6);
    CHECK(r.breakdown.per_customer[2] == 0);
    CHECK(classical_recourse(inst, Route{{2}}).breakdown.total == 0);
}

TEST_CASE("classical recourse averages over scenarios") {
    Instance inst = line_instance(2, 10, {{6, 6}, {1, 1}});
    inst.cost = {{0, 3, 5}, {3, 0, 4}, {5, 4, 0}};
    CHECK(classical_recourse_directed(inst, {1, 2}).total == 5);
}

TEST_CASE("recourse action membership") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 3}});
    std::vector<int> seq{1, 2, 3, 4};
    CHECK(is_recourse_action(inst, seq, 0, std::vector<int>{0, 0, 1, 0}));
    CHECK_FALSE(is_recourse_action(inst, seq, 0, std::vector<int>{1, 0, 0, 0}));
    CHECK(maxflow_membership(inst, seq, 0, std::vector<int>{0, 0, 1, 0}));
    CHECK_FALSE(maxflow_membership(inst, seq, 0, std::vector<int>{1, 0, 0, 0}));
    Instance light = line_instance(3, 10, {{2, 3, 4}});
    CHECK(is_recourse_action(light, {1, 2, 3}, 0, std::vector<int>{0, 0, 0}));
    CHECK_THROWS(is_recourse_action(light, {1, 2, 3}, 0, std::vector<int>{0, -1, 0}));
}

TEST_CASE("scenario-optimal recourse on the four-customer route") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}});
    RecourseWeights rw{{0, 2, 2, 6, 2}, {0, 1, 1, 1, 1}};
    ScenarioOptimal q = scenario_optimal_recourse(inst, Route{{1, 2, 3, 4}}, rw);
    CHECK(q.value == 4);
    CHECK(q.policy.y[0] == std::vector<int>{0, 0, 1, 0, 1});
    CHECK(q.breakdown.total == 4);
    CHECK(brute_force_scenario_optimal(inst, {1, 2, 3, 4}, rw) == Rational(4));
    CHECK(load_dp_scenario_optimal(inst, {1, 2, 3, 4}, rw) == Rational(4));
}

TEST_CASE("scenario-optimal recourse degenerate cases") {
    Instance inst = line_instance(3, 10, {{2, 3, 4}, {1, 1, 1}});
    RecourseWeights rw = classical_weights(inst);
    CHECK(scenario_optimal_recourse(inst, Route{{1, 2, 3}}, rw).value == 0);

    Instance heavy = line_instance(3, 10, {{9, 9, 9}});
    RecourseWeights zero{{0, 0, 0, 0}, {0, 1, 1, 1}};
    CHECK(scenario_optimal_recourse(heavy, Route{{1, 2, 3}}, zero).value == 0);

    RecourseWeights nob{{0, 2, 2, 2}, {0, 0, 0, 0}};
    CHECK_THROWS_AS(scenario_optimal_recourse(heavy, Route{{1, 2, 3}}, nob), InfeasibleRecourse);
    CHECK_FALSE(brute_force_scenario_optimal(heavy, {1, 2, 3}, nob).has_value());
}

TEST_CASE("classical weights are round trips to the depot") {
    Instance inst = line_instance(3, 10, {{1, 1, 1}});
    RecourseWeights rw = classical_weights(inst, 2);
    for (int v = 1; v <= 3; v++) {
        CHECK(rw.w[v] == 2 * v);
        CHECK(rw.b[v] == 2);
    }
}

TEST_CASE("hull of a two-customer route is integral") {
    Instance inst = line_instance(2, 10, {{6, 6}});
    Rng rng(5);
    CHECK(hull_integrality_probe(inst, {1, 2}, {1, 1}, 20, rng));
    Instance empty = line_instance(2, 10, {{0, 0}});
    CHECK(hull_integrality_probe(empty, {1, 2}, {1, 1}, 20, rng));
}
