#include "support.hpp"

#include "vrpsd/cuts.hpp"
#include "vrpsd/recourse.hpp"
#include "vrpsd/separation.hpp"

#include <doctest.h>

#include <algorithm>

using namespace vrpsd;
using vrpsd::test::as_double;
using vrpsd::test::line_instance;

namespace {

double best_sri_violation(const Instance &inst, const EdgeIndex &edges, const std::vector<double> &x,
                          const std::vector<std::vector<double>> &y, int xi) {
    double best = -1e9;
    for (int mask = 1; mask < (1 << inst.n); mask++) {
        std::vector<int> S;
        for (int v = 1; v <= inst.n; v++)
            if ((mask >> (v - 1)) & 1)
                S.push_back(v);
        best = std::max(best, sri_violation(inst, edges, x, y, S, xi));
    }
    return best;
}

} // namespace

TEST_CASE("scenario order by total demand") {
    Instance inst = line_instance(2, 10, {{1, 1}, {5, 5}, {2, 3}, {5, 5}});
    CHECK(scenario_order(inst) == std::vector<int>{1, 3, 2, 0});
}

TEST_CASE("RCI separation on an overloaded route") {
    Instance inst = line_instance(3, 10, {{4, 4, 4}});
    EdgeIndex edges(3);
    std::vector<double> x = as_double(encode_routes(edges, {Route{{1, 2, 3}}}));
    auto sets = separate_rci(edges, x, inst.demand[0], inst.capacity);
    REQUIRE_FALSE(sets.empty());
    for (const auto &S : sets) {
        double viol = inside_sum(edges, x, std::span<const int>(S)) - double(S.size()) +
                      min_vehicles(S, inst.demand[0], inst.capacity);
        CHECK(viol >= 1e-4);
    }
    bool whole = std::find(sets.begin(), sets.end(), std::vector<int>{1, 2, 3}) != sets.end();
    CHECK(whole);

    std::vector<double> ok = as_double(encode_routes(edges, {Route{{1, 2}}, Route{{3}}}));
    CHECK(separate_rci(edges, ok, inst.demand[0], inst.capacity).empty());
}

TEST_CASE("RCI separation finds a fractional subtour") {
    Instance inst = line_instance(5, 10, {{1, 1, 1, 1, 1}});
    EdgeIndex edges(5);
    std::vector<double> x(edges.size(), 0.0);
    x[edges.id(0, 1)] = 1.5;
    x[edges.id(0, 2)] = 1.5;
    x[edges.id(1, 2)] = 0.5;
    x[edges.id(3, 4)] = 1;
    x[edges.id(4, 5)] = 1;
    x[edges.id(3, 5)] = 1;
    auto sets = separate_rci(edges, x, inst.demand[0], inst.capacity);
    REQUIRE_FALSE(sets.empty());
    CHECK(sets.front() == std::vector<int>{3, 4, 5});
}

TEST_CASE("SRI heuristic") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}, {4, 4, 4, 8}});
    EdgeIndex edges(4);
    RecourseWeights rw = classical_weights(inst);
    SeparationContext ctx = make_context(inst, edges, rw);
    ctx.x = as_double(encode_routes(edges, {Route{{1, 2, 3, 4}}}));
    ctx.theta.assign(5, 0.0);

    ctx.y = {{0, 0, 0, 0.6, 0}, {0, 0, 0, 0.6, 0}};
    auto found = separate_sri_heuristic(ctx);
    REQUIRE_FALSE(found.empty());
    for (const auto &agg : found) {
        CHECK(agg.scenarios == std::vector<int>{0, 1});
        for (int xi : agg.scenarios)
            CHECK(sri_violation(inst, edges, ctx.x, ctx.y, agg.S, xi) > 1e-4);
    }

    ctx.y = {{0, 0, 1, 0, 1}, {0, 0, 1, 0, 1}};
    CHECK(separate_sri_heuristic(ctx).empty());
}

TEST_CASE("SRI heuristic stops after the first productive scenario") {
    // Scenario 1 has the larger total and is scanned first.
    Instance inst = line_instance(3, 10, {{4, 4, 4}, {6, 6, 6}});
    EdgeIndex edges(3);
    RecourseWeights rw = classical_weights(inst);
    SeparationContext ctx = make_context(inst, edges, rw);
    ctx.x = as_double(encode_routes(edges, {Route{{1, 2, 3}}}));
    ctx.theta.assign(4, 0.0);
    ctx.y = {{0, 0, 0, 0}, {0, 0, 0, 0}};
    auto found = separate_sri_heuristic(ctx);
    REQUIRE_FALSE(found.empty());
    for (const auto &agg : found)
        CHECK(std::find(agg.scenarios.begin(), agg.scenarios.end(), 1) != agg.scenarios.end());
}

TEST_CASE("MILP SRI separation agrees with enumeration") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}});
    EdgeIndex edges(4);
    RecourseWeights rw = classical_weights(inst);
    SeparationContext ctx = make_context(inst, edges, rw);
    ctx.x = as_double(encode_routes(edges, {Route{{1, 2, 3, 4}}}));
    ctx.theta.assign(5, 0.0);

    ctx.y = {{0, 0, 0.6, 0, 0.6}};
    CHECK(best_sri_violation(inst, edges, ctx.x, ctx.y, 0) == doctest::Approx(0.4));
    auto S = separate_sri_milp(ctx, 0, 30.0);
    REQUIRE(S);
    CHECK(sri_violation(inst, edges, ctx.x, ctx.y, *S, 0) >= 0.01 - 1e-9);

    ctx.y = {{0, 0, 1, 0, 1}};
    CHECK_FALSE(separate_sri_milp(ctx, 0, 30.0));

    ctx.y = {{0, 0, 0.995, 0, 1}};
    CHECK(best_sri_violation(inst, edges, ctx.x, ctx.y, 0) == doctest::Approx(0.005));
    CHECK_FALSE(separate_sri_milp(ctx, 0, 30.0));

    ctx.y = {{0, 0, 0.98, 0, 1}};
    CHECK(separate_sri_milp(ctx, 0, 30.0));
}

TEST_CASE("partial routes of an integer point") {
    Instance inst = line_instance(3, 10, {{1, 1, 1}});
    EdgeIndex edges(3);
    std::vector<double> x = as_double(encode_routes(edges, {Route{{1, 2}}, Route{{3}}}));
    auto hs = extract_partial_routes(inst, edges, x);
    REQUIRE(hs.size() == 2);
    std::vector<std::vector<std::vector<int>>> got;
    for (const auto &H : hs) {
        auto sets = H.sets();
        if (sets.front() > sets.back())
            std::reverse(sets.begin(), sets.end());
        got.push_back(sets);
    }
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::vector<std::vector<int>>>{{{1}, {2}}, {{3}}});
}

TEST_CASE("partial routes of a fractional point") {
    Instance inst = line_instance(3, 10, {{1, 1, 1}});
    EdgeIndex edges(3);
    // Half of route (1,2,3) plus half of route (1,3,2).
    std::vector<double> x(edges.size(), 0.0);
    x[edges.id(0, 1)] = 1;
    x[edges.id(1, 2)] = 0.5;
    x[edges.id(1, 3)] = 0.5;
    x[edges.id(2, 3)] = 1;
    x[edges.id(0, 2)] = 0.5;
    x[edges.id(0, 3)] = 0.5;
    bool grouped = false;
    for (const auto &H : extract_partial_routes(inst, edges, x))
        grouped = grouped || !H.all_singletons();
    CHECK(grouped);

    std::vector<double> star(edges.size(), 0.0);
    for (int v = 1; v <= 3; v++)
        star[edges.id(0, v)] = 0.5;
    CHECK_NOTHROW(extract_partial_routes(inst, edges, star));
}

TEST_CASE("separation round on integer candidates") {
    Instance inst = line_instance(4, 10, {{6, 6, 2, 1}});
    EdgeIndex edges(4);
    RecourseWeights rw = classical_weights(inst);
    SeparationContext ctx = make_context(inst, edges, rw);
    ctx.first_stage = FirstStage::Subtour;

    SUBCASE("feasible point with its true recourse") {
        std::vector<Route> plan{Route{{1, 3}}, Route{{2, 4}}};
        ctx.x = as_double(encode_routes(edges, plan));
        ctx.theta.assign(5, 0.0);
        CHECK(separation_round(ctx).empty());
    }
    SUBCASE("failing route with zero recourse estimate") {
        ctx.x = as_double(encode_routes(edges, {Route{{1, 2, 3}}, Route{{4}}}));
        ctx.theta.assign(5, 0.0);
        auto cuts = separation_round(ctx);
        REQUIRE_FALSE(cuts.empty());
        bool cuts_off = false;
        for (const auto &c : cuts)
            cuts_off = cuts_off || c.violation(ctx.x, ctx.theta) >= 1e-4;
        CHECK(cuts_off);
    }
    SUBCASE("subtour comes first") {
        std::vector<double> x(edges.size(), 0.0);
        x[edges.id(0, 1)] = 2;
        x[edges.id(2, 3)] = 1;
        x[edges.id(3, 4)] = 1;
        x[edges.id(2, 4)] = 1;
        ctx.x = x;
        ctx.theta.assign(5, 0.0);
        auto cuts = separation_round(ctx);
        REQUIRE_FALSE(cuts.empty());
        // The subtour's SEC comes with its set-level recourse cut only; no
        // route-level cut is attempted.
        bool sec = false;
        for (const auto &c : cuts) {
            INFO(c.serialize(edges));
            sec = sec || c.kind == CutKind::Sec;
            CHECK(c.support == std::vector<int>{2, 3, 4});
            CHECK(c.kind != CutKind::PartialRouteCut);
            CHECK(c.kind != CutKind::PathCut);
            CHECK(c.kind != CutKind::RouteCut);
        }
        CHECK(sec);
    }
}
