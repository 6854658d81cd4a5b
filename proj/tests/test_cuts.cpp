#include "support.hpp"

#include "vrpsd/cuts.hpp"
#include "vrpsd/lp.hpp"
#include "vrpsd/recourse.hpp"

#include <doctest.h>

#include <algorithm>

using namespace vrpsd;
using vrpsd::test::line_instance;

namespace {

std::vector<double> route_x(const EdgeIndex &edges, const std::vector<Route> &routes) {
    return vrpsd::test::as_double(encode_routes(edges, routes));
}

Rational at(const std::map<int, Rational> &m, int k) {
    auto it = m.find(k);
    return it == m.end() ? Rational(0) : it->second;
}

} // namespace

TEST_CASE("SRI violation") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}});
    EdgeIndex edges(4);
    std::vector<double> x = route_x(edges, {Route{{1, 2, 3, 4}}});
    std::vector<std::vector<double>> y{{0, 0, 0.6, 0, 0}};
    std::vector<int> S1{1, 2, 3};
    CHECK(sri_violation(inst, edges, x, y, S1, 0) == doctest::Approx(0.4));
    CHECK_THROWS(sri_violation(inst, edges, x, y, std::vector<int>{}, 0));

    // An admissible integer action satisfies every SRI.
    std::vector<std::vector<double>> ok{{0, 0, 1, 0, 1}};
    for (int mask = 1; mask < 16; mask++) {
        std::vector<int> S;
        for (int v = 1; v <= 4; v++)
            if ((mask >> (v - 1)) & 1)
                S.push_back(v);
        CHECK(sri_violation(inst, edges, x, ok, S, 0) <= 1e-12);
    }
}

TEST_CASE("SRI on all customers with one route per vehicle") {
    Instance inst = line_instance(4, 10, {{5, 5, 5, 5}});
    EdgeIndex edges(4);
    std::vector<double> x = route_x(edges, {Route{{1, 2}}, Route{{3, 4}}});
    std::vector<std::vector<double>> y(1, std::vector<double>(5, 0.0));
    std::vector<int> all{1, 2, 3, 4};
    CHECK(sri_violation(inst, edges, x, y, all, 0) == doctest::Approx(0.0));
}

TEST_CASE("aggregated SRI sums scenario violations") {
    Instance inst = line_instance(3, 10, {{4, 4, 4}, {5, 5, 5}, {1, 1, 1}});
    EdgeIndex edges(3);
    std::vector<double> x = route_x(edges, {Route{{1, 2, 3}}});
    std::vector<std::vector<double>> y{{0, 0.3, 0.3, 0}, {0, 0.4, 0.4, 0}, {0, 0, 0, 0}};
    std::vector<int> S{1, 2, 3};
    auto agg = aggregate_sri(inst, edges, x, y, S);
    REQUIRE(agg);
    CHECK(agg->scenarios == std::vector<int>{0, 1});
    Cut c = aggregated_sri_cut(inst, edges, *agg);
    std::vector<double> th(4, 0.0);
    CHECK(c.violation(x, th, &y) == doctest::Approx(0.6));

    std::vector<std::vector<double>> one{{0, 0.3, 0.3, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}};
    agg = aggregate_sri(inst, edges, x, one, S);
    REQUIRE(agg);
    CHECK(agg->scenarios == std::vector<int>{0});

    std::vector<std::vector<double>> none{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}};
    CHECK_FALSE(aggregate_sri(inst, edges, x, none, S));
}

TEST_CASE("projection of a single inequality") {
    Rational p(1, 3);
    Instance inst = line_instance(3, 10, {{10, 10, 10}, {0, 0, 0}, {0, 0, 0}});
    RecourseWeights rw{{0, 2, 3, 4}, {0, 1, 1, 1}};
    YInequality in;
    in.a.resize(3);
    in.a[0] = {{1, 2 * p}, {2, 3 * p}, {3, 3 * p}};
    in.constant = 5 * p;
    auto out = project_inequality(in, rw, inst.prob);
    REQUIRE(out);
    CHECK(out->phi == std::map<int, Rational>{{1, 1}, {2, 1}, {3, ratio(3, 4)}});
    CHECK(out->constant == 5 * p);

    YInequality zero;
    zero.a.resize(3);
    out = project_inequality(zero, rw, inst.prob);
    REQUIRE(out);
    CHECK(out->phi.empty());
    CHECK(out->x_coeffs.empty());
    CHECK(out->constant == 0);

    RecourseWeights zw{{0, 0, 3, 4}, {0, 1, 1, 1}};
    CHECK_FALSE(project_inequality(in, zw, inst.prob));
    CHECK_THROWS(project_inequality(in, rw, std::vector<Rational>{Rational(-1), 1, 1}));
}

TEST_CASE("set cut bundle reproduces the golden values") {
    Instance inst = line_instance(3, 10, {{10, 10, 10}, {0, 0, 0}});
    EdgeIndex edges(3);
    RecourseWeights rw{{0, 2, 3, 4}, {0, 1, 1, 1}};
    std::vector<int> S{1, 2, 3};
    SetCutBundle b = set_cut_bundle(inst, edges, S, 1, rw);
    Rational p(1, 2);
    CHECK(b.L_xi[0] == 5);
    CHECK(b.L_xi[1] == 0);
    CHECK(b.L == 5 * p);
    CHECK(b.alpha[0] == 3);
    CHECK(b.beta[0] == std::map<int, Rational>{{1, -1}});
    CHECK(b.alpha[1] == 0);
    CHECK(b.beta[1].empty());
    REQUIRE(b.dominating);
    CHECK(b.dominating->phi == std::map<int, Rational>{{1, 1}, {2, 1}, {3, ratio(3, 4)}});
    CHECK(b.dominating->constant == -p);
    for (auto [u, v] : {std::pair{1, 2}, {1, 3}, {2, 3}})
        CHECK(at(b.dominating->x_coeffs, edges.id(u, v)) == 3 * p);
    // Dual objective equals the greedy bound.
    CHECK(b.alpha[0] * (3 - 1) + at(b.beta[0], 1) * rw.b[1] == b.L_xi[0]);
}

TEST_CASE("set cut bundle vacuous when no extra vehicle is needed") {
    Instance inst = line_instance(3, 10, {{2, 2, 2}});
    EdgeIndex edges(3);
    RecourseWeights rw = classical_weights(inst);
    std::vector<int> S{1, 2, 3};
    SetCutBundle b = set_cut_bundle(inst, edges, S, 1, rw);
    CHECK(b.L == 0);
    CHECK(b.alpha[0] == 0);
    CHECK(b.beta[0].empty());
}

TEST_CASE("greedy set bound matches its LP") {
    Instance inst = line_instance(3, 10, {{10, 10, 10}});
    EdgeIndex edges(3);
    RecourseWeights rw{{0, 1, 5, 9}, {0, 2, 1, 1}};
    std::vector<int> S{1, 2, 3};
    SetCutBundle b = set_cut_bundle(inst, edges, S, 0, rw);
    CHECK(b.L_xi[0] == 7);

    LinearModel lp;
    for (int v = 1; v <= 3; v++)
        lp.add_variable({0.0, double(rw.b[v]), rw.w[v].get_d(), false, ""});
    lp.add_row({{0, 1, 2}, {1, 1, 1}, Sense::Ge, 3.0, "cover"});
    SolveOutcome out = solve_lp(lp);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(7.0));

    RecourseWeights tight{{0, 1, 5, 9}, {0, 1, 0, 1}};
    CHECK_THROWS_AS(set_cut_bundle(inst, edges, S, 0, tight), InfeasibleBound);
}

TEST_CASE("partial route bound on all singletons equals the route recourse") {
    Instance inst = line_instance(4, 10, {{4, 4, 4, 8}});
    EdgeIndex edges(4);
    RecourseWeights rw{{0, 2, 2, 6, 2}, {0, 1, 1, 1, 1}};
    PartialRouteBundle b = partial_route_bundle(inst, edges, PartialRoute::of_route({1, 2, 3, 4}), rw);
    CHECK(b.L == 4);
    CHECK(b.L == scenario_optimal_recourse(inst, Route{{1, 2, 3, 4}}, rw).value);
}

TEST_CASE("partial route bound with a single binding piece") {
    Instance inst = line_instance(4, 10, {{3, 3, 3, 3}});
    EdgeIndex edges(4);
    RecourseWeights rw{{0, 5, 3, 7, 4}, {0, 1, 1, 1, 1}};
    PartialRouteBundle b = partial_route_bundle(inst, edges, PartialRoute(std::vector<std::vector<int>>{{1}, {2, 3}, {4}}), rw);
    CHECK(b.L == 3);

    Instance light = line_instance(4, 10, {{1, 2, 3, 4}});
    b = partial_route_bundle(light, edges, PartialRoute(std::vector<std::vector<int>>{{1}, {2, 3}, {4}}), rw);
    CHECK(b.L == 0);
    for (const auto &pieces : b.alpha)
        for (const auto &pd : pieces)
            CHECK(pd.alpha == 0);
}

TEST_CASE("W_OF activation") {
    EdgeIndex edges(4);
    PartialRoute H({{1}, {2, 3}, {4}});
    std::vector<double> x = route_x(edges, {Route{{1, 3, 2, 4}}});
    CHECK(activation_wof(edges, x, H) == doctest::Approx(1.0));
    x[edges.id(2, 4)] = 0;
    x[edges.id(0, 2)] = 1;
    x[edges.id(0, 4)] = 2;
    CHECK(activation_wof(edges, x, H) <= 0.0);

    EdgeIndex one(1);
    std::vector<double> x1{2.0};
    CHECK(activation_wof(one, x1, PartialRoute(std::vector<std::vector<int>>{{1}})) == doctest::Approx(1.0));
}

TEST_CASE("W_DL activation") {
    EdgeIndex edges(3);
    std::vector<int> S{1, 2, 3};
    std::vector<double> x(edges.size(), 0.0);
    x[edges.id(1, 2)] = 1;
    x[edges.id(2, 3)] = 1;
    CHECK(activation_wdl(edges, x, S, 1) == doctest::Approx(1.0));
    x[edges.id(2, 3)] = 0;
    CHECK(activation_wdl(edges, x, S, 1) == doctest::Approx(0.0));
    x[edges.id(2, 3)] = 1.3;
    CHECK(activation_wdl(edges, x, S, 1) == doctest::Approx(1.3));
}

TEST_CASE("route exactness form") {
    EdgeIndex edges(4);
    std::vector<int> seq{1, 2, 3};
    std::vector<int> x = encode_routes(edges, {Route{{1, 2, 3}}, Route{{4}}});
    CHECK(route_exact_form(edges, seq).eval(vrpsd::test::as_double(x)) == doctest::Approx(1.0));
    // The same customers visited as part of a longer route do not activate.
    x = encode_routes(edges, {Route{{1, 2, 3, 4}}});
    CHECK(route_exact_form(edges, seq).eval(vrpsd::test::as_double(x)) <= 0.0);
    x = encode_routes(edges, {Route{{1, 3, 2}}, Route{{4}}});
    CHECK(route_exact_form(edges, seq).eval(vrpsd::test::as_double(x)) <= 0.0);
}

TEST_CASE("projected aggregated SRI") {
    const int N = 3;
    Instance inst = line_instance(3, 10, {{5, 5, 5}, {5, 5, 5}, {1, 1, 1}});
    inst.cost = {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
    EdgeIndex edges(3);
    RecourseWeights rw = classical_weights(inst);
    std::vector<int> S{1, 2, 3}, xis{0, 1};
    ProjectedSriCut c = projected_aggregated_sri(inst, edges, S, xis, rw);
    for (int v : S)
        CHECK(c.phi.at(v) == ratio(N, 2));
    CHECK(c.constant == -2);
    for (auto [u, v] : {std::pair{1, 2}, {1, 3}, {2, 3}})
        CHECK(at(c.x_coeffs, edges.id(u, v)) == 2);
    CHECK_THROWS(projected_aggregated_sri(inst, edges, S, std::vector<int>{}, rw));

    // A single scenario agrees with the projection of that SRI.
    std::vector<int> just{0};
    ProjectedSriCut a = projected_aggregated_sri(inst, edges, S, just, rw);
    SriMultipliers m;
    m.alpha.push_back({S, {Rational(1), Rational(0), Rational(0)}});
    auto b = project_inequality(combine_sris(inst, edges, m, rw), rw, inst.prob);
    REQUIRE(b);
    CHECK(a.phi == b->phi);
    CHECK(a.x_coeffs == b->x_coeffs);
    CHECK(a.constant == b->constant);
}

TEST_CASE("cut serialization") {
    EdgeIndex edges(2);
    std::vector<int> S{1, 2};
    std::string line = capacity_cut(edges, S, 2).serialize(edges);
    CHECK(line.rfind("RCI;", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ';') == 3);
}
