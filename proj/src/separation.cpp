#include "vrpsd/separation.hpp"

#include "vrpsd/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <set>

namespace vrpsd {

std::vector<int> scenario_order(const Instance &inst) {
    std::vector<long long> total(inst.scenarios(), 0);
    for (int xi = 0; xi < inst.scenarios(); xi++)
        for (int v = 1; v <= inst.n; v++)
            total[xi] += inst.d(xi, v);
    std::vector<int> order(inst.scenarios());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return total[a] > total[b]; });
    return order;
}

SeparationContext make_context(const Instance &inst, const EdgeIndex &edges, const RecourseWeights &weights) {
    SeparationContext ctx;
    ctx.inst = &inst;
    ctx.edges = &edges;
    ctx.weights = &weights;
    ctx.order = scenario_order(inst);
    return ctx;
}

std::vector<std::vector<int>> separate_rci(const EdgeIndex &edges, const std::vector<double> &x, const VehicleCount &k,
                                           double tol, int max_sets) {
    int n = edges.nodes() - 1;
    std::vector<std::vector<std::pair<int, double>>> adj(n + 1);
    for (int e = 0; e < edges.size(); e++)
        if (!edges.is_depot_edge(e) && x[e] > 1e-6) {
            adj[edges.u(e)].push_back({edges.v(e), x[e]});
            adj[edges.v(e)].push_back({edges.u(e), x[e]});
        }

    std::map<std::vector<int>, double> found;
    auto score = [&](std::vector<int> S) {
        std::sort(S.begin(), S.end());
        double viol = inside_sum(edges, x, std::span<const int>(S)) - double(S.size()) + k(S);
        if (viol > tol)
            found.emplace(S, viol);
        return viol;
    };

    // Components of the support graph.
    std::vector<int> comp(n + 1, -1);
    std::vector<std::vector<int>> comps;
    for (int s = 1; s <= n; s++) {
        if (comp[s] >= 0)
            continue;
        std::vector<int> members{s};
        comp[s] = static_cast<int>(comps.size());
        for (size_t i = 0; i < members.size(); i++)
            for (auto [u, w] : adj[members[i]])
                if (comp[u] < 0) {
                    comp[u] = comp[s];
                    members.push_back(u);
                }
        score(members);
        comps.push_back(std::move(members));
    }

    // Greedy growth from every customer inside its component, then a shrink
    // pass on the best set seen along the way.
    for (int s = 1; s <= n; s++) {
        std::vector<int> S{s};
        std::vector<bool> in(n + 1, false);
        in[s] = true;
        std::vector<double> link(n + 1, 0.0);
        for (auto [u, w] : adj[s])
            link[u] += w;
        double inside = 0.0;
        std::vector<int> best = S;
        double best_viol = score(S);
        while (true) {
            int pick = -1;
            double pick_viol = -1e18;
            for (int u : comps[comp[s]]) {
                if (in[u] || link[u] <= 0)
                    continue;
                std::vector<int> T = S;
                T.push_back(u);
                double viol = inside + link[u] - double(T.size()) + k(T);
                if (viol > pick_viol) {
                    pick_viol = viol;
                    pick = u;
                }
            }
            if (pick < 0)
                break;
            inside += link[pick];
            S.push_back(pick);
            in[pick] = true;
            for (auto [u, w] : adj[pick])
                link[u] += w;
            score(S);
            if (pick_viol > best_viol + 1e-12) {
                best_viol = pick_viol;
                best = S;
            }
        }
        bool improved = true;
        while (improved && best.size() > 1) {
            improved = false;
            for (size_t i = 0; i < best.size(); i++) {
                std::vector<int> T = best;
                T.erase(T.begin() + i);
                double viol = score(T);
                if (viol > best_viol + 1e-12) {
                    best_viol = viol;
                    best = T;
                    improved = true;
                    break;
                }
            }
        }
    }

    std::vector<std::pair<double, std::vector<int>>> ranked;
    for (auto &[S, viol] : found)
        ranked.push_back({viol, S});
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) { return a.first > b.first; });
    std::vector<std::vector<int>> out;
    for (auto &[viol, S] : ranked) {
        if (static_cast<int>(out.size()) >= max_sets)
            break;
        out.push_back(S);
    }
    return out;
}

std::vector<std::vector<int>> separate_rci(const EdgeIndex &edges, const std::vector<double> &x,
                                           std::span<const long long> d, long long C, double tol, int max_sets) {
    return separate_rci(
        edges, x, [&](std::span<const int> S) { return min_vehicles(S, d, C); }, tol, max_sets);
}

std::vector<AggregatedSri> separate_sri_heuristic(const SeparationContext &ctx) {
    const Instance &inst = *ctx.inst;
    std::vector<AggregatedSri> out;
    for (int xi : ctx.order) {
        auto sets = separate_rci(*ctx.edges, ctx.x, inst.demand[xi], inst.capacity, ctx.tol);
        for (const auto &S : sets)
            if (auto agg = aggregate_sri(inst, *ctx.edges, ctx.x, ctx.y, S, ctx.tol))
                out.push_back(std::move(*agg));
        if (!out.empty())
            break;
    }
    return out;
}

std::optional<std::vector<int>> separate_sri_milp(const SeparationContext &ctx, int xi, double time_limit,
                                                  double epsilon, double threshold) {
    const Instance &inst = *ctx.inst;
    const EdgeIndex &edges = *ctx.edges;
    int n = inst.n;
    long long total = 0;
    for (int v = 1; v <= n; v++)
        total += inst.d(xi, v);
    LinearModel m;
    int gamma = m.add_variable({-1.0, double((total + inst.capacity - 1) / inst.capacity), 0.0, true, "gamma"});
    std::vector<int> q(n + 1, -1);
    for (int v = 1; v <= n; v++)
        q[v] = m.add_variable({0.0, 1.0, 0.0, true, "q" + std::to_string(v)});

    Row cap;
    cap.idx.push_back(gamma);
    cap.val.push_back(double(inst.capacity));
    for (int v = 1; v <= n; v++) {
        cap.idx.push_back(q[v]);
        cap.val.push_back(-double(inst.d(xi, v)));
    }
    cap.sense = Sense::Le;
    cap.rhs = -epsilon;
    m.add_row(std::move(cap));

    Row viol;
    viol.idx.push_back(gamma);
    viol.val.push_back(1.0);
    for (int v = 1; v <= n; v++) {
        viol.idx.push_back(q[v]);
        viol.val.push_back(-(ctx.y[xi][v] + 1.0));
    }
    for (int e = 0; e < edges.size(); e++) {
        if (edges.is_depot_edge(e) || ctx.x[e] <= 1e-9)
            continue;
        int a = edges.u(e), b = edges.v(e);
        int h = m.add_variable({0.0, 1.0, 0.0, false, ""});
        m.add_row({{h, q[a]}, {1.0, -1.0}, Sense::Le, 0.0, ""});
        m.add_row({{h, q[b]}, {1.0, -1.0}, Sense::Le, 0.0, ""});
        m.add_row({{h, q[a], q[b]}, {1.0, -1.0, -1.0}, Sense::Ge, -1.0, ""});
        viol.idx.push_back(h);
        viol.val.push_back(ctx.x[e]);
    }
    viol.sense = Sense::Ge;
    viol.rhs = threshold - 1.0;
    m.add_row(std::move(viol));

    LazyOptions opts;
    opts.time_limit = time_limit;
    SolveOutcome res = solve_mip_with_lazy(m, [](const std::vector<double> &) { return std::vector<Row>{}; }, opts);
    if (res.status != SolveStatus::Optimal || !res.has_solution())
        return std::nullopt;
    std::vector<int> S;
    for (int v = 1; v <= n; v++)
        if (res.primal[q[v]] > 0.5)
            S.push_back(v);
    if (S.empty())
        return std::nullopt;
    double g = std::round(res.primal[gamma]);
    assert(long(g) == scenario_vehicles(inst, xi, S) - 1 || sri_violation(inst, edges, ctx.x, ctx.y, S, xi) >= threshold);
    (void)g;
    if (sri_violation(inst, edges, ctx.x, ctx.y, S, xi) < threshold - 1e-6)
        return std::nullopt;
    return S;
}

std::vector<PartialRoute> extract_partial_routes(const Instance &inst, const EdgeIndex &edges,
                                                 const std::vector<double> &x, double high, double low) {
    int n = inst.n;
    std::vector<PartialRoute> out;
    bool integral = std::all_of(x.begin(), x.end(), [](double v) { return std::abs(v - std::round(v)) < 1e-6; });
    if (integral) {
        std::vector<int> xi(x.size());
        for (size_t e = 0; e < x.size(); e++)
            xi[e] = static_cast<int>(std::lround(x[e]));
        try {
            RoutingPlan plan = routes_of(edges, xi);
            for (const auto &r : plan.routes)
                out.push_back(PartialRoute::of_route(r.customers));
            return out;
        } catch (const RoutingError &) {
        }
    }

    std::set<std::vector<std::vector<int>>> seen;
    auto keep = [&](std::vector<std::vector<int>> sets) {
        if (sets.empty())
            return;
        bool single = std::all_of(sets.begin(), sets.end(), [](const auto &s) { return s.size() == 1; });
        if (single && sets.front()[0] > sets.back()[0])
            std::reverse(sets.begin(), sets.end());
        for (auto &s : sets)
            std::sort(s.begin(), s.end());
        if (!seen.insert(sets).second)
            return;
        try {
            out.emplace_back(sets);
        } catch (const std::invalid_argument &) {
        }
    };

    for (int v = 1; v <= n; v++) {
        if (x[edges.id(0, v)] < high)
            continue;
        std::vector<int> path{v};
        std::vector<bool> on(n + 1, false);
        on[v] = true;
        int cur = v;
        if (x[edges.id(0, v)] < 2 * high) {
            while (true) {
                int nxt = -1;
                double best = high;
                for (int u = 1; u <= n; u++)
                    if (!on[u] && x[edges.id(cur, u)] >= best) {
                        best = x[edges.id(cur, u)];
                        nxt = u;
                    }
                if (nxt < 0)
                    break;
                path.push_back(nxt);
                on[nxt] = true;
                cur = nxt;
            }
        }
        std::vector<std::vector<int>> sets;
        for (int u : path)
            sets.push_back({u});
        keep(sets);

        std::vector<int> cluster;
        std::vector<bool> in(n + 1, false);
        std::vector<int> frontier{cur};
        while (!frontier.empty()) {
            int a = frontier.back();
            frontier.pop_back();
            for (int u = 1; u <= n; u++) {
                if (on[u] || in[u])
                    continue;
                double val = x[edges.id(a, u)];
                if (val > low && val < high) {
                    in[u] = true;
                    cluster.push_back(u);
                    frontier.push_back(u);
                }
            }
        }
        if (!cluster.empty()) {
            sets.push_back(cluster);
            keep(sets);
        }
    }
    return out;
}

namespace {

bool add_set_cut_or_sri(const SeparationContext &ctx, const std::vector<int> &S, int kprime, std::vector<Cut> &out) {
    const Instance &inst = *ctx.inst;
    const EdgeIndex &edges = *ctx.edges;
    if (ctx.use_sri) {
        for (int v : S)
            if (ctx.weights->w[v] == 0)
                return false;
        double inside = inside_sum(edges, ctx.x, std::span<const int>(S));
        int kbar = ctx.first_stage == FirstStage::Cvrp ? expected_vehicles(inst, S) : 0;
        std::vector<int> scen;
        for (int xi = 0; xi < inst.scenarios(); xi++) {
            int k = scenario_vehicles(inst, xi, S);
            if (ctx.first_stage == FirstStage::Cvrp && k <= kbar)
                continue;
            if (k + inside - double(S.size()) > 0 && inst.prob[xi] > 0)
                scen.push_back(xi);
        }
        if (scen.empty())
            return false;
        Cut c = projected_aggregated_sri(inst, edges, S, scen, *ctx.weights).to_cut(CutKind::ProjectedSri, S);
        if (c.violation(ctx.x, ctx.theta) >= ctx.tol) {
            out.push_back(std::move(c));
            return true;
        }
        return false;
    }
    SetCutBundle bundle;
    try {
        bundle = set_cut_bundle(inst, edges, S, kprime, *ctx.weights);
    } catch (const InfeasibleBound &) {
        return false;
    }
    if (bundle.L > 0 && bundle.ils.violation(ctx.x, ctx.theta) >= ctx.tol) {
        out.push_back(std::move(bundle.ils));
        return true;
    }
    return false;
}

bool add_partial_route_cut_or_sri(const SeparationContext &ctx, const PartialRoute &H, std::vector<Cut> &out) {
    PartialRouteBundle bundle = partial_route_bundle(*ctx.inst, *ctx.edges, H, *ctx.weights);
    if (bundle.L == 0)
        return false;
    if (ctx.use_sri) {
        if (!bundle.dominating)
            return false;
        Cut c = bundle.dominating->to_cut(CutKind::ProjectedSri, H.customers());
        double v = c.violation(ctx.x, ctx.theta);
        assert(v >= -1e-7 || bundle.ils.violation(ctx.x, ctx.theta) <= 1e-7);
        if (v >= ctx.tol) {
            out.push_back(std::move(c));
            return true;
        }
        return false;
    }
    if (bundle.ils.violation(ctx.x, ctx.theta) >= ctx.tol) {
        out.push_back(std::move(bundle.ils));
        return true;
    }
    return false;
}

} // namespace

std::vector<Cut> separation_round(const SeparationContext &ctx) {
    const Instance &inst = *ctx.inst;
    const EdgeIndex &edges = *ctx.edges;
    bool cvrp = ctx.first_stage == FirstStage::Cvrp;
    std::vector<Cut> out;

    auto kprime = [&](std::span<const int> S) { return cvrp ? std::max(1, expected_vehicles(inst, S)) : 1; };
    auto sets = separate_rci(edges, ctx.x, kprime, ctx.tol);
    for (const auto &S : sets) {
        int kp = kprime(S);
        Cut c = capacity_cut(edges, S, kp);
        if (c.violation(ctx.x, ctx.theta) >= ctx.tol)
            out.push_back(std::move(c));
        add_set_cut_or_sri(ctx, S, kp, out);
    }
    if (!sets.empty())
        return out;

    for (const auto &H : extract_partial_routes(inst, edges, ctx.x)) {
        std::vector<int> S = H.customers();
        if (add_set_cut_or_sri(ctx, S, kprime(S), out))
            continue;
        if (add_partial_route_cut_or_sri(ctx, H, out))
            continue;
        if (ctx.recourse == RecourseKind::Classical) {
            RecourseWeights cw = classical_weights(inst, 1);
            PartialRouteBundle bundle = partial_route_bundle(inst, edges, H, cw);
            if (bundle.L == 0)
                continue;
            Cut c = ils_cut(CutKind::ClassicalBound, S, bundle.L, wof_form(edges, H));
            if (c.violation(ctx.x, ctx.theta) >= ctx.tol)
                out.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace vrpsd
