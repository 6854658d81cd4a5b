#include "vrpsd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

namespace vrpsd {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> x_part(const std::vector<double> &primal, const VarLayout &layout) {
    return std::vector<double>(primal.begin(), primal.begin() + layout.edges);
}

std::vector<double> theta_part(const std::vector<double> &primal, const VarLayout &layout) {
    std::vector<double> th(layout.n + 1, 0.0);
    for (int v = 1; v <= layout.n; v++)
        th[v] = primal[layout.theta(v)];
    return th;
}

std::vector<std::vector<double>> y_part(const std::vector<double> &primal, const VarLayout &layout) {
    std::vector<std::vector<double>> y(layout.scenarios, std::vector<double>(layout.n + 1, 0.0));
    for (int xi = 0; xi < layout.scenarios; xi++)
        for (int v = 1; v <= layout.n; v++)
            y[xi][v] = primal[layout.y(xi, v)];
    return y;
}

int vehicle_bound(const Instance &inst, FirstStage fs, std::span<const int> S) {
    return fs == FirstStage::Cvrp ? std::max(1, expected_vehicles(inst, S)) : 1;
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

double gap_pct(double value, double bound) {
    if (!std::isfinite(value) || !std::isfinite(bound))
        return kInf;
    double g = 100.0 * (value - bound) / std::max(std::abs(value), 1e-9);
    return std::abs(g) < 1e-9 ? 0.0 : g;
}

} // namespace

void CutCounts::add(CutKind kind) {
    switch (kind) {
    case CutKind::Sec:
    case CutKind::Rci:
        rci++;
        break;
    case CutKind::AggregatedSri:
        sri++;
        break;
    case CutKind::ProjectedSri:
        proj_sri++;
        break;
    case CutKind::SetCut:
        set++;
        break;
    default:
        partial++;
        break;
    }
}

Row to_row(const Cut &cut, const VarLayout &layout) {
    Row r;
    for (const auto &[e, c] : cut.x) {
        r.idx.push_back(layout.x(e));
        r.val.push_back(c.get_d());
    }
    for (const auto &[v, c] : cut.theta) {
        r.idx.push_back(layout.theta(v));
        r.val.push_back(c.get_d());
    }
    for (const auto &[key, c] : cut.y) {
        r.idx.push_back(layout.y(key.first, key.second));
        r.val.push_back(c.get_d());
    }
    r.sense = cut.sense;
    r.rhs = cut.rhs.get_d();
    r.tag = kind_name(cut.kind);
    return r;
}

LinearModel base_model(const Instance &inst, const EdgeIndex &edges, const VarLayout &layout, FirstStage fs,
                       bool integer_x) {
    LinearModel m;
    for (int e = 0; e < edges.size(); e++) {
        int u = edges.u(e), v = edges.v(e);
        m.add_variable({0.0, edges.is_depot_edge(e) ? 2.0 : 1.0, double(inst.c(u, v)), integer_x,
                        "x_" + std::to_string(u) + "_" + std::to_string(v)});
    }
    for (int v = 1; v <= inst.n; v++)
        m.add_variable({0.0, kInf, 1.0, false, "theta_" + std::to_string(v)});
    (void)layout;

    for (int v = 0; v <= inst.n; v++) {
        Row r;
        for (int u = 0; u <= inst.n; u++)
            if (u != v) {
                r.idx.push_back(edges.id(u, v));
                r.val.push_back(1.0);
            }
        if (v > 0) {
            r.sense = Sense::Eq;
            r.rhs = 2.0;
        } else if (fs == FirstStage::Cvrp) {
            r.sense = Sense::Eq;
            r.rhs = 2.0 * inst.fleet_size.value();
        } else {
            r.sense = Sense::Ge;
            r.rhs = 2.0;
        }
        r.tag = "deg_" + std::to_string(v);
        m.add_row(std::move(r));
    }
    return m;
}

Phase1Result solve_root_phase1(const Instance &inst, const SolverConfig &cfg) {
    auto t0 = Clock::now();
    RecourseWeights weights = make_weights(inst, cfg.weights, cfg.b);
    EdgeIndex edges(inst.n);
    VarLayout layout{edges.size(), inst.n, inst.scenarios()};
    LinearModel m = base_model(inst, edges, layout, cfg.first_stage, false);
    for (int xi = 0; xi < inst.scenarios(); xi++)
        for (int v = 1; v <= inst.n; v++)
            m.add_variable({0.0, double(weights.b[v]), 0.0, false,
                            "y_" + std::to_string(xi) + "_" + std::to_string(v)});
    for (int v = 1; v <= inst.n; v++) {
        Row r;
        r.idx.push_back(layout.theta(v));
        r.val.push_back(1.0);
        for (int xi = 0; xi < inst.scenarios(); xi++) {
            Rational coef = inst.prob[xi] * weights.w[v];
            if (coef == 0)
                continue;
            r.idx.push_back(layout.y(xi, v));
            r.val.push_back(-coef.get_d());
        }
        r.sense = Sense::Ge;
        r.rhs = 0.0;
        r.tag = "link_" + std::to_string(v);
        m.add_row(std::move(r));
    }

    SeparationContext ctx = make_context(inst, edges, weights);
    ctx.first_stage = cfg.first_stage;
    ctx.recourse = cfg.recourse;
    ctx.use_sri = true;

    Phase1Result out;
    std::vector<int> sri_rows;
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    auto kprime = [&](std::span<const int> S) { return vehicle_bound(inst, cfg.first_stage, S); };
    SolveOutcome last;
    for (;;) {
        double left = cfg.root_phase1_limit_s - since(t0);
        LpOptions lo;
        if (out.lp_solves > 0)
            lo.time_limit = std::max(left, 1.0);
        SolveOutcome cur = solve_lp(m, lo);
        out.lp_solves++;
        if (cur.status != SolveStatus::Optimal) {
            if (out.lp_solves == 1) {
                out.z_tilde = cur.status == SolveStatus::Infeasible ? kInf : -kInf;
                out.bundle.z_tilde = out.z_tilde;
                out.seconds = since(t0);
                return out;
            }
            break;
        }
        last = std::move(cur);
        if (since(t0) >= cfg.root_phase1_limit_s)
            break;

        ctx.x = x_part(last.primal, layout);
        ctx.theta = theta_part(last.primal, layout);
        ctx.y = y_part(last.primal, layout);
        int added = 0;
        for (const auto &S : separate_rci(edges, ctx.x, kprime, ctx.tol)) {
            Cut c = capacity_cut(edges, S, kprime(S));
            if (c.violation(ctx.x, ctx.theta) < ctx.tol)
                continue;
            m.add_row(to_row(c, layout));
            out.x_rows.push_back(std::move(c));
            added++;
        }
        std::vector<AggregatedSri> aggs = separate_sri_heuristic(ctx);
        if (aggs.empty() && added == 0)
            for (int xi : ctx.order) {
                double budget = std::min(cfg.milp_separation_limit_s, cfg.root_phase1_limit_s - since(t0));
                if (budget <= 0)
                    break;
                if (auto S = separate_sri_milp(ctx, xi, budget))
                    if (auto agg = aggregate_sri(inst, edges, ctx.x, ctx.y, *S, ctx.tol)) {
                        aggs.push_back(std::move(*agg));
                        break;
                    }
            }
        for (auto &agg : aggs) {
            agg.S = sorted(agg.S);
            if (!seen.insert({agg.S, agg.scenarios}).second)
                continue;
            Cut c = aggregated_sri_cut(inst, edges, agg);
            if (c.violation(ctx.x, ctx.theta, &ctx.y) < 1e-6)
                continue;
            sri_rows.push_back(m.add_row(to_row(c, layout)));
            out.sri_pool.push_back(std::move(agg));
            added++;
        }
        if (added == 0) {
            out.bundle.converged = true;
            break;
        }
    }

    out.z_tilde = last.objective;
    DualBundle &bundle = out.bundle;
    bundle.z_tilde = last.objective;
    for (size_t i = 0; i < sri_rows.size(); i++) {
        double d = last.row_duals[sri_rows[i]];
        if (d > 1e-9)
            bundle.iota.push_back({out.sri_pool[i], from_double(d)});
    }
    bundle.beta.assign(inst.scenarios(), {});
    for (int xi = 0; xi < inst.scenarios(); xi++)
        for (int v = 1; v <= inst.n; v++) {
            double r = last.col_duals[layout.y(xi, v)];
            if (r < -1e-9)
                bundle.beta[xi][v] = from_double(r);
        }
    out.seconds = since(t0);
    return out;
}

RootRelaxation build_root_relaxation(const Instance &inst, const SolverConfig &cfg, const Phase1Result &phase1) {
    RecourseWeights weights = make_weights(inst, cfg.weights, cfg.b);
    EdgeIndex edges(inst.n);
    VarLayout layout{edges.size(), inst.n, 0};
    RootRelaxation root{base_model(inst, edges, layout, cfg.first_stage, false), 0.0, false, {}};
    for (const auto &c : phase1.x_rows) {
        root.model.add_row(to_row(c, layout));
        root.cuts.push_back(c);
    }
    for (const auto &[agg, iota] : phase1.bundle.iota) {
        bool usable = std::all_of(agg.S.begin(), agg.S.end(), [&](int v) { return weights.w[v] > 0; }) &&
                      std::any_of(agg.scenarios.begin(), agg.scenarios.end(),
                                  [&](int xi) { return inst.prob[xi] > 0; });
        if (!usable)
            continue;
        Cut c = projected_aggregated_sri(inst, edges, agg.S, agg.scenarios, weights).to_cut(CutKind::ProjectedSri,
                                                                                           agg.S);
        root.model.add_row(to_row(c, layout));
        root.cuts.push_back(std::move(c));
    }
    SolveOutcome res = solve_lp(root.model);
    root.value = res.status == SolveStatus::Optimal ? res.objective : kInf;
    if (res.status != SolveStatus::Optimal || root.value >= phase1.z_tilde - 1e-6 || phase1.bundle.iota.empty())
        return root;

    SriMultipliers mult;
    for (const auto &[agg, iota] : phase1.bundle.iota) {
        std::vector<Rational> alpha(inst.scenarios(), Rational(0));
        for (int xi : agg.scenarios)
            alpha[xi] = iota;
        mult.alpha.push_back({agg.S, alpha});
    }
    mult.beta = phase1.bundle.beta;
    auto proj = project_inequality(combine_sris(inst, edges, mult, weights), weights, inst.prob);
    if (!proj)
        return root;
    std::vector<int> support;
    for (const auto &[v, phi] : proj->phi)
        support.push_back(v);
    Cut c = proj->to_cut(CutKind::ProjectedSri, support);
    root.model.add_row(to_row(c, layout));
    root.cuts.push_back(std::move(c));
    root.single_cut_added = true;
    res = solve_lp(root.model);
    if (res.status == SolveStatus::Optimal)
        root.value = res.objective;
    return root;
}

double lagrangian_bound(const Instance &inst, const SolverConfig &cfg, const std::vector<Cut> &x_rows,
                        const DualBundle &bundle) {
    RecourseWeights weights = make_weights(inst, cfg.weights, cfg.b);
    EdgeIndex edges(inst.n);
    VarLayout layout{edges.size(), inst.n, 0};

    // sigma_y: the y-coefficients p w - sum alpha - beta must be nonnegative.
    std::vector<std::vector<Rational>> ycoef(inst.scenarios(), std::vector<Rational>(inst.n + 1));
    for (int xi = 0; xi < inst.scenarios(); xi++)
        for (int v = 1; v <= inst.n; v++)
            ycoef[xi][v] = inst.prob[xi] * weights.w[v];
    Rational nu = 0;
    std::vector<double> extra(edges.size(), 0.0);
    for (const auto &[agg, iota] : bundle.iota)
        for (int xi : agg.scenarios) {
            for (int v : agg.S)
                ycoef[xi][v] -= iota;
            nu += iota * Rational(scenario_vehicles(inst, xi, agg.S) - long(agg.S.size()));
            for (size_t i = 0; i < agg.S.size(); i++)
                for (size_t j = i + 1; j < agg.S.size(); j++)
                    extra[edges.id(agg.S[i], agg.S[j])] += iota.get_d();
        }
    for (int xi = 0; xi < int(bundle.beta.size()); xi++)
        for (const auto &[v, be] : bundle.beta[xi]) {
            ycoef[xi][v] -= be;
            nu += be * Rational(weights.b[v]);
        }
    for (const auto &row : ycoef)
        for (int v = 1; v <= inst.n; v++)
            if (row[v].get_d() < -1e-9)
                return -kInf;

    LinearModel m = base_model(inst, edges, layout, cfg.first_stage, false);
    for (int e = 0; e < edges.size(); e++)
        m.variables()[e].obj += extra[e];
    for (const auto &c : x_rows)
        m.add_row(to_row(c, layout));
    SolveOutcome res = solve_lp(m);
    if (res.status != SolveStatus::Optimal)
        return res.status == SolveStatus::Infeasible ? kInf : -kInf;
    return res.objective + nu.get_d();
}

namespace {

Rational cached_recourse(const Instance &inst, const SolverConfig &cfg, const RecourseWeights &weights,
                         const Route &r, RecourseCache &cache) {
    auto it = cache.find(r.customers);
    if (it == cache.end())
        it = cache.emplace(r.customers, route_recourse(inst, r, cfg.recourse, weights).total).first;
    return it->second;
}

} // namespace

CandidateResult examine_candidate(SeparationContext &ctx, const SolverConfig &cfg, const std::vector<int> &x,
                                  const std::vector<double> &theta, RecourseCache &cache) {
    const Instance &inst = *ctx.inst;
    const EdgeIndex &edges = *ctx.edges;
    bool cvrp = cfg.first_stage == FirstStage::Cvrp;
    ctx.x.assign(x.begin(), x.end());
    ctx.theta = theta;
    CandidateResult out;
    out.cuts = separation_round(ctx);
    auto covered = [&](const std::vector<int> &S) {
        std::vector<int> key = sorted(S);
        return std::any_of(out.cuts.begin(), out.cuts.end(),
                           [&](const Cut &c) { return sorted(c.support) == key; });
    };

    RoutingPlan plan;
    try {
        plan = routes_of(edges, x);
    } catch (const RoutingError &err) {
        if (err.kind == RoutingError::Kind::DepotFreeCycle) {
            if (!covered(err.cycle))
                out.cuts.push_back(
                    capacity_cut(edges, err.cycle, vehicle_bound(inst, cfg.first_stage, err.cycle)));
        } else if (out.cuts.empty()) {
            throw std::logic_error(std::string("integer candidate is not a routing plan: ") + err.what());
        }
        return out;
    }

    out.is_plan = true;
    out.feasible = true;
    out.routes = plan.routes;
    out.cost = 0;
    for (const auto &r : plan.routes) {
        int k = expected_vehicles(inst, r.customers);
        if (cvrp && k > 1) {
            out.feasible = false;
            if (!covered(r.customers))
                out.cuts.push_back(capacity_cut(edges, r.customers, k));
            continue;
        }
        Rational q = cached_recourse(inst, cfg, *ctx.weights, r, cache);
        out.cost += to_rational(route_cost(inst, r.sequence())) + q;
        double th = 0.0;
        for (int v : r.customers)
            th += theta[v];
        if (r.size() == 1 || th >= q.get_d() - 1e-7 || covered(r.customers))
            continue;
        if (cfg.recourse == RecourseKind::Classical)
            out.cuts.push_back(ils_cut(CutKind::RouteCut, r.customers, q, route_exact_form(edges, r.sequence())));
        else
            out.cuts.push_back(
                ils_cut(CutKind::PathCut, r.customers, q, wof_form(edges, PartialRoute::of_route(r.sequence()))));
    }
    return out;
}

SolveReport solve(const Instance &original, const SolverConfig &cfg, const SolveHooks &hooks) {
    auto t0 = Clock::now();
    cfg.validate();
    original.validate_for(cfg.first_stage);
    Preprocessed pre = preprocess_large_demands(original);
    const Instance &inst = pre.inst;
    const double base = pre.base_cost.get_d();
    RecourseWeights weights = make_weights(inst, cfg.weights, cfg.b);
    EdgeIndex edges(inst.n);
    VarLayout layout{edges.size(), inst.n, 0};
    bool use_sri = cfg.mode != Mode::Ils;

    SolveReport report;
    auto emit = [&](const Cut &c) {
        report.counts.add(c.kind);
        if (hooks.on_cut)
            hooks.on_cut(c, edges);
    };
    auto finish = [&](const std::string &status) {
        report.status = status;
        report.time_s = since(t0);
        report.gap_pct = report.has_value ? gap_pct(report.value, report.bound) : kInf;
        report.root_gap_pct = report.has_value ? gap_pct(report.value, report.root_bound) : kInf;
        return report;
    };

    LinearModel model;
    if (use_sri) {
        Phase1Result ph = solve_root_phase1(inst, cfg);
        report.phase1_time_s = ph.seconds;
        report.z_tilde = ph.z_tilde + base;
        for (size_t i = 0; i < ph.sri_pool.size(); i++)
            report.counts.add(CutKind::AggregatedSri);
        if (ph.z_tilde == kInf) {
            report.bound = kInf;
            return finish("infeasible");
        }
        RootRelaxation root = build_root_relaxation(inst, cfg, ph);
        for (const auto &c : root.cuts)
            emit(c);
        model = std::move(root.model);
    } else {
        model = base_model(inst, edges, layout, cfg.first_stage, false);
    }

    SeparationContext ctx = make_context(inst, edges, weights);
    ctx.first_stage = cfg.first_stage;
    ctx.recourse = cfg.recourse;
    ctx.use_sri = use_sri;

    SolveOutcome lp = solve_lp(model);
    if (lp.status == SolveStatus::Infeasible) {
        report.bound = kInf;
        return finish("infeasible");
    }
    if (lp.status == SolveStatus::Optimal) {
        report.root_bound = lp.objective;
        for (int round = 0; round < cfg.root_cut_rounds && since(t0) < cfg.time_limit_s; round++) {
            ctx.x = x_part(lp.primal, layout);
            ctx.theta = theta_part(lp.primal, layout);
            std::vector<Cut> cuts = separation_round(ctx);
            if (cuts.empty())
                break;
            for (const auto &c : cuts) {
                model.add_row(to_row(c, layout));
                emit(c);
            }
            SolveOutcome next = solve_lp(model);
            if (next.status != SolveStatus::Optimal)
                break;
            lp = std::move(next);
            report.root_bound = std::max(report.root_bound, lp.objective);
        }
    }
    report.root_bound += base;
    if (!hooks.dump_model_path.empty())
        write_lp_file(model, hooks.dump_model_path);

    for (int e = 0; e < edges.size(); e++)
        model.variables()[e].integer = true;

    RecourseCache qcache;
    auto recourse_of = [&](const Route &r) { return cached_recourse(inst, cfg, weights, r, qcache); };
    std::optional<Rational> best;
    std::vector<Route> best_routes;

    auto verify = [&](const std::vector<double> &sol) {
        std::vector<int> xi(edges.size());
        for (int e = 0; e < edges.size(); e++)
            xi[e] = int(std::lround(sol[e]));
        CandidateResult cand = examine_candidate(ctx, cfg, xi, theta_part(sol, layout), qcache);
        if (cand.feasible && (!best || cand.cost < *best)) {
            best = cand.cost;
            best_routes = cand.routes;
        }
        std::vector<Row> rows;
        for (const auto &c : cand.cuts) {
            rows.push_back(to_row(c, layout));
            emit(c);
        }
        return rows;
    };

    LazyOptions lo;
    lo.time_limit = std::max(cfg.time_limit_s - since(t0), 0.0);
    lo.on_round = [&](const SolveOutcome &o) { report.outer_rounds = o.rounds; };
    SolveOutcome out = solve_mip_with_lazy(model, verify, lo);

    if (out.status == SolveStatus::Infeasible) {
        report.bound = kInf;
        return finish("infeasible");
    }
    report.bound = (std::isfinite(out.bound) ? out.bound : -kInf) + base;
    if (best) {
        report.has_value = true;
        report.exact_value = *best + pre.base_cost;
        report.value = report.exact_value.get_d();
        report.bound = std::min(report.bound, report.value);
        for (const auto &r : best_routes) {
            RouteReport rr;
            rr.route = r;
            if (cfg.recourse == RecourseKind::Classical)
                rr.route.orientation = classical_recourse(inst, r).orientation;
            rr.cost = route_cost(inst, r.sequence());
            rr.recourse = recourse_of(r);
            report.routes.push_back(std::move(rr));
        }
    }
    return finish(out.status == SolveStatus::Optimal ? "optimal" : "time_limit");
}

} // namespace vrpsd
