#include "vrpsd/checks.hpp"

#include "vrpsd/cuts.hpp"
#include "vrpsd/generate.hpp"
#include "vrpsd/separation.hpp"
#include "vrpsd/solver.hpp"

#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace vrpsd {

namespace {

using Clock = std::chrono::steady_clock;

int uniform(Rng &rng, int lo, int hi) { return boost::random::uniform_int_distribution<int>(lo, hi)(rng); }

struct Timer {
    CheckResult &res;
    Clock::time_point t0 = Clock::now();
    explicit Timer(CheckResult &r) : res(r) {}
    ~Timer() { res.seconds = std::chrono::duration<double>(Clock::now() - t0).count(); }
};

CheckResult named(const char *name) {
    CheckResult res;
    res.name = name;
    return res;
}

void fail(CheckResult &res, const std::string &what) {
    res.failures++;
    res.passed = false;
    if (res.detail.empty())
        res.detail = what;
}

std::string seq_string(const std::vector<int> &seq) {
    std::ostringstream out;
    out << "(";
    for (size_t i = 0; i < seq.size(); i++)
        out << (i ? "," : "") << seq[i];
    out << ")";
    return out.str();
}

// Customers 1..n on a small grid, random positive probabilities, demands
// drawn from [dmin, dmax].
Instance random_instance(Rng &rng, int n, int N, long long C, long long dmin, long long dmax) {
    Instance inst;
    inst.name = "random";
    inst.n = n;
    inst.capacity = C;
    std::vector<std::pair<int, int>> pts;
    std::set<std::pair<int, int>> used;
    while (int(pts.size()) <= n) {
        std::pair<int, int> p{uniform(rng, 0, 20), uniform(rng, 0, 20)};
        if (used.insert(p).second)
            pts.push_back(p);
    }
    inst.cost.assign(n + 1, std::vector<long long>(n + 1, 0));
    for (int i = 0; i <= n; i++)
        for (int j = 0; j <= n; j++) {
            double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
            inst.cost[i][j] = std::llround(std::sqrt(dx * dx + dy * dy));
        }
    inst.demand.assign(N, std::vector<long long>(n + 1, 0));
    for (auto &row : inst.demand)
        for (int v = 1; v <= n; v++)
            row[v] = uniform(rng, int(dmin), int(dmax));
    std::vector<int> raw(N);
    int total = 0;
    for (int &r : raw) {
        r = uniform(rng, 1, 5);
        total += r;
    }
    for (int r : raw)
        inst.prob.push_back(ratio(r, total));
    inst.fleet_size = 1;
    return inst;
}

std::vector<int> random_order(Rng &rng, int n) {
    std::vector<int> seq(n);
    std::iota(seq.begin(), seq.end(), 1);
    for (int i = n - 1; i > 0; i--)
        std::swap(seq[i], seq[uniform(rng, 0, i)]);
    return seq;
}

RecourseWeights random_weights(Rng &rng, const Instance &inst, int b) {
    RecourseWeights rw;
    rw.w.assign(inst.n + 1, Rational(0));
    rw.b.assign(inst.n + 1, 0);
    for (int v = 1; v <= inst.n; v++) {
        rw.w[v] = ratio(uniform(rng, 0, 20), uniform(rng, 1, 3));
        rw.b[v] = b;
    }
    return rw;
}

// Random routing plan over all customers, as an integer edge vector.
std::vector<int> random_plan(Rng &rng, const EdgeIndex &edges, int n) {
    std::vector<int> seq = random_order(rng, n);
    std::vector<Route> routes;
    std::vector<int> cur;
    for (int v : seq) {
        cur.push_back(v);
        if (uniform(rng, 0, 2) == 0) {
            routes.push_back({cur, Orientation::Forward});
            cur.clear();
        }
    }
    if (!cur.empty())
        routes.push_back({cur, Orientation::Forward});
    return encode_routes(edges, routes);
}

std::vector<Rational> mix_plans(Rng &rng, const EdgeIndex &edges, int n) {
    int parts = uniform(rng, 1, 3);
    std::vector<int> lam(parts);
    int total = 0;
    for (int &l : lam) {
        l = uniform(rng, 1, 4);
        total += l;
    }
    std::vector<Rational> x(edges.size(), Rational(0));
    for (int l : lam) {
        std::vector<int> plan = random_plan(rng, edges, n);
        for (int e = 0; e < edges.size(); e++)
            x[e] += ratio(l * plan[e], total);
    }
    return x;
}

std::vector<double> to_doubles(const std::vector<Rational> &v) {
    std::vector<double> out;
    for (const auto &q : v)
        out.push_back(q.get_d());
    return out;
}

std::optional<PartialRoute> random_partial_route(Rng &rng, int n) {
    std::vector<int> seq = random_order(rng, n);
    seq.resize(uniform(rng, 1, n));
    for (int attempt = 0; attempt < 20; attempt++) {
        std::vector<std::vector<int>> sets;
        for (int v : seq) {
            if (sets.empty() || uniform(rng, 0, 1) == 0)
                sets.push_back({});
            sets.back().push_back(v);
        }
        try {
            return PartialRoute(sets);
        } catch (const std::exception &) {
        }
    }
    return std::nullopt;
}

} // namespace

BatterySizes battery_sizes(const std::string &name) {
    BatterySizes s;
    if (name == "full")
        return s;
    if (name == "small") {
        s.classical_routes = 300;
        s.qstar_routes = 100;
        s.probe_routes = 60;
        s.membership_triples = 300;
        s.dominance_supports = 60;
        s.dominance_points = 20;
        s.recovery_instances = 8;
        s.e2e_instances = 10;
        s.separation_candidates = 200;
        s.milp_instances = 3;
        return s;
    }
    if (name == "tiny") {
        s.classical_routes = 100;
        s.qstar_routes = 30;
        s.probe_routes = 20;
        s.probe_trials = 5;
        s.membership_triples = 100;
        s.dominance_supports = 20;
        s.dominance_points = 10;
        s.recovery_instances = 3;
        s.e2e_instances = 3;
        s.separation_candidates = 60;
        s.milp_instances = 1;
        return s;
    }
    throw std::invalid_argument("unknown battery size '" + name + "' (tiny, small or full)");
}

CheckResult check_golden_set_cut() {
    CheckResult res = named("golden set cut");
    Timer timer(res);
    // Scenario 0 needs three vehicles on S, scenario 1 none.
    Instance inst;
    inst.name = "golden";
    inst.n = 3;
    inst.capacity = 10;
    inst.cost = {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
    inst.demand = {{0, 10, 10, 10}, {0, 0, 0, 0}};
    inst.prob = {Rational(1, 2), Rational(1, 2)};
    inst.validate();
    EdgeIndex edges(3);
    RecourseWeights rw{{Rational(0), Rational(2), Rational(3), Rational(4)}, {0, 1, 1, 1}};
    std::vector<int> S{1, 2, 3};
    res.cases = 1;
    SetCutBundle b = set_cut_bundle(inst, edges, S, 1, rw);
    const Rational p(1, 2);
    std::ostringstream why;
    if (b.L_xi[0] != 5)
        why << "L*_0 = " << b.L_xi[0] << " (expected 5); ";
    if (b.L != 5 * p)
        why << "L* = " << b.L << " (expected 5/2); ";
    if (b.alpha[0] != 3)
        why << "alpha = " << b.alpha[0] << " (expected 3); ";
    std::map<int, Rational> beta_expected{{1, Rational(-1)}};
    if (b.beta[0] != beta_expected)
        why << "beta differs from (-1,0,0); ";
    if (!b.dominating) {
        why << "projection reported trivial; ";
    } else {
        std::map<int, Rational> phi{{1, Rational(1)}, {2, Rational(1)}, {3, Rational(3, 4)}};
        if (b.dominating->phi != phi) {
            why << "phi = (";
            for (int v : S)
                why << (v > 1 ? "," : "") << (b.dominating->phi.count(v) ? b.dominating->phi.at(v) : Rational(0));
            why << ") (expected (1,1,3/4)); ";
        }
        // 5p + 3p (x(E(S)) - |S| + 1): constant -p, coefficient 3p per inner edge.
        if (b.dominating->constant != -p)
            why << "rhs constant = " << b.dominating->constant << " (expected -1/2); ";
        for (int i = 0; i < 3; i++)
            for (int j = i + 1; j < 3; j++) {
                int e = edges.id(S[i], S[j]);
                Rational c = b.dominating->x_coeffs.count(e) ? b.dominating->x_coeffs.at(e) : Rational(0);
                if (c != 3 * p)
                    why << "x coefficient " << c << " on edge " << S[i] << "-" << S[j] << " (expected 3/2); ";
            }
    }
    if (!why.str().empty())
        fail(res, why.str() + "instance:\n" + format_instance(inst) + "weights w=(2,3,4) b=1 k'=1");
    return res;
}

CheckResult check_classical_formula(int routes, Rng &rng) {
    CheckResult res = named("classical recourse formula vs simulation");
    Timer timer(res);
    for (int t = 0; t < routes; t++) {
        int ell = uniform(rng, 1, 8), N = uniform(rng, 1, 4);
        long long C = uniform(rng, 3, 15);
        Instance inst = random_instance(rng, ell, N, C, 0, C);
        std::vector<int> seq = random_order(rng, ell);
        res.cases++;
        for (int dir = 0; dir < 2; dir++) {
            std::vector<int> s = dir ? std::vector<int>(seq.rbegin(), seq.rend()) : seq;
            Rational simulated = 0;
            for (int xi = 0; xi < N; xi++) {
                std::vector<int> f = simulate_classical(inst, s, xi);
                if (f != classical_failures(inst, s, xi))
                    fail(res, "failure positions differ on route " + seq_string(s) + " scenario " +
                                  std::to_string(xi) + "\n" + format_instance(inst));
                for (size_t j = 0; j < s.size(); j++)
                    simulated += inst.prob[xi] * to_rational(2 * inst.c(0, s[j]) * f[j]);
            }
            if (classical_recourse_directed(inst, s).total != simulated)
                fail(res, "expected cost differs on route " + seq_string(s) + "\n" + format_instance(inst));
        }
    }
    return res;
}

CheckResult check_scenario_optimal(int routes, Rng &rng) {
    CheckResult res = named("scenario-optimal LP vs enumeration");
    Timer timer(res);
    for (int t = 0; t < routes; t++) {
        int ell = uniform(rng, 1, 6), N = uniform(rng, 1, 3), b = uniform(rng, 1, 2);
        long long C = uniform(rng, 3, 12);
        Instance inst = random_instance(rng, ell, N, C, 0, C);
        RecourseWeights rw = random_weights(rng, inst, b);
        std::vector<int> seq = random_order(rng, ell);
        res.cases++;
        std::optional<Rational> brute = brute_force_scenario_optimal(inst, seq, rw);
        std::optional<Rational> dp = load_dp_scenario_optimal(inst, seq, rw);
        for (bool minimal : {false, true}) {
            std::optional<Rational> lp;
            try {
                lp = scenario_optimal_recourse(inst, Route{seq, Orientation::Forward}, rw, minimal).value;
            } catch (const InfeasibleRecourse &) {
            }
            if (lp != brute || dp != brute) {
                std::ostringstream why;
                why << "route " << seq_string(seq) << " b=" << b << " lp=" << (lp ? to_string(*lp) : "infeasible")
                    << " brute=" << (brute ? to_string(*brute) : "infeasible")
                    << " dp=" << (dp ? to_string(*dp) : "infeasible") << (minimal ? " (minimal pieces)" : "") << "\n"
                    << format_instance(inst);
                fail(res, why.str());
            }
        }
    }
    return res;
}

CheckResult check_integrality(int routes, int trials, Rng &rng) {
    CheckResult res = named("recourse polytope integrality");
    Timer timer(res);
    for (int t = 0; t < routes; t++) {
        int ell = uniform(rng, 1, 6), N = 1;
        long long C = uniform(rng, 3, 12);
        Instance inst = random_instance(rng, ell, N, C, 0, 2 * C);
        std::vector<int> seq = random_order(rng, ell);
        std::vector<int> b(ell);
        for (int &x : b)
            x = uniform(rng, 1, 2);
        res.cases++;
        if (!hull_integrality_probe(inst, seq, b, trials, rng))
            fail(res, "fractional vertex on route " + seq_string(seq) + "\n" + format_instance(inst));
    }
    return res;
}

CheckResult check_membership(int triples, Rng &rng) {
    CheckResult res = named("subroute membership vs max-flow");
    Timer timer(res);
    for (int t = 0; t < triples; t++) {
        int ell = uniform(rng, 1, 8);
        long long C = uniform(rng, 3, 12);
        Instance inst = random_instance(rng, ell, 1, C, 0, 2 * C);
        std::vector<int> seq = random_order(rng, ell);
        std::vector<int> y(ell);
        for (int &v : y)
            v = uniform(rng, 0, 2);
        res.cases++;
        if (is_recourse_action(inst, seq, 0, y) != maxflow_membership(inst, seq, 0, y))
            fail(res, "membership differs on route " + seq_string(seq) + " y=" + seq_string(y) + "\n" +
                          format_instance(inst));
    }
    return res;
}

CheckResult check_dominance(int supports, int points, Rng &rng) {
    CheckResult res = named("projected SRI dominance over ILS cuts");
    Timer timer(res);
    long held = 0, tight = 0;
    for (int t = 0; t < supports; t++) {
        int n = uniform(rng, 3, 8), N = uniform(rng, 1, 4), b = uniform(rng, 1, 2);
        long long C = uniform(rng, 5, 15);
        Instance inst = random_instance(rng, n, N, C, 0, C);
        EdgeIndex edges(n);
        RecourseWeights rw = uniform(rng, 0, 1) ? make_weights(inst, WeightKind::Classical, b)
                                                : make_weights(inst, WeightKind::Preventive, b);
        Cut ils;
        std::optional<ProjectedSriCut> dom;
        std::vector<int> support;
        std::string what;
        try {
            if (t % 2 == 0) {
                std::vector<int> S = random_order(rng, n);
                S.resize(uniform(rng, 2, n));
                SetCutBundle bundle = set_cut_bundle(inst, edges, S, 1, rw);
                ils = bundle.ils;
                dom = bundle.dominating;
                support = S;
                what = "set " + seq_string(S);
            } else {
                auto H = random_partial_route(rng, n);
                if (!H)
                    continue;
                PartialRouteBundle bundle = partial_route_bundle(inst, edges, *H, rw);
                ils = bundle.ils;
                dom = bundle.dominating;
                support = H->customers();
                what = "partial route over " + seq_string(support);
            }
        } catch (const InfeasibleBound &) {
            continue;
        }
        res.cases++;
        if (!dom)
            continue;
        Cut dcut = dom->to_cut(CutKind::ProjectedSri, support);
        for (int k = 0; k < points; k++) {
            std::vector<Rational> x = mix_plans(rng, edges, n);
            std::vector<Rational> th(n + 1, Rational(0));
            for (int v = 1; v <= n; v++)
                th[v] = ratio(uniform(rng, 0, 40), uniform(rng, 1, 4));
            if (k % 2 == 1) {
                // Scale theta onto the boundary of the projected SRI.
                Rational cur = 0;
                for (const auto &[v, c] : dcut.theta)
                    cur += c * th[v];
                Rational need = dcut.rhs - (dcut.lhs(x, th) - cur);
                if (need <= 0 || cur == 0) {
                    for (auto &q : th)
                        q = 0;
                } else {
                    Rational f = need / cur;
                    for (auto &q : th)
                        q *= f;
                }
            }
            Rational dv = dcut.violation(x, th);
            held += dv <= 0;
            tight += dv == 0;
            if (dv <= 0 && ils.violation(x, th) > 0) {
                std::ostringstream why;
                why << what << ": projected SRI holds but ILS cut is violated by " << ils.violation(x, th)
                    << "\nILS: " << ils.serialize(edges) << "\nSRI: " << dcut.serialize(edges) << "\n"
                    << format_instance(inst);
                fail(res, why.str());
            }
        }
    }
    res.info = std::to_string(held) + " points satisfy the projected SRI, " + std::to_string(tight) + " on its boundary";
    return res;
}

CheckResult check_bound_recovery(int instances, Rng &rng) {
    CheckResult res = named("root relaxation recovers the phase-1 bound");
    Timer timer(res);
    for (int t = 0; t < instances; t++) {
        GenParams gp;
        gp.n = uniform(rng, 4, 10);
        gp.scenarios = uniform(rng, 1, 4);
        gp.capacity = 20;
        gp.demand_mean = uniform(rng, 5, 10);
        gp.demand_spread = gp.demand_mean;
        gp.grid = 40;
        gp.seed = rng();
        Instance inst = preprocess_large_demands(generate_instance(gp)).inst;
        SolverConfig cfg;
        cfg.first_stage = t % 2 ? FirstStage::Subtour : FirstStage::Cvrp;
        cfg.recourse = RecourseKind::ScenarioOptimal;
        cfg.mode = Mode::Sri;
        cfg.root_phase1_limit_s = 5.0;
        cfg.milp_separation_limit_s = 2.0;
        res.cases++;
        Phase1Result ph = solve_root_phase1(inst, cfg);
        if (!std::isfinite(ph.z_tilde))
            continue;
        RootRelaxation root = build_root_relaxation(inst, cfg, ph);
        double lag = lagrangian_bound(inst, cfg, ph.x_rows, ph.bundle);
        std::ostringstream why;
        if (root.value < ph.z_tilde - 1e-6)
            why << "root " << root.value << " below z~ " << ph.z_tilde << "; ";
        if (ph.bundle.converged && root.value > ph.z_tilde + 1e-6)
            why << "root " << root.value << " above converged z~ " << ph.z_tilde << "; ";
        if (ph.bundle.converged && std::abs(lag - ph.z_tilde) > 1e-6)
            why << "Lagrangian bound " << lag << " differs from converged z~ " << ph.z_tilde << "; ";
        if (!why.str().empty())
            fail(res, why.str() + "(" + to_string(cfg.first_stage) + ")\n" + format_instance(inst));
    }
    return res;
}

CheckResult check_end_to_end(int instances, Rng &rng) {
    CheckResult res = named("end-to-end optimum vs enumeration");
    Timer timer(res);
    struct Variant {
        RecourseKind recourse;
        Mode mode;
    };
    const Variant variants[] = {{RecourseKind::ScenarioOptimal, Mode::Ils},
                                {RecourseKind::ScenarioOptimal, Mode::Sri},
                                {RecourseKind::Classical, Mode::Ils},
                                {RecourseKind::Classical, Mode::IlsPlusSri}};
    for (int t = 0; t < instances; t++) {
        GenParams gp;
        gp.n = uniform(rng, 3, 7);
        gp.scenarios = uniform(rng, 1, 5);
        gp.capacity = 20;
        gp.demand_mean = uniform(rng, 4, 10);
        gp.demand_spread = gp.demand_mean;
        gp.grid = 40;
        gp.seed = rng();
        FirstStage fs = t % 2 ? FirstStage::Subtour : FirstStage::Cvrp;
        if (fs == FirstStage::Subtour && t % 4 == 1) {
            // Demands above capacity exercise preprocessing.
            gp.demand_mean = 14;
            gp.demand_spread = 12;
        }
        Instance inst = generate_instance(gp);
        res.cases++;
        std::map<RecourseKind, std::optional<Rational>> by_recourse;
        for (const auto &var : variants) {
            SolverConfig cfg;
            cfg.first_stage = fs;
            cfg.recourse = var.recourse;
            cfg.mode = var.mode;
            cfg.time_limit_s = 120.0;
            cfg.root_phase1_limit_s = 10.0;
            cfg.milp_separation_limit_s = 2.0;
            EnumeratedOptimum opt = enumerate_optimal(inst, cfg);
            SolveReport rep = solve(inst, cfg);
            std::ostringstream why;
            if (!opt.feasible) {
                if (rep.status != "infeasible")
                    why << "enumeration infeasible, solver " << rep.status;
            } else if (rep.status != "optimal" || !rep.has_value) {
                why << "solver status " << rep.status << ", enumeration " << opt.value.get_d();
            } else {
                if (std::abs(rep.value - opt.value.get_d()) > 1e-6)
                    why << "solver " << rep.exact_value << " vs enumeration " << opt.value;
                if (rep.value < rep.bound - 1e-6)
                    why << " value below bound";
                auto &slot = by_recourse[var.recourse];
                if (slot && *slot != rep.exact_value)
                    why << " modes disagree: " << *slot << " vs " << rep.exact_value;
                slot = rep.exact_value;
            }
            if (!why.str().empty())
                fail(res, "mode " + to_string(var.mode) + " recourse " + to_string(var.recourse) + " first stage " +
                              to_string(fs) + ": " + why.str() + "\n" + format_instance(inst));
        }
    }
    return res;
}

CheckResult check_separation_soundness(int candidates, Rng &rng) {
    CheckResult res = named("separation soundness");
    Timer timer(res);
    struct Variant {
        RecourseKind recourse;
        Mode mode;
    };
    const Variant variants[] = {{RecourseKind::ScenarioOptimal, Mode::Ils},
                                {RecourseKind::ScenarioOptimal, Mode::Sri},
                                {RecourseKind::Classical, Mode::Ils},
                                {RecourseKind::Classical, Mode::IlsPlusSri}};
    const int per_instance = 20;
    long cuts_checked = 0, comparisons = 0;
    for (int t = 0; res.cases < candidates; t++) {
        GenParams gp;
        gp.n = uniform(rng, 3, 6);
        gp.scenarios = uniform(rng, 1, 3);
        gp.capacity = 20;
        gp.demand_mean = uniform(rng, 5, 10);
        gp.demand_spread = gp.demand_mean;
        gp.grid = 40;
        gp.seed = rng();
        Instance inst = preprocess_large_demands(generate_instance(gp)).inst;
        const Variant &var = variants[t % 4];
        SolverConfig cfg;
        cfg.first_stage = (t / 4) % 2 ? FirstStage::Subtour : FirstStage::Cvrp;
        cfg.recourse = var.recourse;
        cfg.mode = var.mode;
        cfg.weights = (t / 8) % 2 ? WeightKind::Preventive : WeightKind::Classical;
        cfg.b = var.recourse == RecourseKind::Classical ? 1 : uniform(rng, 1, 2);
        int n = inst.n;
        EdgeIndex edges(n);
        RecourseWeights rw = make_weights(inst, cfg.weights, cfg.b);

        // Oracle points: every admissible plan with theta from its recourse breakdown.
        std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> feasible;
        for (const auto &plan : enumerate_plans(inst, cfg.first_stage)) {
            std::vector<int> xi = encode_routes(edges, plan);
            std::vector<Rational> x(xi.begin(), xi.end());
            std::vector<Rational> th(n + 1, Rational(0));
            for (const auto &r : plan) {
                RecourseBreakdown br = route_recourse(inst, r, cfg.recourse, rw);
                for (int v : r.customers)
                    th[v] = br.per_customer[v];
            }
            feasible.push_back({std::move(x), std::move(th)});
        }
        std::vector<std::vector<double>> fx, fth;
        for (const auto &[x, th] : feasible) {
            fx.push_back(to_doubles(x));
            fth.push_back(to_doubles(th));
        }

        SeparationContext ctx = make_context(inst, edges, rw);
        ctx.first_stage = cfg.first_stage;
        ctx.recourse = cfg.recourse;
        ctx.use_sri = cfg.mode != Mode::Ils;
        RecourseCache cache;
        for (int k = 0; k < per_instance && res.cases < candidates; k++) {
            std::vector<Rational> x;
            std::vector<int> xint;
            int kind = k % 3;
            if (kind == 0 || kind == 2) {
                xint = random_plan(rng, edges, n);
                if (kind == 2) {
                    // Close one route into a depot-free cycle when possible.
                    RoutingPlan p = routes_of(edges, xint);
                    for (const auto &r : p.routes)
                        if (r.size() >= 3) {
                            std::vector<int> s = r.sequence();
                            xint[edges.id(0, s.front())]--;
                            xint[edges.id(0, s.back())]--;
                            xint[edges.id(s.front(), s.back())]++;
                            break;
                        }
                }
                x.assign(xint.begin(), xint.end());
            } else {
                x = mix_plans(rng, edges, n);
            }
            std::vector<double> xd = to_doubles(x);
            std::vector<double> th(n + 1, 0.0);
            for (int v = 1; v <= n; v++)
                th[v] = uniform(rng, 0, 3) == 0 ? 0.0 : uniform(rng, 0, 200) / 10.0;
            std::vector<Cut> cuts;
            ctx.x = xd;
            ctx.theta = th;
            if (!xint.empty())
                cuts = examine_candidate(ctx, cfg, xint, th, cache).cuts;
            else
                cuts = separation_round(ctx);
            res.cases++;
            for (const auto &c : cuts) {
                cuts_checked++;
                comparisons += long(feasible.size());
                double v = c.violation(xd, th);
                if (v < 1e-4)
                    fail(res, std::string("cut violated by only ") + std::to_string(v) + ": " + c.serialize(edges) +
                                  "\n" + format_instance(inst));
                for (size_t f = 0; f < feasible.size(); f++) {
                    if (c.violation(fx[f], fth[f]) < -1e-7)
                        continue;
                    Rational exact = c.violation(feasible[f].first, feasible[f].second);
                    if (exact > 0) {
                        std::ostringstream why;
                        why << "cut " << c.serialize(edges) << " cuts off a feasible plan by " << exact << " ("
                            << to_string(cfg.first_stage) << ", " << to_string(cfg.recourse) << ", "
                            << to_string(cfg.mode) << ")\n"
                            << format_instance(inst);
                        fail(res, why.str());
                    }
                }
            }
        }
    }
    res.info = std::to_string(cuts_checked) + " cuts checked against " + std::to_string(comparisons) +
               " feasible points in total";
    return res;
}

CheckResult check_milp_threshold(int instances, Rng &rng) {
    CheckResult res = named("MILP separation threshold");
    Timer timer(res);
    for (int t = 0; t < instances; t++) {
        int n = uniform(rng, 3, 8);
        long long C = 10;
        Instance inst = random_instance(rng, n, 1, C, 2, 8);
        // A single route through every customer with total demand above C.
        inst.demand[0][1] = 8;
        inst.demand[0][2] = 8;
        EdgeIndex edges(n);
        std::vector<int> seq = random_order(rng, n);
        std::vector<int> xi = encode_routes(edges, {Route{seq, Orientation::Forward}});
        std::vector<double> x(xi.begin(), xi.end());
        RecourseWeights rw = classical_weights(inst);

        auto max_violation = [&](double level) {
            std::vector<std::vector<double>> y(1, std::vector<double>(n + 1, level));
            double best = -kInf;
            for (unsigned mask = 1; mask < (1u << n); mask++) {
                std::vector<int> S;
                for (int v = 1; v <= n; v++)
                    if (mask >> (v - 1) & 1)
                        S.push_back(v);
                best = std::max(best, sri_violation(inst, edges, x, y, S, 0));
            }
            return best;
        };
        for (double target : {0.005, 0.02, 0.05, 0.1}) {
            double lo = 0.0, hi = double(n);
            for (int it = 0; it < 200; it++) {
                double mid = 0.5 * (lo + hi);
                (max_violation(mid) > target ? lo : hi) = mid;
            }
            double level = 0.5 * (lo + hi);
            double actual = max_violation(level);
            SeparationContext ctx = make_context(inst, edges, rw);
            ctx.x = x;
            ctx.theta.assign(n + 1, 0.0);
            ctx.y.assign(1, std::vector<double>(n + 1, level));
            res.cases++;
            auto S = separate_sri_milp(ctx, 0, 30.0);
            std::ostringstream why;
            if (target < 0.01 && S)
                why << "violation " << actual << " accepted with S=" << seq_string(*S);
            if (target >= 0.02 && !S)
                why << "violation " << actual << " rejected";
            if (S && sri_violation(inst, edges, x, ctx.y, *S, 0) < 0.01 - 1e-9)
                why << "returned set violated by less than 0.01";
            if (!why.str().empty())
                fail(res, why.str() + " on route " + seq_string(seq) + "\n" + format_instance(inst));
        }
    }
    return res;
}

std::vector<CheckResult> run_battery(const BatterySizes &sizes, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CheckResult> out;
    out.push_back(check_golden_set_cut());
    out.push_back(check_classical_formula(sizes.classical_routes, rng));
    out.push_back(check_scenario_optimal(sizes.qstar_routes, rng));
    out.push_back(check_integrality(sizes.probe_routes, sizes.probe_trials, rng));
    out.push_back(check_membership(sizes.membership_triples, rng));
    out.push_back(check_dominance(sizes.dominance_supports, sizes.dominance_points, rng));
    out.push_back(check_bound_recovery(sizes.recovery_instances, rng));
    out.push_back(check_end_to_end(sizes.e2e_instances, rng));
    out.push_back(check_separation_soundness(sizes.separation_candidates, rng));
    out.push_back(check_milp_threshold(sizes.milp_instances, rng));
    return out;
}

} // namespace vrpsd
