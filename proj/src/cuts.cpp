#include "vrpsd/cuts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace vrpsd {

namespace {

std::atomic<bool> g_phi_mutation{false};

void add_inside(std::map<int, Rational> &coeffs, const EdgeIndex &edges, std::span<const int> S, const Rational &c) {
    for (size_t i = 0; i < S.size(); i++)
        for (size_t j = i + 1; j < S.size(); j++)
            coeffs[edges.id(S[i], S[j])] += c;
}

void add_inside(std::map<int, long> &coeffs, const EdgeIndex &edges, std::span<const int> S, long c) {
    for (size_t i = 0; i < S.size(); i++)
        for (size_t j = i + 1; j < S.size(); j++)
            coeffs[edges.id(S[i], S[j])] += c;
}

template <class M> void drop_zeros(M &m) {
    for (auto it = m.begin(); it != m.end();)
        it = it->second == 0 ? m.erase(it) : std::next(it);
}

Rational snap(double v, const mpz_class &den) {
    double scaled = std::round(v * den.get_d());
    Rational q(mpz_class(scaled), den);
    q.canonicalize();
    return q;
}

} // namespace

namespace testing {
void set_phi_mutation(bool on) { g_phi_mutation = on; }
bool phi_mutation() { return g_phi_mutation; }
} // namespace testing

const char *kind_name(CutKind k) {
    switch (k) {
    case CutKind::Sec:
        return "SEC";
    case CutKind::Rci:
        return "RCI";
    case CutKind::AggregatedSri:
        return "AGG_SRI";
    case CutKind::ProjectedSri:
        return "PROJ_SRI";
    case CutKind::SetCut:
        return "SET";
    case CutKind::PartialRouteCut:
        return "PARTIAL_ROUTE";
    case CutKind::PathCut:
        return "PATH";
    case CutKind::RouteCut:
        return "ROUTE";
    case CutKind::ClassicalBound:
        return "CLASSICAL_BOUND";
    }
    return "?";
}

std::string Cut::serialize(const EdgeIndex &edges) const {
    std::ostringstream out;
    out << kind_name(kind) << ";";
    for (int v : support)
        out << " " << v;
    out << ";";
    for (const auto &[v, c] : theta)
        out << " theta[" << v << "]=" << to_string(c);
    for (const auto &[e, c] : x)
        out << " x[" << edges.u(e) << "," << edges.v(e) << "]=" << to_string(c);
    for (const auto &[key, c] : y)
        out << " y[" << key.first << "," << key.second << "]=" << to_string(c);
    out << "; " << (sense == Sense::Ge ? ">=" : sense == Sense::Le ? "<=" : "=") << " " << to_string(rhs);
    return out.str();
}

AffineForm wof_form(const EdgeIndex &edges, const PartialRoute &H) {
    AffineForm f;
    const auto &sets = H.sets();
    int l = H.size();
    long long total = 0;
    for (int i = 0; i < l; i++) {
        add_inside(f.coeff, edges, sets[i], 1);
        if (i + 1 < l)
            for (int a : sets[i])
                for (int b : sets[i + 1])
                    f.coeff[edges.id(a, b)] += 1;
        total += static_cast<long long>(sets[i].size());
    }
    f.constant = 1 + (1 - total);
    std::set<int> extra;
    for (int i : {2, l - 1})
        if (i >= 1 && i <= l)
            extra.insert(i);
    for (int i : extra) {
        add_inside(f.coeff, edges, sets[i - 1], 1);
        f.constant += 1 - static_cast<long long>(sets[i - 1].size());
    }
    drop_zeros(f.coeff);
    return f;
}

AffineForm wdl_form(const EdgeIndex &edges, std::span<const int> S, int kprime) {
    AffineForm f;
    add_inside(f.coeff, edges, S, 1);
    f.constant = 1 - static_cast<long long>(S.size()) + kprime;
    return f;
}

AffineForm route_exact_form(const EdgeIndex &edges, const std::vector<int> &seq) {
    AffineForm f;
    int n = edges.nodes() - 1;
    std::vector<bool> on(n + 1, false);
    for (int v : seq)
        on[v] = true;
    for (size_t i = 0; i + 1 < seq.size(); i++)
        f.coeff[edges.id(seq[i], seq[i + 1])] += 1;
    for (int v : seq)
        for (int u = 1; u <= n; u++)
            if (!on[u])
                f.coeff[edges.id(u, v)] -= 1;
    f.constant = 2 - static_cast<long long>(seq.size());
    return f;
}

Cut ils_cut(CutKind kind, const std::vector<int> &customers, const Rational &L, const AffineForm &form) {
    Cut c;
    c.kind = kind;
    c.support = customers;
    for (int v : customers)
        c.theta[v] = 1;
    for (const auto &[e, k] : form.coeff)
        c.x[e] = -L * Rational(k);
    drop_zeros(c.x);
    c.sense = Sense::Ge;
    c.rhs = L * Rational(form.constant);
    return c;
}

Cut capacity_cut(const EdgeIndex &edges, std::span<const int> S, int k) {
    Cut c;
    c.kind = k <= 1 ? CutKind::Sec : CutKind::Rci;
    c.support.assign(S.begin(), S.end());
    add_inside(c.x, edges, S, Rational(1));
    c.sense = Sense::Le;
    c.rhs = static_cast<long>(S.size()) - k;
    return c;
}

std::optional<AggregatedSri> aggregate_sri(const Instance &inst, const EdgeIndex &edges, const std::vector<double> &x,
                                           const std::vector<std::vector<double>> &y, std::span<const int> S,
                                           double tol) {
    AggregatedSri agg;
    agg.S.assign(S.begin(), S.end());
    for (int xi = 0; xi < inst.scenarios(); xi++)
        if (sri_violation(inst, edges, x, y, S, xi) > tol)
            agg.scenarios.push_back(xi);
    if (agg.scenarios.empty())
        return std::nullopt;
    return agg;
}

Cut aggregated_sri_cut(const Instance &inst, const EdgeIndex &edges, const AggregatedSri &agg) {
    Cut c;
    c.kind = CutKind::AggregatedSri;
    c.support = agg.S;
    Rational count(static_cast<long>(agg.scenarios.size()));
    add_inside(c.x, edges, agg.S, -count);
    c.rhs = 0;
    for (int xi : agg.scenarios) {
        for (int v : agg.S)
            c.y[{xi, v}] = 1;
        c.rhs += scenario_vehicles(inst, xi, agg.S) - static_cast<long>(agg.S.size());
    }
    c.sense = Sense::Ge;
    return c;
}

Cut ProjectedSriCut::to_cut(CutKind kind, std::vector<int> support) const {
    Cut c;
    c.kind = kind;
    c.support = std::move(support);
    c.theta = phi;
    for (const auto &[e, k] : x_coeffs)
        c.x[e] = -k;
    drop_zeros(c.theta);
    drop_zeros(c.x);
    c.sense = Sense::Ge;
    c.rhs = constant;
    return c;
}

std::optional<ProjectedSriCut> project_inequality(const YInequality &ineq, const RecourseWeights &weights,
                                                  const std::vector<Rational> &prob) {
    for (const auto &p : prob)
        if (p < 0)
            throw std::invalid_argument("negative probability");
    ProjectedSriCut out;
    out.x_coeffs = ineq.x_coeffs;
    out.constant = ineq.constant;
    std::map<int, std::optional<Rational>> best;
    for (size_t xi = 0; xi < ineq.a.size(); xi++)
        for (const auto &[v, a] : ineq.a[xi]) {
            const Rational &w = weights.w[v];
            if (w == 0 || prob[xi] == 0) {
                if (a > 0)
                    return std::nullopt;
                continue;
            }
            Rational r = testing::phi_mutation() ? Rational(a / w) : Rational(a / (prob[xi] * w));
            auto &slot = best[v];
            if (testing::phi_mutation())
                slot = slot ? *slot + r : r;
            else if (!slot || r > *slot)
                slot = r;
        }
    for (const auto &[v, r] : best)
        if (r && *r > 0)
            out.phi[v] = *r;
    drop_zeros(out.x_coeffs);
    return out;
}

YInequality combine_sris(const Instance &inst, const EdgeIndex &edges, const SriMultipliers &m,
                         const RecourseWeights &weights) {
    YInequality out;
    out.a.resize(inst.scenarios());
    out.constant = 0;
    for (const auto &[S, alpha] : m.alpha)
        for (int xi = 0; xi < inst.scenarios(); xi++) {
            const Rational &al = alpha[xi];
            if (al == 0)
                continue;
            for (int v : S)
                out.a[xi][v] += al;
            add_inside(out.x_coeffs, edges, S, al);
            out.constant += al * Rational(scenario_vehicles(inst, xi, S) - static_cast<long>(S.size()));
        }
    for (int xi = 0; xi < static_cast<int>(m.beta.size()); xi++)
        for (const auto &[v, be] : m.beta[xi]) {
            out.a[xi][v] += be;
            out.constant += be * Rational(weights.b[v]);
        }
    return out;
}

ProjectedSriCut projected_aggregated_sri(const Instance &inst, const EdgeIndex &edges, std::span<const int> S,
                                         std::span<const int> scenarios, const RecourseWeights &weights,
                                         bool max_over_all) {
    if (scenarios.empty())
        throw std::invalid_argument("projected aggregated SRI needs a scenario");
    ProjectedSriCut out;
    std::vector<int> pool;
    if (max_over_all)
        for (int xi = 0; xi < inst.scenarios(); xi++)
            pool.push_back(xi);
    else
        pool.assign(scenarios.begin(), scenarios.end());
    for (int v : S) {
        if (weights.w[v] == 0)
            throw std::invalid_argument("projected aggregated SRI on a customer with zero weight");
        std::optional<Rational> best;
        for (int xi : pool) {
            if (inst.prob[xi] == 0)
                continue;
            Rational r = 1 / (inst.prob[xi] * weights.w[v]);
            if (!best || r > *best)
                best = r;
        }
        if (!best)
            throw std::invalid_argument("projected aggregated SRI over zero-probability scenarios");
        out.phi[v] = *best;
    }
    Rational count(static_cast<long>(scenarios.size()));
    add_inside(out.x_coeffs, edges, S, count);
    out.constant = -count * Rational(static_cast<long>(S.size()));
    for (int xi : scenarios)
        out.constant += scenario_vehicles(inst, xi, S);
    return out;
}

SetCutBundle set_cut_bundle(const Instance &inst, const EdgeIndex &edges, std::span<const int> S, int kprime,
                            const RecourseWeights &weights) {
    std::vector<int> order(S.begin(), S.end());
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (weights.w[a] != weights.w[b])
            return weights.w[a] < weights.w[b];
        return a < b;
    });
    long long bsum = 0;
    for (int v : order)
        bsum += weights.b[v];
    SetCutBundle out;
    out.L = 0;
    SriMultipliers mult;
    mult.alpha.push_back({order, std::vector<Rational>(inst.scenarios(), Rational(0))});
    mult.beta.resize(inst.scenarios());
    for (int xi = 0; xi < inst.scenarios(); xi++) {
        long long need = scenario_vehicles(inst, xi, S) - kprime;
        Rational L = 0, alpha = 0;
        std::map<int, Rational> beta;
        if (need > 0) {
            if (need > bsum)
                throw InfeasibleBound("set bound infeasible: k - k' exceeds b(S)");
            long long before = 0;
            size_t j = 0;
            while (need > before + weights.b[order[j]])
                before += weights.b[order[j++]];
            for (size_t i = 0; i < j; i++) {
                L += Rational(weights.b[order[i]]) * weights.w[order[i]];
                Rational be = weights.w[order[i]] - weights.w[order[j]];
                if (be != 0) {
                    beta[order[i]] = be;
                    mult.beta[xi][order[i]] = inst.prob[xi] * be;
                }
            }
            L += to_rational(need - before) * weights.w[order[j]];
            alpha = weights.w[order[j]];
        }
        out.L_xi.push_back(L);
        out.alpha.push_back(alpha);
        out.beta.push_back(beta);
        mult.alpha[0].second[xi] = inst.prob[xi] * alpha;
        out.L += inst.prob[xi] * L;
    }
    out.ils = ils_cut(CutKind::SetCut, order, out.L, wdl_form(edges, S, kprime));
    out.ils.support.assign(S.begin(), S.end());
    out.dominating = project_inequality(combine_sris(inst, edges, mult, weights), weights, inst.prob);
    return out;
}

PartialRouteBundle partial_route_bundle(const Instance &inst, const EdgeIndex &edges, const PartialRoute &H,
                                        const RecourseWeights &weights) {
    const auto &groups = H.sets();
    std::vector<int> members = H.customers();
    std::vector<int> first_col;
    {
        int at = 0;
        for (const auto &g : groups) {
            first_col.push_back(at);
            at += static_cast<int>(g.size());
        }
        first_col.push_back(at);
    }
    mpz_class den = 1;
    for (int v : members)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), weights.w[v].get_den_mpz_t());

    PartialRouteBundle out;
    out.L = 0;
    SriMultipliers mult;
    mult.beta.resize(inst.scenarios());
    for (int xi = 0; xi < inst.scenarios(); xi++) {
        PieceLp lp = solve_piece_lp(inst, groups, xi, weights, true);
        if (!lp.feasible)
            throw InfeasibleBound("partial route bound infeasible for the given b");
        size_t np = lp.pieces.size();
        std::vector<std::vector<int>> cols(np);
        for (size_t r = 0; r < np; r++)
            for (int c = first_col[lp.pieces[r].first]; c < first_col[lp.pieces[r].last + 1]; c++)
                cols[r].push_back(c);

        auto normalize = [&](std::vector<Rational> &alpha, std::vector<Rational> &beta) {
            std::vector<Rational> load(members.size(), Rational(0));
            for (size_t r = 0; r < np; r++)
                for (int c : cols[r])
                    load[c] += alpha[r];
            beta.assign(members.size(), Rational(0));
            for (size_t c = 0; c < members.size(); c++) {
                Rational slack = weights.w[members[c]] - load[c];
                beta[c] = slack < 0 ? slack : Rational(0);
            }
        };
        auto objective = [&](const std::vector<Rational> &alpha, const std::vector<Rational> &beta) {
            Rational obj = 0;
            for (size_t r = 0; r < np; r++)
                obj += alpha[r] * Rational(lp.pieces[r].vehicles - 1);
            for (size_t c = 0; c < members.size(); c++)
                obj += beta[c] * Rational(weights.b[members[c]]);
            return obj;
        };

        std::vector<Rational> alpha(np), beta;
        for (size_t r = 0; r < np; r++)
            alpha[r] = positive_part(snap(lp.alpha[r], den));
        normalize(alpha, beta);
        Rational obj = objective(alpha, beta);
        if (obj != lp.value) {
            std::vector<Rational> raw(np), rbeta;
            for (size_t r = 0; r < np; r++)
                raw[r] = positive_part(from_double(lp.alpha[r]));
            normalize(raw, rbeta);
            Rational robj = objective(raw, rbeta);
            if (robj > obj) {
                alpha = raw;
                beta = rbeta;
                obj = robj;
            }
        }

        // Shrink the support until every piece with a positive multiplier
        // keeps at least two vehicles beyond the capped customers.
        while (true) {
            bool moved = false;
            for (size_t r = 0; r < np && !moved; r++) {
                if (alpha[r] <= 0)
                    continue;
                long long capped = 0;
                std::optional<Rational> eps;
                for (int c : cols[r])
                    if (beta[c] < 0) {
                        capped += weights.b[members[c]];
                        if (!eps || -beta[c] < *eps)
                            eps = -beta[c];
                    }
                if (lp.pieces[r].vehicles - capped > 1)
                    continue;
                Rational step = eps && *eps < alpha[r] ? *eps : alpha[r];
                alpha[r] -= step;
                for (int c : cols[r])
                    if (beta[c] < 0)
                        beta[c] += step;
                moved = true;
            }
            if (!moved)
                break;
        }
        obj = objective(alpha, beta);

        out.L_xi.push_back(obj);
        out.L += inst.prob[xi] * obj;
        std::vector<PieceDual> duals;
        for (size_t r = 0; r < np; r++) {
            if (alpha[r] == 0)
                continue;
            PieceDual pd;
            for (int c : cols[r])
                pd.customers.push_back(members[c]);
            pd.vehicles = lp.pieces[r].vehicles;
            pd.alpha = alpha[r];
            std::vector<Rational> per(inst.scenarios(), Rational(0));
            per[xi] = inst.prob[xi] * alpha[r];
            mult.alpha.push_back({pd.customers, per});
            duals.push_back(std::move(pd));
        }
        out.alpha.push_back(std::move(duals));
        std::map<int, Rational> bmap;
        for (size_t c = 0; c < members.size(); c++)
            if (beta[c] != 0) {
                bmap[members[c]] = beta[c];
                mult.beta[xi][members[c]] = inst.prob[xi] * beta[c];
            }
        out.beta.push_back(std::move(bmap));
    }
    out.ils = ils_cut(CutKind::PartialRouteCut, members, out.L, wof_form(edges, H));
    out.dominating = project_inequality(combine_sris(inst, edges, mult, weights), weights, inst.prob);
    return out;
}

} // namespace vrpsd
