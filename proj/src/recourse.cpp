#include "vrpsd/recourse.hpp"

#include "vrpsd/lp.hpp"
#include "vrpsd/oracles.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace vrpsd {

RecourseWeights classical_weights(const Instance &inst, int b) {
    RecourseWeights rw;
    rw.w.assign(inst.n + 1, Rational(0));
    rw.b.assign(inst.n + 1, 0);
    for (int v = 1; v <= inst.n; v++) {
        rw.w[v] = to_rational(2 * inst.c(0, v));
        rw.b[v] = b;
    }
    return rw;
}

RecourseWeights preventive_weights(const Instance &inst, int b) {
    RecourseWeights rw = classical_weights(inst, b);
    for (int v = 1; v <= inst.n; v++) {
        long long best = 2 * inst.c(0, v);
        for (int u = 1; u <= inst.n; u++)
            if (u != v)
                best = std::min(best, inst.c(0, u) + inst.c(0, v) - inst.c(u, v));
        rw.w[v] = to_rational(std::max(best, 0LL));
    }
    return rw;
}

RecourseWeights make_weights(const Instance &inst, WeightKind kind, int b) {
    if (b < 1)
        throw std::invalid_argument("recourse bound b must be at least 1");
    return kind == WeightKind::Classical ? classical_weights(inst, b) : preventive_weights(inst, b);
}

std::vector<int> simulate_classical(const Instance &inst, const std::vector<int> &seq, int xi) {
    std::vector<int> fails(seq.size(), 0);
    long long load = 0;
    for (size_t j = 0; j < seq.size(); j++) {
        long long d = inst.d(xi, seq[j]);
        if (d > inst.capacity)
            throw std::invalid_argument("demand above capacity; preprocess the instance first");
        load += d;
        if (load > inst.capacity) {
            fails[j] = 1;
            load -= inst.capacity;
        }
    }
    return fails;
}

std::vector<int> classical_failures(const Instance &inst, const std::vector<int> &seq, int xi) {
    std::vector<int> fails(seq.size(), 0);
    long long C = inst.capacity;
    long long before = 0;
    for (size_t j = 0; j < seq.size(); j++) {
        long long after = before + inst.d(xi, seq[j]);
        long long t = std::max(1LL, (before + C - 1) / C);
        for (; t * C < after; t++)
            if (before <= t * C)
                fails[j]++;
        before = after;
    }
    return fails;
}

RecourseBreakdown classical_recourse_directed(const Instance &inst, const std::vector<int> &seq) {
    RecourseBreakdown out{Rational(0), std::vector<Rational>(inst.n + 1, Rational(0))};
    for (int xi = 0; xi < inst.scenarios(); xi++) {
        std::vector<int> f = classical_failures(inst, seq, xi);
        for (size_t j = 0; j < seq.size(); j++)
            if (f[j])
                out.per_customer[seq[j]] += inst.prob[xi] * to_rational(2 * inst.c(0, seq[j]) * f[j]);
    }
    for (int v = 1; v <= inst.n; v++)
        out.total += out.per_customer[v];
    return out;
}

ClassicalResult classical_recourse(const Instance &inst, const Route &route) {
    std::vector<int> fwd = route.customers;
    std::vector<int> rev(fwd.rbegin(), fwd.rend());
    ClassicalResult a{classical_recourse_directed(inst, fwd), Orientation::Forward};
    ClassicalResult b{classical_recourse_directed(inst, rev), Orientation::Reverse};
    return b.breakdown.total < a.breakdown.total ? b : a;
}

bool is_recourse_action(const Instance &inst, const std::vector<int> &seq, int xi, std::span<const int> y) {
    if (y.size() != seq.size())
        throw std::invalid_argument("recourse action length differs from the route");
    for (int v : y)
        if (v < 0)
            throw std::invalid_argument("recourse action with a negative entry");
    bool ok = true;
    for (size_t i = 0; i < seq.size() && ok; i++) {
        long long d = 0, trips = 0;
        for (size_t j = i; j < seq.size(); j++) {
            d += inst.d(xi, seq[j]);
            trips += y[j];
            if (inst.capacity * (trips + 1) < d) {
                ok = false;
                break;
            }
        }
    }
    assert(ok == maxflow_membership(inst, seq, xi, y));
    return ok;
}

std::vector<Piece> binding_pieces(const Instance &inst, const std::vector<std::vector<int>> &groups, int xi,
                                  bool minimal_only) {
    int m = static_cast<int>(groups.size());
    std::vector<long long> gd(m, 0);
    for (int i = 0; i < m; i++)
        for (int v : groups[i])
            gd[i] += inst.d(xi, v);
    long long C = inst.capacity;
    // k[i][j] for runs i..j
    std::vector<std::vector<int>> k(m, std::vector<int>(m, 0));
    for (int i = 0; i < m; i++) {
        long long d = 0;
        for (int j = i; j < m; j++) {
            d += gd[j];
            k[i][j] = static_cast<int>((d + C - 1) / C);
        }
    }
    std::vector<Piece> out;
    for (int i = 0; i < m; i++)
        for (int j = i; j < m; j++) {
            if (k[i][j] < 2)
                continue;
            if (minimal_only && i < j && (k[i + 1][j] >= k[i][j] || k[i][j - 1] >= k[i][j]))
                continue;
            out.push_back({i, j, k[i][j]});
        }
    return out;
}

PieceLp solve_piece_lp(const Instance &inst, const std::vector<std::vector<int>> &groups, int xi,
                       const RecourseWeights &weights, bool minimal_only) {
    PieceLp out;
    out.pieces = binding_pieces(inst, groups, xi, minimal_only);
    std::vector<int> members;
    std::vector<int> first_col;
    for (const auto &g : groups) {
        first_col.push_back(static_cast<int>(members.size()));
        members.insert(members.end(), g.begin(), g.end());
    }
    first_col.push_back(static_cast<int>(members.size()));
    out.y.assign(members.size(), 0);
    out.beta.assign(members.size(), 0.0);
    out.alpha.assign(out.pieces.size(), 0.0);
    out.value = 0;
    if (out.pieces.empty()) {
        out.feasible = true;
        return out;
    }
    LinearModel lp;
    for (int v : members)
        lp.add_variable({0.0, double(weights.b[v]), to_double(weights.w[v]), false, ""});
    for (const auto &p : out.pieces) {
        Row r;
        for (int c = first_col[p.first]; c < first_col[p.last + 1]; c++) {
            r.idx.push_back(c);
            r.val.push_back(1.0);
        }
        r.sense = Sense::Ge;
        r.rhs = p.vehicles - 1;
        lp.add_row(std::move(r));
    }
    SolveOutcome res = solve_lp(lp);
    if (res.status == SolveStatus::Infeasible)
        return out;
    if (res.status != SolveStatus::Optimal)
        throw std::runtime_error(std::string("recourse LP failed: ") + status_name(res.status));
    out.feasible = true;
    for (size_t c = 0; c < members.size(); c++) {
        double r = std::round(res.primal[c]);
        if (std::abs(res.primal[c] - r) > 1e-6)
            throw std::runtime_error("recourse LP returned a fractional vertex");
        out.y[c] = static_cast<int>(r);
        out.value += weights.w[members[c]] * Rational(out.y[c]);
        out.beta[c] = std::min(res.col_duals[c], 0.0);
    }
    out.alpha = res.row_duals;
    return out;
}

ScenarioOptimal scenario_optimal_recourse(const Instance &inst, const Route &route, const RecourseWeights &weights,
                                          bool minimal_only) {
    std::vector<std::vector<int>> groups;
    for (int v : route.customers)
        groups.push_back({v});
    ScenarioOptimal out;
    out.value = 0;
    out.policy.b = weights.b;
    out.policy.y.assign(inst.scenarios(), std::vector<int>(inst.n + 1, 0));
    out.breakdown = {Rational(0), std::vector<Rational>(inst.n + 1, Rational(0))};
    for (int xi = 0; xi < inst.scenarios(); xi++) {
        PieceLp lp = solve_piece_lp(inst, groups, xi, weights, minimal_only);
        if (!lp.feasible)
            throw InfeasibleRecourse("no recourse action within the bounds b");
        out.per_scenario.push_back(lp.value);
        out.value += inst.prob[xi] * lp.value;
        for (size_t c = 0; c < route.customers.size(); c++) {
            int v = route.customers[c];
            out.policy.y[xi][v] = lp.y[c];
            out.breakdown.per_customer[v] += inst.prob[xi] * weights.w[v] * Rational(lp.y[c]);
        }
    }
    out.breakdown.total = out.value;
    return out;
}

RecourseBreakdown route_recourse(const Instance &inst, const Route &route, RecourseKind kind,
                                 const RecourseWeights &weights) {
    if (kind == RecourseKind::Classical)
        return classical_recourse(inst, route).breakdown;
    return scenario_optimal_recourse(inst, route, weights, true).breakdown;
}

} // namespace vrpsd
