#include "vrpsd/oracles.hpp"

#include "vrpsd/lp.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace vrpsd {

namespace {

// All orders of the given customers, one per reversal pair.
void for_each_order(std::vector<int> items, const std::function<void(const std::vector<int> &)> &fn) {
    std::sort(items.begin(), items.end());
    do {
        if (items.size() <= 1 || items.front() < items.back())
            fn(items);
    } while (std::next_permutation(items.begin(), items.end()));
}

std::vector<int> members(unsigned mask, int n) {
    std::vector<int> out;
    for (int v = 1; v <= n; v++)
        if (mask & (1u << (v - 1)))
            out.push_back(v);
    return out;
}

// Scenario-optimal recourse per scenario via the load recursion, on weights
// scaled to integers by `scale`.
std::optional<long long> load_dp(const Instance &inst, const std::vector<int> &seq, int xi,
                                 const std::vector<long long> &w, const std::vector<int> &b) {
    const long long INF = std::numeric_limits<long long>::max() / 4;
    long long C = inst.capacity;
    std::vector<long long> cost(C + 1, INF), next(C + 1);
    cost[0] = 0;
    for (int v : seq) {
        std::fill(next.begin(), next.end(), INF);
        long long d = inst.d(xi, v);
        for (long long load = 0; load <= C; load++) {
            if (cost[load] >= INF)
                continue;
            for (int y = 0; y <= b[v]; y++) {
                long long after = std::max(0LL, load + d - C * y);
                if (after > C)
                    continue;
                next[after] = std::min(next[after], cost[load] + w[v] * y);
            }
        }
        std::swap(cost, next);
    }
    long long best = *std::min_element(cost.begin(), cost.end());
    if (best >= INF)
        return std::nullopt;
    return best;
}

struct ScaledWeights {
    std::vector<long long> w;
    mpz_class scale;
};

ScaledWeights scale_weights(const RecourseWeights &weights) {
    ScaledWeights out;
    out.scale = 1;
    for (const auto &q : weights.w)
        mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), q.get_den_mpz_t());
    for (const auto &q : weights.w) {
        Rational s = q * Rational(out.scale);
        out.w.push_back(s.get_num().get_si());
    }
    return out;
}

} // namespace

std::optional<Rational> load_dp_scenario_optimal(const Instance &inst, const std::vector<int> &seq,
                                                 const RecourseWeights &weights) {
    ScaledWeights sw = scale_weights(weights);
    Rational total = 0;
    for (int xi = 0; xi < inst.scenarios(); xi++) {
        auto v = load_dp(inst, seq, xi, sw.w, weights.b);
        if (!v)
            return std::nullopt;
        total += inst.prob[xi] * to_rational(*v);
    }
    return total / Rational(sw.scale);
}

std::optional<Rational> brute_force_scenario_optimal(const Instance &inst, const std::vector<int> &seq,
                                                     const RecourseWeights &weights) {
    if (seq.size() > 6)
        throw std::invalid_argument("brute force limited to six customers");
    Rational total = 0;
    for (int xi = 0; xi < inst.scenarios(); xi++) {
        std::vector<int> y(seq.size(), 0);
        std::optional<Rational> best;
        while (true) {
            if (is_recourse_action(inst, seq, xi, y)) {
                Rational c = 0;
                for (size_t i = 0; i < seq.size(); i++)
                    c += weights.w[seq[i]] * Rational(y[i]);
                if (!best || c < *best)
                    best = c;
            }
            size_t i = 0;
            while (i < seq.size() && y[i] == weights.b[seq[i]])
                y[i++] = 0;
            if (i == seq.size())
                break;
            y[i]++;
        }
        if (!best)
            return std::nullopt;
        total += inst.prob[xi] * *best;
    }
    return total;
}

bool hull_integrality_probe(const Instance &inst, const std::vector<int> &seq, const std::vector<int> &b,
                            int trials, Rng &rng) {
    if (seq.size() > 8)
        throw std::invalid_argument("integrality probe limited to eight customers");
    boost::random::uniform_int_distribution<int> num(0, 30), den(1, 7), scen(0, inst.scenarios() - 1);
    bool all = true;
    for (int t = 0; t < trials; t++) {
        int xi = scen(rng);
        LinearModel lp;
        for (size_t i = 0; i < seq.size(); i++) {
            double w = double(num(rng)) / double(den(rng));
            lp.add_variable({0.0, double(b[i]), w, false, ""});
        }
        for (size_t i = 0; i < seq.size(); i++) {
            long long d = 0;
            for (size_t j = i; j < seq.size(); j++) {
                d += inst.d(xi, seq[j]);
                long long k = (d + inst.capacity - 1) / inst.capacity;
                if (k < 2)
                    continue;
                Row r;
                for (size_t c = i; c <= j; c++) {
                    r.idx.push_back(static_cast<int>(c));
                    r.val.push_back(1.0);
                }
                r.rhs = double(k - 1);
                lp.add_row(std::move(r));
            }
        }
        SolveOutcome res = solve_lp(lp);
        if (res.status == SolveStatus::Infeasible)
            continue;
        if (res.status != SolveStatus::Optimal)
            return false;
        for (double v : res.primal)
            if (std::abs(v - std::round(v)) > 1e-6)
                all = false;
    }
    return all;
}

bool maxflow_membership(const Instance &inst, const std::vector<int> &seq, int xi, std::span<const int> y) {
    using namespace boost;
    using Traits = adjacency_list_traits<vecS, vecS, directedS>;
    using Graph = adjacency_list<
        vecS, vecS, directedS, no_property,
        property<edge_capacity_t, long long,
                 property<edge_residual_capacity_t, long long, property<edge_reverse_t, Traits::edge_descriptor>>>>;
    int l = static_cast<int>(seq.size());
    int depot = 0, source = l + 1, sink = l + 2;
    Graph g(l + 3);
    auto cap = get(edge_capacity, g);
    auto rev = get(edge_reverse, g);
    auto arc = [&](int a, int b, long long c) {
        auto e1 = add_edge(a, b, g).first;
        auto e2 = add_edge(b, a, g).first;
        cap[e1] = c;
        cap[e2] = 0;
        rev[e1] = e2;
        rev[e2] = e1;
    };
    long long C = inst.capacity, total = 0;
    arc(depot, 1, C);
    for (int i = 1; i < l; i++)
        arc(i, i + 1, C);
    arc(l, depot, C);
    for (int i = 1; i <= l; i++) {
        arc(i, depot, C * y[i - 1]);
        long long d = inst.d(xi, seq[i - 1]);
        arc(source, i, d);
        total += d;
    }
    arc(depot, sink, total);
    long long flow = edmonds_karp_max_flow(g, source, sink);
    return flow == total;
}

std::vector<std::vector<Route>> enumerate_plans(const Instance &inst, FirstStage fs) {
    int n = inst.n;
    std::vector<std::vector<Route>> plans;
    std::vector<int> label(n + 1, 0);
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> assign = [&](int v) {
        if (v > n) {
            if (fs == FirstStage::Cvrp) {
                if (int(blocks.size()) != *inst.fleet_size)
                    return;
                for (const auto &blk : blocks)
                    if (expected_vehicles(inst, blk) > 1)
                        return;
            }
            std::vector<Route> cur;
            std::function<void(size_t)> order = [&](size_t i) {
                if (i == blocks.size()) {
                    plans.push_back(cur);
                    return;
                }
                for_each_order(blocks[i], [&](const std::vector<int> &seq) {
                    cur.push_back(Route{seq, Orientation::Forward});
                    order(i + 1);
                    cur.pop_back();
                });
            };
            order(0);
            return;
        }
        for (size_t i = 0; i < blocks.size(); i++) {
            blocks[i].push_back(v);
            assign(v + 1);
            blocks[i].pop_back();
        }
        blocks.push_back({v});
        assign(v + 1);
        blocks.pop_back();
    };
    assign(1);
    return plans;
}

EnumeratedOptimum enumerate_optimal(const Instance &raw, const SolverConfig &cfg) {
    if (raw.n > 8)
        throw std::invalid_argument("enumeration limited to eight customers");
    Preprocessed pre = preprocess_large_demands(raw);
    const Instance &inst = pre.inst;
    if (cfg.first_stage == FirstStage::Cvrp)
        inst.validate_for(FirstStage::Cvrp);
    RecourseWeights weights = make_weights(inst, cfg.weights, cfg.b);
    int n = inst.n;
    unsigned full = (1u << n) - 1;

    std::vector<std::optional<Rational>> best(full + 1);
    std::vector<std::vector<int>> best_seq(full + 1);
    for (unsigned mask = 1; mask <= full; mask++) {
        std::vector<int> blk = members(mask, n);
        if (cfg.first_stage == FirstStage::Cvrp && expected_vehicles(inst, blk) > 1)
            continue;
        for_each_order(blk, [&](const std::vector<int> &seq) {
            Rational q;
            if (cfg.recourse == RecourseKind::Classical) {
                q = classical_recourse(inst, Route{seq, Orientation::Forward}).breakdown.total;
            } else {
                auto v = load_dp_scenario_optimal(inst, seq, weights);
                if (!v)
                    return;
                q = *v;
            }
            Rational total = to_rational(route_cost(inst, seq)) + q;
            if (!best[mask] || total < *best[mask]) {
                best[mask] = total;
                best_seq[mask] = seq;
            }
        });
    }

    // f[mask][r]: cheapest cover of mask by exactly r routes (r unrestricted
    // under the subtour set, stored at r = 0).
    bool fixed = cfg.first_stage == FirstStage::Cvrp;
    int R = fixed ? *inst.fleet_size : 0;
    std::vector<std::vector<std::optional<Rational>>> f(full + 1, std::vector<std::optional<Rational>>(R + 1));
    std::vector<std::vector<unsigned>> pick(full + 1, std::vector<unsigned>(R + 1, 0));
    f[0][0] = Rational(0);
    for (unsigned mask = 1; mask <= full; mask++) {
        unsigned low = mask & (~mask + 1);
        for (unsigned sub = mask; sub; sub = (sub - 1) & mask) {
            if (!(sub & low) || !best[sub])
                continue;
            unsigned rest = mask & ~sub;
            for (int r = fixed ? 1 : 0; r <= R; r++) {
                int rr = fixed ? r - 1 : 0;
                if (!f[rest][rr])
                    continue;
                Rational val = *f[rest][rr] + *best[sub];
                if (!f[mask][r] || val < *f[mask][r]) {
                    f[mask][r] = val;
                    pick[mask][r] = sub;
                }
            }
        }
    }
    EnumeratedOptimum out;
    if (!f[full][R])
        return out;
    out.feasible = true;
    out.value = *f[full][R] + pre.base_cost;
    unsigned mask = full;
    int r = R;
    while (mask) {
        unsigned sub = pick[mask][r];
        out.plan.push_back(Route{best_seq[sub], Orientation::Forward});
        mask &= ~sub;
        if (fixed)
            r--;
    }
    return out;
}

} // namespace vrpsd
