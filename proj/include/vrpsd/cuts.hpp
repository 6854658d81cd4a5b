#pragma once

#include "vrpsd/lp.hpp"
#include "vrpsd/model.hpp"
#include "vrpsd/recourse.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vrpsd {

enum class CutKind {
    Sec,
    Rci,
    AggregatedSri,
    ProjectedSri,
    SetCut,
    PartialRouteCut,
    PathCut,
    RouteCut,
    ClassicalBound,
};

const char *kind_name(CutKind k);

// sum theta[v] th_v + sum x[e] x_e + sum y[(xi,v)] y^xi_v  (sense)  rhs
struct Cut {
    CutKind kind = CutKind::Sec;
    std::vector<int> support;
    std::map<int, Rational> theta;
    std::map<int, Rational> x;
    std::map<std::pair<int, int>, Rational> y;
    Sense sense = Sense::Ge;
    Rational rhs;

    template <class T>
    T lhs(const std::vector<T> &xv, const std::vector<T> &th, const std::vector<std::vector<T>> *yv = nullptr) const {
        T total = 0;
        for (const auto &[v, c] : theta)
            total += convert<T>(c) * th[v];
        for (const auto &[e, c] : x)
            total += convert<T>(c) * xv[e];
        if (yv)
            for (const auto &[key, c] : y)
                total += convert<T>(c) * (*yv)[key.first][key.second];
        return total;
    }

    // Positive when the point violates the cut.
    template <class T>
    T violation(const std::vector<T> &xv, const std::vector<T> &th,
                const std::vector<std::vector<T>> *yv = nullptr) const {
        T a = lhs(xv, th, yv);
        T r = convert<T>(rhs);
        if (sense == Sense::Ge)
            return r - a;
        if (sense == Sense::Le)
            return a - r;
        return a > r ? a - r : r - a;
    }

    std::string serialize(const EdgeIndex &edges) const;

    template <class T> static T convert(const Rational &q) {
        if constexpr (std::is_same_v<T, double>)
            return q.get_d();
        else
            return T(q);
    }
};

// Affine function  constant + sum coeff[e] x_e.
struct AffineForm {
    std::map<int, long> coeff;
    long constant = 0;

    template <class T> T eval(const std::vector<T> &x) const {
        T total = T(constant);
        for (const auto &[e, c] : coeff)
            total += T(c) * x[e];
        return total;
    }
};

AffineForm wof_form(const EdgeIndex &edges, const PartialRoute &H);
AffineForm wdl_form(const EdgeIndex &edges, std::span<const int> S, int kprime);
// Equals 1 when seq is exactly one route of an integer x and at most 0 on
// every other integer routing plan.
AffineForm route_exact_form(const EdgeIndex &edges, const std::vector<int> &seq);

template <class T> T activation_wof(const EdgeIndex &edges, const std::vector<T> &x, const PartialRoute &H) {
    return wof_form(edges, H).eval(x);
}

template <class T> T activation_wdl(const EdgeIndex &edges, const std::vector<T> &x, std::span<const int> S, int kprime) {
    return wdl_form(edges, S, kprime).eval(x);
}

// theta(customers) >= L * form(x)
Cut ils_cut(CutKind kind, const std::vector<int> &customers, const Rational &L, const AffineForm &form);

// x(E(S)) <= |S| - k
Cut capacity_cut(const EdgeIndex &edges, std::span<const int> S, int k);

// (k_xi(S) + x(E(S)) - |S|) - y^xi(S)
template <class T>
T sri_violation(const Instance &inst, const EdgeIndex &edges, const std::vector<T> &x,
                const std::vector<std::vector<T>> &y, std::span<const int> S, int xi) {
    if (S.empty())
        throw std::invalid_argument("SRI on an empty set");
    T ys = 0;
    for (int v : S)
        ys += y[xi][v];
    return T(scenario_vehicles(inst, xi, S)) + inside_sum(edges, x, S) - T(long(S.size())) - ys;
}

struct AggregatedSri {
    std::vector<int> S;
    std::vector<int> scenarios;
};

std::optional<AggregatedSri> aggregate_sri(const Instance &inst, const EdgeIndex &edges, const std::vector<double> &x,
                                           const std::vector<std::vector<double>> &y, std::span<const int> S,
                                           double tol = 1e-6);

// sum_{xi} y^xi(S) - |Xi| x(E(S)) >= sum_{xi} (k_xi(S) - |S|)
Cut aggregated_sri_cut(const Instance &inst, const EdgeIndex &edges, const AggregatedSri &agg);

// sum phi_v theta_v >= sum x_coeffs[e] x_e + constant
struct ProjectedSriCut {
    std::map<int, Rational> phi;
    std::map<int, Rational> x_coeffs;
    Rational constant;

    Cut to_cut(CutKind kind, std::vector<int> support) const;
};

// sum_xi a[xi] . y^xi >= sum x_coeffs[e] x_e + constant
struct YInequality {
    std::vector<std::map<int, Rational>> a;
    std::map<int, Rational> x_coeffs;
    Rational constant;
};

// Empty when the projection is trivial.
std::optional<ProjectedSriCut> project_inequality(const YInequality &ineq, const RecourseWeights &weights,
                                                  const std::vector<Rational> &prob);

// Conic combination of SRIs on sets S (alpha[xi] per set) and of the bounds
// y^xi_v <= b_v (beta[xi][v] <= 0), as an inequality in y and x.
struct SriMultipliers {
    std::vector<std::pair<std::vector<int>, std::vector<Rational>>> alpha;
    std::vector<std::map<int, Rational>> beta;
};

YInequality combine_sris(const Instance &inst, const EdgeIndex &edges, const SriMultipliers &m,
                         const RecourseWeights &weights);

ProjectedSriCut projected_aggregated_sri(const Instance &inst, const EdgeIndex &edges, std::span<const int> S,
                                         std::span<const int> scenarios, const RecourseWeights &weights,
                                         bool max_over_all = false);

struct SetCutBundle {
    Rational L;
    std::vector<Rational> L_xi;
    std::vector<Rational> alpha;
    std::vector<std::map<int, Rational>> beta;
    Cut ils;
    std::optional<ProjectedSriCut> dominating;
};

class InfeasibleBound : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

SetCutBundle set_cut_bundle(const Instance &inst, const EdgeIndex &edges, std::span<const int> S, int kprime,
                            const RecourseWeights &weights);

struct PieceDual {
    std::vector<int> customers;
    int vehicles = 0;
    Rational alpha;
};

struct PartialRouteBundle {
    Rational L;
    std::vector<Rational> L_xi;
    std::vector<std::vector<PieceDual>> alpha;
    std::vector<std::map<int, Rational>> beta;
    Cut ils;
    std::optional<ProjectedSriCut> dominating;
};

PartialRouteBundle partial_route_bundle(const Instance &inst, const EdgeIndex &edges, const PartialRoute &H,
                                        const RecourseWeights &weights);

namespace testing {
// Replaces the projection coefficient by a deliberately wrong formula.
void set_phi_mutation(bool on);
bool phi_mutation();
} // namespace testing

} // namespace vrpsd
