#pragma once

#include "vrpsd/model.hpp"

#include <vector>

namespace vrpsd::test {

// Customers on a line at 1..n from the depot, unless costs are given.
inline Instance line_instance(int n, long long C, std::vector<std::vector<long long>> demands,
                              std::vector<Rational> prob = {}) {
    Instance inst;
    inst.name = "t";
    inst.n = n;
    inst.capacity = C;
    inst.cost.assign(n + 1, std::vector<long long>(n + 1, 0));
    for (int i = 0; i <= n; i++)
        for (int j = 0; j <= n; j++)
            inst.cost[i][j] = i > j ? i - j : j - i;
    for (auto &row : demands)
        row.insert(row.begin(), 0);
    inst.demand = std::move(demands);
    if (prob.empty())
        prob.assign(inst.demand.size(), ratio(1, long(inst.demand.size())));
    inst.prob = std::move(prob);
    return inst;
}

inline std::vector<double> as_double(const std::vector<int> &x) { return {x.begin(), x.end()}; }

} // namespace vrpsd::test
