#include "vrpsd/generate.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace vrpsd {

Instance generate_instance(const GenParams &params) {
    if (params.n < 1 || params.scenarios < 1 || params.capacity < 1 || params.grid < 2)
        throw std::invalid_argument("generator needs n >= 1, N >= 1, C >= 1 and grid >= 2");
    if ((params.grid + 1) * (params.grid + 1) - 1 < params.n)
        throw std::invalid_argument("grid too small for the requested number of customers");
    boost::random::mt19937_64 rng(params.seed);
    boost::random::uniform_int_distribution<int> coord(0, params.grid);

    std::vector<std::pair<int, int>> pts{{params.grid / 2, params.grid / 2}};
    std::set<std::pair<int, int>> used{pts[0]};
    while (int(pts.size()) <= params.n) {
        std::pair<int, int> p{coord(rng), coord(rng)};
        if (used.insert(p).second)
            pts.push_back(p);
    }

    Instance inst;
    inst.name = "gen-n" + std::to_string(params.n) + "-N" + std::to_string(params.scenarios) + "-s" +
                std::to_string(params.seed);
    inst.n = params.n;
    inst.capacity = params.capacity;
    inst.cost.assign(params.n + 1, std::vector<long long>(params.n + 1, 0));
    for (int i = 0; i <= params.n; i++)
        for (int j = 0; j <= params.n; j++) {
            double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
            inst.cost[i][j] = std::llround(std::sqrt(dx * dx + dy * dy));
        }

    long long mean = params.demand_mean >= 0 ? params.demand_mean : std::max(1LL, params.capacity / 4);
    long long spread = params.demand_spread >= 0 ? params.demand_spread : mean;
    boost::random::uniform_int_distribution<long long> dem(std::max(0LL, mean - spread), mean + spread);
    inst.demand.assign(params.scenarios, std::vector<long long>(params.n + 1, 0));
    for (auto &row : inst.demand)
        for (int v = 1; v <= params.n; v++)
            row[v] = dem(rng);
    inst.prob.assign(params.scenarios, ratio(1, params.scenarios));

    std::vector<Rational> expected;
    for (int v = 1; v <= params.n; v++)
        expected.push_back(inst.expected_demand(v));
    std::sort(expected.begin(), expected.end(), [](const Rational &a, const Rational &b) { return a > b; });
    std::vector<Rational> bins;
    for (const auto &d : expected) {
        auto it = std::find_if(bins.begin(), bins.end(),
                               [&](const Rational &load) { return load + d <= to_rational(params.capacity); });
        if (it == bins.end())
            bins.push_back(d);
        else
            *it += d;
    }
    inst.fleet_size = int(bins.size());
    inst.validate();
    return inst;
}

} // namespace vrpsd
