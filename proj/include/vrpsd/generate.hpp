#pragma once

#include "vrpsd/model.hpp"

#include <cstdint>

namespace vrpsd {

struct GenParams {
    int n = 5;
    int scenarios = 3;
    long long capacity = 20;
    std::uint64_t seed = 1;
    int grid = 100;
    // Demands are drawn uniformly from [mean - spread, mean + spread],
    // clipped at zero. A negative mean selects capacity / 4.
    long long demand_mean = -1;
    long long demand_spread = -1;
};

// Customers on distinct grid points away from the central depot, rounded
// Euclidean costs, uniform probabilities and a fleet size from first-fit
// decreasing packing of the expected demands.
Instance generate_instance(const GenParams &params);

} // namespace vrpsd
