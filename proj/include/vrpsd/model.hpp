#pragma once

#include "vrpsd/rational.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrpsd {

class InstanceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class FirstStage { Cvrp, Subtour };

// Depot is node 0, customers are 1..n. Demand rows are indexed by node, with
// entry 0 unused and kept at zero.
struct Instance {
    std::string name;
    int n = 0;
    std::vector<std::vector<long long>> cost;
    long long capacity = 0;
    std::optional<int> fleet_size;
    std::vector<std::vector<long long>> demand;
    std::vector<Rational> prob;

    int scenarios() const { return static_cast<int>(demand.size()); }
    long long c(int u, int v) const { return cost[u][v]; }
    long long d(int xi, int v) const { return demand[xi][v]; }

    Rational expected_demand(int v) const;
    bool needs_preprocessing() const;

    // Throws InstanceError on any broken invariant.
    void validate() const;
    void validate_for(FirstStage fs) const;
};

Instance parse_instance(const std::string &text);
Instance read_instance(const std::string &path);
std::string format_instance(const Instance &inst);

struct Preprocessed {
    Instance inst;
    Rational base_cost;
};

Preprocessed preprocess_large_demands(const Instance &inst);

// ceil(d(S)/C); 0 for zero demand. Throws on empty S.
int min_vehicles(std::span<const int> S, std::span<const long long> d, long long C);
int scenario_vehicles(const Instance &inst, int xi, std::span<const int> S);
int expected_vehicles(const Instance &inst, std::span<const int> S);

// Undirected edges {u,v}, u<v, over nodes 0..n, numbered row by row.
class EdgeIndex {
  public:
    explicit EdgeIndex(int n);

    int nodes() const { return nodes_; }
    int size() const { return static_cast<int>(ends_.size()); }
    int id(int u, int v) const;
    int u(int e) const { return ends_[e].first; }
    int v(int e) const { return ends_[e].second; }
    bool is_depot_edge(int e) const { return ends_[e].first == 0; }

  private:
    int nodes_;
    std::vector<int> offset_;
    std::vector<std::pair<int, int>> ends_;
};

enum class Orientation { Forward, Reverse };

struct Route {
    std::vector<int> customers;
    Orientation orientation = Orientation::Forward;

    // Customers in traversal order.
    std::vector<int> sequence() const;
    Route reversed() const;
    int size() const { return static_cast<int>(customers.size()); }
};

long long route_cost(const Instance &inst, const std::vector<int> &seq);

struct RoutingPlan {
    std::vector<Route> routes;
    std::vector<int> x;
};

class RoutingError : public std::runtime_error {
  public:
    enum class Kind { Degree, Multiplicity, DepotFreeCycle };
    RoutingError(Kind kind, std::vector<int> cycle, const std::string &what)
        : std::runtime_error(what), kind(kind), cycle(std::move(cycle)) {}
    Kind kind;
    std::vector<int> cycle;
};

RoutingPlan routes_of(const EdgeIndex &edges, std::span<const int> x);
std::vector<int> encode_routes(const EdgeIndex &edges, const std::vector<Route> &routes);

class PartialRoute {
  public:
    PartialRoute() = default;
    explicit PartialRoute(std::vector<std::vector<int>> sets);
    static PartialRoute of_route(const std::vector<int> &seq);

    const std::vector<std::vector<int>> &sets() const { return sets_; }
    int size() const { return static_cast<int>(sets_.size()); }
    std::vector<int> customers() const;
    bool all_singletons() const;

  private:
    std::vector<std::vector<int>> sets_;
};

bool adheres(const Route &r, const PartialRoute &H);

// Sum of x over edges with both ends in S (customers only).
template <class T>
T inside_sum(const EdgeIndex &edges, const std::vector<T> &x, std::span<const int> S) {
    T total = 0;
    for (size_t i = 0; i < S.size(); i++)
        for (size_t j = i + 1; j < S.size(); j++)
            total += x[edges.id(S[i], S[j])];
    return total;
}

// Sum of x over edges between disjoint sets A and B.
template <class T>
T between_sum(const EdgeIndex &edges, const std::vector<T> &x, std::span<const int> A,
              std::span<const int> B) {
    T total = 0;
    for (int a : A)
        for (int b : B)
            total += x[edges.id(a, b)];
    return total;
}

} // namespace vrpsd
