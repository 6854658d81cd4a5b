#include "vrpsd/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace vrpsd {

namespace {

long long to_ll(const std::string &tok, const std::string &what) {
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception &) {
        throw InstanceError("expected integer for " + what + ", got '" + tok + "'");
    }
    if (pos != tok.size())
        throw InstanceError("expected integer for " + what + ", got '" + tok + "'");
    return v;
}

std::vector<std::vector<long long>> costs_from_coords(const std::vector<std::pair<long long, long long>> &pts) {
    size_t m = pts.size();
    std::vector<std::vector<long long>> c(m, std::vector<long long>(m, 0));
    for (size_t i = 0; i < m; i++)
        for (size_t j = 0; j < m; j++) {
            double dx = double(pts[i].first - pts[j].first);
            double dy = double(pts[i].second - pts[j].second);
            c[i][j] = std::llround(std::sqrt(dx * dx + dy * dy));
        }
    return c;
}

std::vector<std::vector<long long>> costs_from_triangle(const std::vector<long long> &tri, int n) {
    std::vector<std::vector<long long>> c(n + 1, std::vector<long long>(n + 1, 0));
    size_t at = 0;
    for (int i = 0; i <= n; i++)
        for (int j = 0; j <= i; j++) {
            c[i][j] = c[j][i] = tri[at++];
            if (i == j && tri[at - 1] != 0)
                throw InstanceError("COST_MATRIX diagonal must be zero");
        }
    return c;
}

struct Raw {
    std::string name;
    std::optional<long long> n, capacity, fleet, scenarios;
    std::vector<long long> triangle;
    std::vector<std::pair<long long, long long>> coords;
    bool has_matrix = false, has_coords = false;
    std::vector<std::string> prob;
    std::vector<long long> demands;
    bool has_prob = false, has_demands = false;
};

Instance assemble(const Raw &raw) {
    Instance inst;
    if (!raw.n || !raw.capacity || !raw.scenarios)
        throw InstanceError("N_CUSTOMERS, CAPACITY and N_SCENARIOS are required");
    if (*raw.n < 1)
        throw InstanceError("N_CUSTOMERS must be positive");
    if (*raw.scenarios < 1)
        throw InstanceError("N_SCENARIOS must be positive");
    inst.name = raw.name;
    inst.n = static_cast<int>(*raw.n);
    inst.capacity = *raw.capacity;
    if (raw.fleet)
        inst.fleet_size = static_cast<int>(*raw.fleet);
    int n = inst.n;
    long long N = *raw.scenarios;
    if (raw.has_matrix == raw.has_coords)
        throw InstanceError("exactly one of COST_MATRIX or COORDS is required");
    if (raw.has_matrix) {
        if (raw.triangle.size() != size_t(n + 1) * size_t(n + 2) / 2)
            throw InstanceError("COST_MATRIX must hold the lower triangle of an (n+1)x(n+1) matrix");
        inst.cost = costs_from_triangle(raw.triangle, n);
    } else {
        if (raw.coords.size() != size_t(n + 1))
            throw InstanceError("COORDS must hold n+1 points, depot first");
        inst.cost = costs_from_coords(raw.coords);
    }
    if (!raw.has_prob || raw.prob.size() != size_t(N))
        throw InstanceError("PROB must hold N_SCENARIOS entries");
    for (const auto &p : raw.prob) {
        try {
            inst.prob.push_back(parse_rational(p));
        } catch (const std::invalid_argument &e) {
            throw InstanceError(std::string("bad probability: ") + e.what());
        }
    }
    if (!raw.has_demands || raw.demands.size() != size_t(N) * size_t(n))
        throw InstanceError("DEMANDS must hold N_SCENARIOS rows of N_CUSTOMERS integers");
    inst.demand.assign(N, std::vector<long long>(n + 1, 0));
    for (long long xi = 0; xi < N; xi++)
        for (int v = 1; v <= n; v++)
            inst.demand[xi][v] = raw.demands[xi * n + (v - 1)];
    inst.validate();
    return inst;
}

Instance parse_text(const std::string &text) {
    std::vector<std::string> toks;
    {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            std::istringstream ls(line);
            std::string t;
            while (ls >> t) {
                if (!t.empty() && t.back() == ':')
                    t.pop_back();
                if (!t.empty())
                    toks.push_back(t);
            }
        }
    }
    Raw raw;
    size_t at = 0;
    auto next = [&](const std::string &what) -> const std::string & {
        if (at >= toks.size())
            throw InstanceError("unexpected end of file while reading " + what);
        return toks[at++];
    };
    auto need = [&](const std::optional<long long> &v, const std::string &key, const std::string &dep) {
        if (!v)
            throw InstanceError(key + " must come after " + dep);
        return *v;
    };
    while (at < toks.size()) {
        std::string key = toks[at++];
        if (key == "EOF")
            break;
        if (key == "NAME") {
            raw.name = next("NAME");
        } else if (key == "N_CUSTOMERS") {
            raw.n = to_ll(next(key), key);
        } else if (key == "CAPACITY") {
            raw.capacity = to_ll(next(key), key);
        } else if (key == "FLEET_SIZE") {
            raw.fleet = to_ll(next(key), key);
        } else if (key == "N_SCENARIOS") {
            raw.scenarios = to_ll(next(key), key);
        } else if (key == "COST_MATRIX") {
            long long n = need(raw.n, key, "N_CUSTOMERS");
            raw.has_matrix = true;
            for (long long i = 0; i < (n + 1) * (n + 2) / 2; i++)
                raw.triangle.push_back(to_ll(next(key), key));
        } else if (key == "COORDS") {
            long long n = need(raw.n, key, "N_CUSTOMERS");
            raw.has_coords = true;
            for (long long i = 0; i <= n; i++) {
                long long x = to_ll(next(key), key);
                long long y = to_ll(next(key), key);
                raw.coords.emplace_back(x, y);
            }
        } else if (key == "PROB") {
            long long N = need(raw.scenarios, key, "N_SCENARIOS");
            raw.has_prob = true;
            for (long long i = 0; i < N; i++)
                raw.prob.push_back(next(key));
        } else if (key == "DEMANDS") {
            long long n = need(raw.n, key, "N_CUSTOMERS");
            long long N = need(raw.scenarios, key, "N_SCENARIOS");
            raw.has_demands = true;
            for (long long i = 0; i < N * n; i++)
                raw.demands.push_back(to_ll(next(key), key));
        } else {
            throw InstanceError("unknown key '" + key + "'");
        }
    }
    return assemble(raw);
}

Instance parse_json(const std::string &text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw InstanceError(std::string("malformed JSON: ") + e.what());
    }
    Raw raw;
    auto integer = [&](const json &v, const std::string &what) -> long long {
        if (!v.is_number_integer())
            throw InstanceError("expected integer for " + what);
        return v.get<long long>();
    };
    try {
        for (auto &[key, val] : j.items()) {
            if (key == "NAME") {
                raw.name = val.get<std::string>();
            } else if (key == "N_CUSTOMERS") {
                raw.n = integer(val, key);
            } else if (key == "CAPACITY") {
                raw.capacity = integer(val, key);
            } else if (key == "FLEET_SIZE") {
                if (!val.is_null())
                    raw.fleet = integer(val, key);
            } else if (key == "N_SCENARIOS") {
                raw.scenarios = integer(val, key);
            } else if (key == "COST_MATRIX") {
                raw.has_matrix = true;
                for (const auto &row : val)
                    for (const auto &c : row)
                        raw.triangle.push_back(integer(c, key));
            } else if (key == "COORDS") {
                raw.has_coords = true;
                for (const auto &pt : val) {
                    if (pt.size() != 2)
                        throw InstanceError("COORDS entries must be pairs");
                    raw.coords.emplace_back(integer(pt[0], key), integer(pt[1], key));
                }
            } else if (key == "PROB") {
                raw.has_prob = true;
                for (const auto &p : val)
                    raw.prob.push_back(p.is_string() ? p.get<std::string>() : std::to_string(integer(p, key)));
            } else if (key == "DEMANDS") {
                raw.has_demands = true;
                size_t rows = 0;
                for (const auto &row : val) {
                    rows++;
                    if (raw.n && row.size() != size_t(*raw.n))
                        throw InstanceError("DEMANDS row length must equal N_CUSTOMERS");
                    for (const auto &d : row)
                        raw.demands.push_back(integer(d, key));
                }
                (void)rows;
            } else {
                throw InstanceError("unknown key '" + key + "'");
            }
        }
    } catch (const json::exception &e) {
        throw InstanceError(std::string("schema violation: ") + e.what());
    }
    return assemble(raw);
}

} // namespace

Rational Instance::expected_demand(int v) const {
    Rational total = 0;
    for (int xi = 0; xi < scenarios(); xi++)
        total += prob[xi] * to_rational(demand[xi][v]);
    return total;
}

bool Instance::needs_preprocessing() const {
    for (const auto &row : demand)
        for (int v = 1; v <= n; v++)
            if (row[v] > capacity)
                return true;
    return false;
}

void Instance::validate() const {
    if (n < 1)
        throw InstanceError("instance needs at least one customer");
    if (capacity <= 0)
        throw InstanceError("capacity must be positive");
    if (fleet_size && *fleet_size < 1)
        throw InstanceError("fleet size must be positive");
    if (cost.size() != size_t(n + 1))
        throw InstanceError("cost matrix has wrong dimension");
    for (int i = 0; i <= n; i++) {
        if (cost[i].size() != size_t(n + 1))
            throw InstanceError("cost matrix has wrong dimension");
        if (cost[i][i] != 0)
            throw InstanceError("cost matrix diagonal must be zero");
        for (int j = 0; j <= n; j++) {
            if (cost[i][j] < 0)
                throw InstanceError("negative cost");
            if (cost[i][j] != cost[j][i])
                throw InstanceError("cost matrix must be symmetric");
        }
    }
    if (demand.empty())
        throw InstanceError("instance needs at least one scenario");
    if (prob.size() != demand.size())
        throw InstanceError("one probability per scenario is required");
    Rational total = 0;
    for (const auto &p : prob) {
        if (p < 0)
            throw InstanceError("negative probability");
        total += p;
    }
    if (total != 1)
        throw InstanceError("probabilities sum to " + to_string(total) + ", not 1");
    for (const auto &row : demand) {
        if (row.size() != size_t(n + 1))
            throw InstanceError("demand row has wrong length");
        for (int v = 1; v <= n; v++)
            if (row[v] < 0)
                throw InstanceError("negative demand");
    }
}

void Instance::validate_for(FirstStage fs) const {
    validate();
    if (fs == FirstStage::Cvrp && !fleet_size)
        throw InstanceError("FLEET_SIZE is required for the cvrp first-stage set");
}

Instance parse_instance(const std::string &text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return parse_json(text);
    return parse_text(text);
}

Instance read_instance(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InstanceError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Instance inst = parse_instance(ss.str());
    if (inst.name.empty())
        inst.name = path;
    return inst;
}

std::string format_instance(const Instance &inst) {
    std::ostringstream out;
    out << "NAME " << (inst.name.empty() ? "unnamed" : inst.name) << "\n";
    out << "N_CUSTOMERS " << inst.n << "\n";
    out << "CAPACITY " << inst.capacity << "\n";
    if (inst.fleet_size)
        out << "FLEET_SIZE " << *inst.fleet_size << "\n";
    out << "COST_MATRIX\n";
    for (int i = 0; i <= inst.n; i++) {
        for (int j = 0; j <= i; j++)
            out << (j ? " " : "") << inst.cost[i][j];
        out << "\n";
    }
    out << "N_SCENARIOS " << inst.scenarios() << "\n";
    out << "PROB";
    for (const auto &p : inst.prob)
        out << " " << to_string(p);
    out << "\nDEMANDS\n";
    for (const auto &row : inst.demand) {
        for (int v = 1; v <= inst.n; v++)
            out << (v > 1 ? " " : "") << row[v];
        out << "\n";
    }
    out << "EOF\n";
    return out.str();
}

Preprocessed preprocess_large_demands(const Instance &inst) {
    Preprocessed out{inst, Rational(0)};
    long long C = inst.capacity;
    for (int xi = 0; xi < inst.scenarios(); xi++)
        for (int v = 1; v <= inst.n; v++) {
            long long d = inst.demand[xi][v];
            if (d <= C)
                continue;
            long long trips = d / C;
            long long residual = d - trips * C;
            if (residual == 0) {
                residual = C;
                trips--;
            }
            out.inst.demand[xi][v] = residual;
            out.base_cost += inst.prob[xi] * to_rational(2 * inst.c(0, v) * trips);
        }
    return out;
}

int min_vehicles(std::span<const int> S, std::span<const long long> d, long long C) {
    if (S.empty())
        throw std::invalid_argument("min_vehicles of an empty set");
    long long total = 0;
    for (int v : S)
        total += d[v];
    return static_cast<int>((total + C - 1) / C);
}

int scenario_vehicles(const Instance &inst, int xi, std::span<const int> S) {
    return min_vehicles(S, inst.demand[xi], inst.capacity);
}

int expected_vehicles(const Instance &inst, std::span<const int> S) {
    if (S.empty())
        throw std::invalid_argument("expected_vehicles of an empty set");
    Rational total = 0;
    for (int v : S)
        total += inst.expected_demand(v);
    return static_cast<int>(ceil_of(total / to_rational(inst.capacity)));
}

EdgeIndex::EdgeIndex(int n) : nodes_(n + 1), offset_(n + 1, 0) {
    for (int u = 0; u <= n; u++) {
        offset_[u] = static_cast<int>(ends_.size()) - (u + 1);
        for (int v = u + 1; v <= n; v++)
            ends_.emplace_back(u, v);
    }
}

int EdgeIndex::id(int u, int v) const {
    if (u > v)
        std::swap(u, v);
    return offset_[u] + v;
}

std::vector<int> Route::sequence() const {
    if (orientation == Orientation::Forward)
        return customers;
    return {customers.rbegin(), customers.rend()};
}

Route Route::reversed() const {
    Route r = *this;
    r.orientation = orientation == Orientation::Forward ? Orientation::Reverse : Orientation::Forward;
    return r;
}

long long route_cost(const Instance &inst, const std::vector<int> &seq) {
    long long total = 0;
    int prev = 0;
    for (int v : seq) {
        total += inst.c(prev, v);
        prev = v;
    }
    return total + inst.c(prev, 0);
}

RoutingPlan routes_of(const EdgeIndex &edges, std::span<const int> x) {
    int n = edges.nodes() - 1;
    std::vector<std::vector<int>> adj(n + 1);
    std::vector<int> degree(n + 1, 0);
    for (int e = 0; e < edges.size(); e++) {
        int val = x[e];
        if (val == 0)
            continue;
        if (val == 2 && !edges.is_depot_edge(e))
            throw RoutingError(RoutingError::Kind::DepotFreeCycle, {edges.u(e), edges.v(e)},
                               "depot-free cycle");
        if (val < 0 || val > 2)
            throw RoutingError(RoutingError::Kind::Multiplicity, {},
                               "edge {" + std::to_string(edges.u(e)) + "," + std::to_string(edges.v(e)) +
                                   "} has multiplicity " + std::to_string(val));
        for (int k = 0; k < val; k++) {
            adj[edges.u(e)].push_back(edges.v(e));
            adj[edges.v(e)].push_back(edges.u(e));
        }
        degree[edges.u(e)] += val;
        degree[edges.v(e)] += val;
    }
    for (int v = 1; v <= n; v++)
        if (degree[v] != 2)
            throw RoutingError(RoutingError::Kind::Degree, {v},
                               "customer " + std::to_string(v) + " has degree " + std::to_string(degree[v]));

    RoutingPlan plan;
    plan.x.assign(x.begin(), x.end());
    std::vector<bool> seen(n + 1, false);
    std::vector<int> starts = adj[0];
    std::sort(starts.begin(), starts.end());
    for (int first : starts) {
        if (seen[first])
            continue;
        Route r;
        int prev = 0, cur = first;
        while (cur != 0) {
            seen[cur] = true;
            r.customers.push_back(cur);
            int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
            if (adj[cur][0] == prev && adj[cur][1] == prev)
                nxt = prev;
            prev = cur;
            cur = nxt;
        }
        if (r.customers.size() > 1 && r.customers.front() > r.customers.back())
            std::reverse(r.customers.begin(), r.customers.end());
        plan.routes.push_back(std::move(r));
    }
    for (int v = 1; v <= n; v++)
        if (!seen[v]) {
            std::vector<int> cycle;
            int prev = -1, cur = v;
            do {
                seen[cur] = true;
                cycle.push_back(cur);
                int nxt = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
                prev = cur;
                cur = nxt;
            } while (cur != v);
            throw RoutingError(RoutingError::Kind::DepotFreeCycle, cycle, "depot-free cycle");
        }
    return plan;
}

std::vector<int> encode_routes(const EdgeIndex &edges, const std::vector<Route> &routes) {
    std::vector<int> x(edges.size(), 0);
    for (const auto &r : routes) {
        int prev = 0;
        for (int v : r.customers) {
            x[edges.id(prev, v)]++;
            prev = v;
        }
        x[edges.id(prev, 0)]++;
    }
    return x;
}

PartialRoute::PartialRoute(std::vector<std::vector<int>> sets) : sets_(std::move(sets)) {
    std::vector<int> all;
    for (size_t i = 0; i < sets_.size(); i++) {
        if (sets_[i].empty())
            throw std::invalid_argument("partial route with an empty set");
        if (i > 0 && sets_[i].size() > 1 && sets_[i - 1].size() > 1)
            throw std::invalid_argument("partial route with consecutive non-singleton sets");
        all.insert(all.end(), sets_[i].begin(), sets_[i].end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw std::invalid_argument("partial route sets overlap");
}

PartialRoute PartialRoute::of_route(const std::vector<int> &seq) {
    std::vector<std::vector<int>> sets;
    for (int v : seq)
        sets.push_back({v});
    return PartialRoute(std::move(sets));
}

std::vector<int> PartialRoute::customers() const {
    std::vector<int> all;
    for (const auto &s : sets_)
        all.insert(all.end(), s.begin(), s.end());
    return all;
}

bool PartialRoute::all_singletons() const {
    return std::all_of(sets_.begin(), sets_.end(), [](const auto &s) { return s.size() == 1; });
}

bool adheres(const Route &r, const PartialRoute &H) {
    std::vector<int> seq = r.customers;
    size_t total = 0;
    for (const auto &s : H.sets())
        total += s.size();
    if (seq.size() != total)
        return false;
    auto fits = [&](const std::vector<int> &order) {
        size_t at = 0;
        for (const auto &s : H.sets()) {
            std::vector<int> a(order.begin() + at, order.begin() + at + s.size());
            std::vector<int> b = s;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b)
                return false;
            at += s.size();
        }
        return true;
    };
    if (fits(seq))
        return true;
    std::reverse(seq.begin(), seq.end());
    return fits(seq);
}

} // namespace vrpsd
