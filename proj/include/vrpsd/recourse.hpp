#pragma once

#include "vrpsd/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace vrpsd {

enum class RecourseKind { Classical, ScenarioOptimal };
enum class WeightKind { Classical, Preventive };

// Per node, entry 0 unused.
struct RecourseWeights {
    std::vector<Rational> w;
    std::vector<int> b;
};

RecourseWeights classical_weights(const Instance &inst, int b = 1);
RecourseWeights preventive_weights(const Instance &inst, int b = 1);
RecourseWeights make_weights(const Instance &inst, WeightKind kind, int b);

struct RecourseBreakdown {
    Rational total;
    std::vector<Rational> per_customer;
};

// y[xi][v], v a node id.
struct RecoursePolicy {
    std::vector<std::vector<int>> y;
    std::vector<int> b;
};

// Failure counts per position of seq, by load simulation.
std::vector<int> simulate_classical(const Instance &inst, const std::vector<int> &seq, int xi);

// Failure counts per position from the capacity-crossing indicator formula.
// Accepts demands above capacity.
std::vector<int> classical_failures(const Instance &inst, const std::vector<int> &seq, int xi);

// Expected cost of the classical policy along seq in its given direction.
RecourseBreakdown classical_recourse_directed(const Instance &inst, const std::vector<int> &seq);

struct ClassicalResult {
    RecourseBreakdown breakdown;
    Orientation orientation = Orientation::Forward;
};

// Cheaper orientation, forward on ties.
ClassicalResult classical_recourse(const Instance &inst, const Route &route);

// y is indexed by position along seq. Throws on negative entries.
bool is_recourse_action(const Instance &inst, const std::vector<int> &seq, int xi, std::span<const int> y);

// A contiguous run groups[first..last] of a sequence of customer groups.
struct Piece {
    int first = 0;
    int last = 0;
    int vehicles = 0;
};

// Pieces whose vehicle count is at least 2, optionally only the minimal ones
// (every proper sub-run needs strictly fewer vehicles).
std::vector<Piece> binding_pieces(const Instance &inst, const std::vector<std::vector<int>> &groups, int xi,
                                  bool minimal_only);

// Optimal primal and dual of  min w'y  s.t. y(piece) >= k(piece) - 1 for the
// binding pieces, 0 <= y <= b, for one scenario.
struct PieceLp {
    bool feasible = false;
    std::vector<Piece> pieces;
    std::vector<int> y;
    Rational value;
    std::vector<double> alpha;
    std::vector<double> beta;
};

PieceLp solve_piece_lp(const Instance &inst, const std::vector<std::vector<int>> &groups, int xi,
                       const RecourseWeights &weights, bool minimal_only);

struct ScenarioOptimal {
    Rational value;
    std::vector<Rational> per_scenario;
    RecoursePolicy policy;
    RecourseBreakdown breakdown;
};

class InfeasibleRecourse : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

ScenarioOptimal scenario_optimal_recourse(const Instance &inst, const Route &route, const RecourseWeights &weights,
                                          bool minimal_only = false);

// Route recourse under the selected recourse function.
RecourseBreakdown route_recourse(const Instance &inst, const Route &route, RecourseKind kind,
                                 const RecourseWeights &weights);

} // namespace vrpsd
