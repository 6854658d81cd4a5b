#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace vrpsd {

enum class Sense { Le, Ge, Eq };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Variable {
    double lb = 0.0;
    double ub = kInf;
    double obj = 0.0;
    bool integer = false;
    std::string name;
};

struct Row {
    std::vector<int> idx;
    std::vector<double> val;
    Sense sense = Sense::Ge;
    double rhs = 0.0;
    std::string tag;

    double activity(const std::vector<double> &x) const;
    // Positive when x violates the row.
    double violation(const std::vector<double> &x) const;
};

class LinearModel {
  public:
    int add_variable(Variable v);
    int add_row(Row r);

    const std::vector<Variable> &variables() const { return vars_; }
    std::vector<Variable> &variables() { return vars_; }
    const std::vector<Row> &rows() const { return rows_; }
    int num_variables() const { return static_cast<int>(vars_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }

    // -1 when no row carries the tag.
    int find_row(const std::string &tag) const;
    bool has_integers() const;

  private:
    std::vector<Variable> vars_;
    std::vector<Row> rows_;
    std::unordered_map<std::string, int> tags_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, IterationLimit, Error };

const char *status_name(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::Error;
    std::vector<double> primal;
    // Row duals: >= rows nonnegative, <= rows nonpositive (minimization).
    std::vector<double> row_duals;
    // Reduced costs of the columns; negative at an active upper bound.
    std::vector<double> col_duals;
    double objective = kInf;
    double bound = -kInf;
    double seconds = 0.0;
    int rounds = 0;
    bool has_solution() const { return !primal.empty(); }
};

class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct LpOptions {
    double time_limit = kInf;
    bool simplex_only = true;
};

SolveOutcome solve_lp(const LinearModel &model, const LpOptions &opts = {});

// Given an integer candidate, returns rows it violates. An empty result
// accepts the candidate.
using Verifier = std::function<std::vector<Row>(const std::vector<double> &)>;

struct LazyOptions {
    double time_limit = kInf;
    bool check_contract = true;
    double contract_tol = 1e-7;
    std::function<void(const SolveOutcome &)> on_round;
};

// Outer loop: solve the MIP, verify the incumbent, append the returned rows
// to the model and repeat until the verifier is silent.
SolveOutcome solve_mip_with_lazy(LinearModel &model, const Verifier &verify, const LazyOptions &opts = {});

void write_lp_file(const LinearModel &model, const std::string &path);

} // namespace vrpsd
