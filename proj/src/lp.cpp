#include "vrpsd/lp.hpp"

#include <Highs.h>

#include <chrono>
#include <cmath>

namespace vrpsd {

double Row::activity(const std::vector<double> &x) const {
    double a = 0.0;
    for (size_t k = 0; k < idx.size(); k++)
        a += val[k] * x[idx[k]];
    return a;
}

double Row::violation(const std::vector<double> &x) const {
    double a = activity(x);
    switch (sense) {
    case Sense::Ge:
        return rhs - a;
    case Sense::Le:
        return a - rhs;
    case Sense::Eq:
        return std::abs(a - rhs);
    }
    return 0.0;
}

int LinearModel::add_variable(Variable v) {
    vars_.push_back(std::move(v));
    return static_cast<int>(vars_.size()) - 1;
}

int LinearModel::add_row(Row r) {
    int id = static_cast<int>(rows_.size());
    if (!r.tag.empty())
        tags_.emplace(r.tag, id);
    rows_.push_back(std::move(r));
    return id;
}

int LinearModel::find_row(const std::string &tag) const {
    auto it = tags_.find(tag);
    return it == tags_.end() ? -1 : it->second;
}

bool LinearModel::has_integers() const {
    for (const auto &v : vars_)
        if (v.integer)
            return true;
    return false;
}

const char *status_name(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal:
        return "optimal";
    case SolveStatus::Infeasible:
        return "infeasible";
    case SolveStatus::Unbounded:
        return "unbounded";
    case SolveStatus::TimeLimit:
        return "time_limit";
    case SolveStatus::IterationLimit:
        return "iteration_limit";
    case SolveStatus::Error:
        return "error";
    }
    return "error";
}

namespace {

HighsLp to_highs(const LinearModel &model, bool integral) {
    HighsLp lp;
    int nc = model.num_variables();
    int nr = model.num_rows();
    lp.num_col_ = nc;
    lp.num_row_ = nr;
    for (const auto &v : model.variables()) {
        lp.col_cost_.push_back(v.obj);
        lp.col_lower_.push_back(v.lb == -kInf ? -kHighsInf : v.lb);
        lp.col_upper_.push_back(v.ub == kInf ? kHighsInf : v.ub);
    }
    lp.a_matrix_.format_ = MatrixFormat::kRowwise;
    lp.a_matrix_.num_col_ = nc;
    lp.a_matrix_.num_row_ = nr;
    lp.a_matrix_.start_.assign(1, 0);
    for (const auto &r : model.rows()) {
        for (size_t k = 0; k < r.idx.size(); k++) {
            if (r.val[k] == 0.0)
                continue;
            lp.a_matrix_.index_.push_back(r.idx[k]);
            lp.a_matrix_.value_.push_back(r.val[k]);
        }
        lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
        lp.row_lower_.push_back(r.sense == Sense::Le ? -kHighsInf : r.rhs);
        lp.row_upper_.push_back(r.sense == Sense::Ge ? kHighsInf : r.rhs);
    }
    lp.a_matrix_.ensureColwise();
    if (integral) {
        lp.integrality_.resize(nc, HighsVarType::kContinuous);
        for (int j = 0; j < nc; j++)
            if (model.variables()[j].integer)
                lp.integrality_[j] = HighsVarType::kInteger;
    }
    return lp;
}

void quiet(Highs &h) {
    h.setOptionValue("output_flag", false);
    h.setOptionValue("threads", 1);
}

SolveStatus map_status(HighsModelStatus s) {
    switch (s) {
    case HighsModelStatus::kOptimal:
        return SolveStatus::Optimal;
    case HighsModelStatus::kInfeasible:
        return SolveStatus::Infeasible;
    case HighsModelStatus::kUnbounded:
    case HighsModelStatus::kUnboundedOrInfeasible:
        return SolveStatus::Unbounded;
    case HighsModelStatus::kTimeLimit:
        return SolveStatus::TimeLimit;
    case HighsModelStatus::kIterationLimit:
        return SolveStatus::IterationLimit;
    default:
        return SolveStatus::Error;
    }
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveOutcome solve_mip(const LinearModel &model, double time_limit) {
    auto t0 = std::chrono::steady_clock::now();
    Highs h;
    quiet(h);
    h.setOptionValue("mip_rel_gap", 1e-9);
    h.setOptionValue("mip_abs_gap", 1e-9);
    h.setOptionValue("mip_feasibility_tolerance", 1e-9);
    h.setOptionValue("primal_feasibility_tolerance", 1e-9);
    if (std::isfinite(time_limit))
        h.setOptionValue("time_limit", std::max(time_limit, 0.0));
    h.passModel(to_highs(model, true));
    h.run();
    SolveOutcome out;
    out.status = map_status(h.getModelStatus());
    const HighsInfo &info = h.getInfo();
    if (info.primal_solution_status == kSolutionStatusFeasible) {
        out.primal = h.getSolution().col_value;
        out.objective = info.objective_function_value;
    }
    out.bound = info.mip_dual_bound;
    if (out.status == SolveStatus::Optimal)
        out.bound = std::min(out.bound, out.objective);
    out.seconds = elapsed(t0);
    return out;
}

} // namespace

SolveOutcome solve_lp(const LinearModel &model, const LpOptions &opts) {
    auto t0 = std::chrono::steady_clock::now();
    Highs h;
    quiet(h);
    if (opts.simplex_only)
        h.setOptionValue("solver", "simplex");
    if (std::isfinite(opts.time_limit))
        h.setOptionValue("time_limit", std::max(opts.time_limit, 0.0));
    h.passModel(to_highs(model, false));
    h.run();
    SolveOutcome out;
    out.status = map_status(h.getModelStatus());
    if (out.status == SolveStatus::Optimal) {
        const HighsSolution &sol = h.getSolution();
        out.primal = sol.col_value;
        out.row_duals = sol.row_dual;
        out.col_duals = sol.col_dual;
        out.objective = h.getInfo().objective_function_value;
        out.bound = out.objective;
        for (int i = 0; i < model.num_rows(); i++) {
            double &y = out.row_duals[i];
            if (std::abs(y) < 1e-9)
                y = 0.0;
            Sense s = model.rows()[i].sense;
            if ((s == Sense::Ge && y < -1e-6) || (s == Sense::Le && y > 1e-6))
                throw ContractViolation("row dual sign does not match its sense");
            if (s == Sense::Ge && y < 0)
                y = 0.0;
            if (s == Sense::Le && y > 0)
                y = 0.0;
        }
        for (double &d : out.col_duals)
            if (std::abs(d) < 1e-9)
                d = 0.0;
    }
    out.seconds = elapsed(t0);
    return out;
}

SolveOutcome solve_mip_with_lazy(LinearModel &model, const Verifier &verify, const LazyOptions &opts) {
    auto t0 = std::chrono::steady_clock::now();
    SolveOutcome best;
    double bound = -kInf;
    for (int round = 1;; round++) {
        double left = opts.time_limit - elapsed(t0);
        SolveOutcome cur = solve_mip(model, left);
        cur.rounds = round;
        if (cur.bound > bound)
            bound = cur.bound;
        if (cur.status == SolveStatus::Infeasible) {
            cur.seconds = elapsed(t0);
            return cur;
        }
        if (!cur.has_solution() || cur.status != SolveStatus::Optimal) {
            // Out of time: keep the last verified incumbent, if any.
            best.status = SolveStatus::TimeLimit;
            best.bound = bound;
            best.rounds = round;
            best.seconds = elapsed(t0);
            if (opts.on_round)
                opts.on_round(best);
            return best;
        }
        cur.bound = bound;
        std::vector<Row> rows = verify(cur.primal);
        if (opts.on_round)
            opts.on_round(cur);
        if (rows.empty()) {
            cur.seconds = elapsed(t0);
            return cur;
        }
        for (auto &r : rows) {
            if (opts.check_contract && r.violation(cur.primal) <= opts.contract_tol)
                throw ContractViolation("verifier returned a row that the candidate satisfies" +
                                        (r.tag.empty() ? std::string() : ": " + r.tag));
            model.add_row(std::move(r));
        }
        if (elapsed(t0) >= opts.time_limit) {
            best.status = SolveStatus::TimeLimit;
            best.bound = bound;
            best.rounds = round;
            best.seconds = elapsed(t0);
            return best;
        }
    }
}

void write_lp_file(const LinearModel &model, const std::string &path) {
    Highs h;
    quiet(h);
    HighsModel hm;
    hm.lp_ = to_highs(model, model.has_integers());
    for (int j = 0; j < model.num_variables(); j++)
        if (!model.variables()[j].name.empty())
            hm.lp_.col_names_.push_back(model.variables()[j].name);
    if (hm.lp_.col_names_.size() != size_t(model.num_variables()))
        hm.lp_.col_names_.clear();
    h.passModel(std::move(hm));
    if (h.writeModel(path) == HighsStatus::kError)
        throw std::runtime_error("cannot write model to " + path);
}

} // namespace vrpsd
