#pragma once

#include "vrpsd/model.hpp"
#include "vrpsd/recourse.hpp"

#include <string>

namespace vrpsd {

enum class Mode { Ils, Sri, IlsPlusSri };

struct SolverConfig {
    FirstStage first_stage = FirstStage::Cvrp;
    RecourseKind recourse = RecourseKind::ScenarioOptimal;
    Mode mode = Mode::Sri;
    double time_limit_s = 1800.0;
    double root_phase1_limit_s = 60.0;
    WeightKind weights = WeightKind::Classical;
    int b = 1;
    unsigned long long seed = 0;
    // Separation rounds on the (x, theta) root LP before branching.
    int root_cut_rounds = 30;
    double milp_separation_limit_s = 30.0;

    // Throws std::invalid_argument on an inconsistent combination.
    void validate() const;
};

std::string to_string(FirstStage fs);
std::string to_string(RecourseKind rk);
std::string to_string(Mode m);
std::string to_string(WeightKind wk);
FirstStage parse_first_stage(const std::string &s);
RecourseKind parse_recourse(const std::string &s);
Mode parse_mode(const std::string &s);
WeightKind parse_weights(const std::string &s);

} // namespace vrpsd
