#include "vrpsd/config.hpp"

#include <stdexcept>

namespace vrpsd {

void SolverConfig::validate() const {
    if (mode == Mode::Sri && recourse != RecourseKind::ScenarioOptimal)
        throw std::invalid_argument("mode sri requires the scenopt recourse");
    if (mode == Mode::IlsPlusSri && recourse != RecourseKind::Classical)
        throw std::invalid_argument("mode ils+sri requires the classical recourse");
    if (b != 1 && b != 2)
        throw std::invalid_argument("b must be 1 or 2");
    if (time_limit_s < 0 || root_phase1_limit_s < 0)
        throw std::invalid_argument("time limits must be nonnegative");
}

std::string to_string(FirstStage fs) { return fs == FirstStage::Cvrp ? "cvrp" : "subtour"; }

std::string to_string(RecourseKind rk) { return rk == RecourseKind::Classical ? "classical" : "scenopt"; }

std::string to_string(Mode m) {
    switch (m) {
    case Mode::Ils:
        return "ils";
    case Mode::Sri:
        return "sri";
    case Mode::IlsPlusSri:
        return "ils+sri";
    }
    return "?";
}

std::string to_string(WeightKind wk) { return wk == WeightKind::Classical ? "classical" : "preventive"; }

FirstStage parse_first_stage(const std::string &s) {
    if (s == "cvrp")
        return FirstStage::Cvrp;
    if (s == "subtour")
        return FirstStage::Subtour;
    throw std::invalid_argument("unknown first stage '" + s + "'");
}

RecourseKind parse_recourse(const std::string &s) {
    if (s == "classical")
        return RecourseKind::Classical;
    if (s == "scenopt")
        return RecourseKind::ScenarioOptimal;
    throw std::invalid_argument("unknown recourse '" + s + "'");
}

Mode parse_mode(const std::string &s) {
    if (s == "ils")
        return Mode::Ils;
    if (s == "sri")
        return Mode::Sri;
    if (s == "ils+sri")
        return Mode::IlsPlusSri;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

WeightKind parse_weights(const std::string &s) {
    if (s == "classical")
        return WeightKind::Classical;
    if (s == "preventive")
        return WeightKind::Preventive;
    throw std::invalid_argument("unknown weights '" + s + "'");
}

} // namespace vrpsd
