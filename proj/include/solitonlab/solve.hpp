#pragma once

#include "solitonlab/integrator.hpp"
#include "solitonlab/singular_launch.hpp"
#include "solitonlab/soliton_systems.hpp"

#include <vector>

namespace solitonlab {

// Names of the standard events attached by solve_problem.
inline constexpr const char* kEventMetricDegenerate = "metric_degenerate";
inline constexpr const char* kEventShapeOperator = "shape_operator_loss";
inline constexpr const char* kEventInvariantExit = "invariant_set_exit";
inline constexpr const char* kEventOverflow = "overflow";

struct SolveOptions {
    ode::IntegratorConfig integrator;  // events listed here are appended to the standard ones
    LaunchOptions launch;
    bool invariant_event = true;       // stop on leaving the ansatz invariant set
    std::vector<double> checkpoints;   // non-terminal events at these times
};

struct Solution {
    ProblemSpec spec;
    SolitonState launch_state;
    ode::Trajectory traj;

    std::size_t size() const { return traj.samples.size(); }
    SolitonState state(std::size_t i) const;
    double udd(std::size_t i) const;
    SolitonState final_state() const { return state(size() - 1); }
};

double metric_floor(const ProblemSpec& spec);
std::vector<ode::Event> standard_events(const ProblemSpec& spec, bool invariant_event);
ode::Rhs make_rhs(const ProblemSpec& spec);

Solution solve_problem(const ProblemSpec& spec, const SolveOptions& opts);

}  // namespace solitonlab
