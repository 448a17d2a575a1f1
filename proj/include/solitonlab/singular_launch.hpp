#pragma once

#include "solitonlab/soliton_systems.hpp"

#include <vector>

namespace solitonlab {

struct LaunchOptions {
    double delta = 0.0;  // <= 0 selects default_launch_delta
    int order = 10;      // highest even power kept in the even components
};

// Taylor coefficients at the singular orbit: f[i][k] multiplies t^k, u[k] likewise.
// Component 0 is odd, all others and u are even.
struct LaunchSeries {
    std::vector<std::vector<double>> f;
    std::vector<double> u;
    int order = 0;
    // largest coefficient of the ODE residual below the truncation order
    double max_residual = 0.0;
};

LaunchSeries launch_series(const ProblemSpec& spec, int order);
SolitonState evaluate_series(const LaunchSeries& series, double t);

double default_launch_delta(const ProblemSpec& spec);

SolitonState launch(const ProblemSpec& spec, const LaunchOptions& opts = {});
SolitonState launch_two_summands(const ProblemSpec& spec, double delta, int order = 10);
SolitonState launch_dancer_wang(const ProblemSpec& spec, double delta, int order = 10);
SolitonState launch_lpp(const ProblemSpec& spec, double delta, int order = 10);

}  // namespace solitonlab
