#pragma once

#include "solitonlab/solve.hpp"

#include <vector>

namespace solitonlab {

// Compactified coordinates for the Dancer-Wang family; index 0 is the collapsing circle (d_0 = 1).
//   X_i = Lc L_i,  Y_0 = Lc / f,  Y_i = Lc / g_i,  Lc = 1 / (-du + tr L),  d/ds = Lc d/dt
struct RescaledState {
    std::vector<double> X;
    std::vector<double> Y;
    double Lc = 0.0;
    double s = 0.0;
    double t = 0.0;  // carried along as dt/ds = Lc
    double u = 0.0;  // carried along as du/ds = sum d_j X_j - 1

    // flat layout [X_0..X_m, Y_0..Y_m, Lc, t, u]
    std::vector<double> to_vector() const;
    static RescaledState from_vector(double s, std::span<const double> y);
};

RescaledState to_rescaled(const SolitonState& state, const DancerWangAnsatz& a);
// du = (sum d_j X_j - 1) / Lc
SolitonState from_rescaled(const RescaledState& r, const DancerWangAnsatz& a);

// derivative in s of the flat layout
std::vector<double> rhs_rescaled(const RescaledState& r, const DancerWangAnsatz& a, double eps);
void rhs_rescaled_flat(const DancerWangAnsatz& a, double eps, std::span<const double> y, std::span<double> dy);

// the singular orbit in these coordinates: X_0 = Y_0 = 1, everything else 0
RescaledState critical_point(const DancerWangAnsatz& a);

struct RescaledLocusResiduals {
    double trace = 0.0;      // sum d_i X_i - 1
    double curvature = 0.0;  // sum d_i X_i^2 + Lc^2 tr r + (n-1)(eps/2) Lc^2 - 1
    std::vector<double> kahler_first;   // X_i^2 - (q_i^2/4) Y_i^4 / Y_0^2
    std::vector<double> kahler_second;  // X_i (X_0 + 1) - p_i Y_i^2 - (eps/2) Lc^2
};

RescaledLocusResiduals rescaled_locus_residuals(const RescaledState& r, const DancerWangAnsatz& a, double eps);

// sum d_i X_i^2 + sum (d_i p_i / 2) Y_i^2 + (n-1)(eps/2) Lc^2
double rescaled_energy(const RescaledState& r, const DancerWangAnsatz& a, double eps);
// Y_i^2 / Y_0^2 < 2 p_i / q_i^2 for every factor
bool rescaled_apriori_bound(const RescaledState& r, const DancerWangAnsatz& a);

struct RescaledSolution {
    ProblemSpec spec;
    DancerWangAnsatz ansatz;
    ode::Trajectory traj;

    std::size_t size() const { return traj.samples.size(); }
    RescaledState state(std::size_t i) const;
    SolitonState physical(std::size_t i) const { return from_rescaled(state(i), ansatz); }
};

// Integrates in s until the carried physical time reaches t_max. LPP specs run through
// their Dancer-Wang embedding. Checkpoints are physical times.
RescaledSolution integrate_rescaled(const ProblemSpec& spec, const SolveOptions& opts);

DancerWangAnsatz dancer_wang_form(const Ansatz& a);

// Physical-time view of a rescaled run so the trajectory monitors apply unchanged.
// A run stopped by the horizon event counts as having reached t_max.
Solution physical_solution(const RescaledSolution& r);

}  // namespace solitonlab
