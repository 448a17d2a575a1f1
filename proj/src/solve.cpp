#include "solitonlab/solve.hpp"

#include "solitonlab/monitors.hpp"

#include <algorithm>
#include <cmath>

namespace solitonlab {

SolitonState Solution::state(std::size_t i) const {
    const auto& s = traj.samples.at(i);
    return SolitonState::from_vector(s.t, s.y);
}

double Solution::udd(std::size_t i) const { return traj.samples.at(i).dy.back(); }

double metric_floor(const ProblemSpec& spec) {
    double m = 1.0;
    for (double g : spec.initial) m = std::min(m, g);
    return 1e-10 * m;
}

ode::Rhs make_rhs(const ProblemSpec& spec) {
    const Ansatz a = spec.ansatz;
    const double eps = spec.epsilon;
    return [a, eps](double, std::span<const double> y, std::span<double> dy) { rhs_flat(a, eps, y, dy); };
}

std::vector<ode::Event> standard_events(const ProblemSpec& spec, bool invariant_event) {
    const std::size_t k = component_dims(spec.ansatz).size();
    const double floor = metric_floor(spec);
    std::vector<ode::Event> ev;
    ev.push_back({kEventMetricDegenerate,
                  [k, floor](double, std::span<const double> y) {
                      return *std::min_element(y.begin(), y.begin() + std::ptrdiff_t(k)) - floor;
                  },
                  -1, true});
    ev.push_back({kEventShapeOperator,
                  [k](double, std::span<const double> y) {
                      return *std::min_element(y.begin() + std::ptrdiff_t(k), y.begin() + std::ptrdiff_t(2 * k));
                  },
                  -1, true});
    if (invariant_event) {
        const auto ctx = monitors::invariant_context(spec);
        const ProblemSpec sp = spec;
        if (monitors::has_invariant_window(ctx)) {
            ev.push_back({kEventInvariantExit,
                          [sp, ctx](double t, std::span<const double> y) {
                              return *monitors::invariant_violation(SolitonState::from_vector(t, y), sp, ctx);
                          },
                          +1, true});
        }
    }
    ev.push_back({kEventOverflow,
                  [](double, std::span<const double> y) {
                      double m = 0.0;
                      for (double v : y) m = std::max(m, std::abs(v));
                      return m - 1e100;
                  },
                  +1, true});
    return ev;
}

Solution solve_problem(const ProblemSpec& spec, const SolveOptions& opts) {
    spec.validate();
    Solution sol;
    sol.spec = spec;
    sol.launch_state = launch(spec, opts.launch);
    ode::IntegratorConfig cfg = opts.integrator;
    auto events = standard_events(spec, opts.invariant_event);
    for (double tc : opts.checkpoints) {
        events.push_back({"checkpoint", [tc](double t, std::span<const double>) { return t - tc; }, +1, false});
    }
    events.insert(events.end(), opts.integrator.events.begin(), opts.integrator.events.end());
    cfg.events = std::move(events);
    sol.traj = ode::integrate(make_rhs(spec), sol.launch_state.t, sol.launch_state.to_vector(), cfg);
    return sol;
}

}  // namespace solitonlab
