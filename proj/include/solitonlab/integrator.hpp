#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace solitonlab::ode {

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;
using EventFn = std::function<double(double t, std::span<const double> y)>;

struct Event {
    std::string name;
    EventFn fn;
    int direction = 0;  // +1: g rises through 0, -1: g falls through 0, 0: either
    bool terminal = true;
};

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double t_max = 1.0;
    long max_steps = 2000000;
    double initial_step = 0.0;  // <= 0: automatic
    std::vector<Event> events;

    void validate(double t0) const;
};

enum class Termination { ReachedTMax, Event, StepFailure, StateInvalid };
std::string termination_name(Termination t);

struct Sample {
    double t = 0.0;
    std::vector<double> y;
    std::vector<double> dy;
    std::string event;  // name of the event located at this sample, if any
};

struct EventRecord {
    std::string name;
    double t = 0.0;
    bool terminal = false;
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<EventRecord> events;
    Termination termination = Termination::ReachedTMax;
    std::string event_name;  // set when termination == Event
    double event_t = 0.0;
    std::string message;
    long accepted_steps = 0;
    long rejected_steps = 0;
    long rhs_evaluations = 0;

    const Sample& back() const { return samples.back(); }
    // cubic Hermite between accepted samples
    std::vector<double> interpolate(double t) const;
};

// Dormand-Prince 5(4) with PI step control and event location by bisection.
Trajectory integrate(const Rhs& rhs, double t0, const std::vector<double>& y0, const IntegratorConfig& cfg);

}  // namespace solitonlab::ode
