#include "solitonlab/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace solitonlab::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct StepResult {
    std::vector<double> y;
    std::vector<double> dy;  // f(t + h, y), the FSAL stage
    std::vector<double> err;
};

class Stepper {
public:
    Stepper(const Rhs& rhs, std::size_t n, long& evals) : rhs_(rhs), n_(n), evals_(evals) {
        for (auto& k : k_) k.resize(n);
        tmp_.resize(n);
    }

    void eval(double t, const std::vector<double>& y, std::vector<double>& dy) {
        ++evals_;
        rhs_(t, y, dy);
    }

    // throws std::domain_error when a stage leaves the admissible region
    StepResult step(double t, const std::vector<double>& y, const std::vector<double>& dy0, double h) {
        auto& [k2, k3, k4, k5, k6, k7] = k_;
        const auto& k1 = dy0;
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * a21 * k1[i];
        eval(t + c2 * h, tmp_, k2);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        eval(t + c3 * h, tmp_, k3);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval(t + c4 * h, tmp_, k4);
        for (std::size_t i = 0; i < n_; ++i)
            tmp_[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval(t + c5 * h, tmp_, k5);
        for (std::size_t i = 0; i < n_; ++i)
            tmp_[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        eval(t + h, tmp_, k6);
        StepResult r;
        r.y.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            r.y[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        for (double v : r.y)
            if (!std::isfinite(v)) throw std::domain_error("non-finite state");
        eval(t + h, r.y, k7);
        r.dy = k7;
        r.err.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            r.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        return r;
    }

private:
    const Rhs& rhs_;
    std::size_t n_;
    long& evals_;
    std::array<std::vector<double>, 6> k_;
    std::vector<double> tmp_;
};

double error_norm(const StepResult& r, const std::vector<double>& y, double rtol, double atol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(r.y[i]));
        const double e = r.err[i] / sc;
        acc += e * e;
    }
    const double v = std::sqrt(acc / double(y.size()));
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double initial_step(Stepper& st, double t, const std::vector<double>& y, const std::vector<double>& f0,
                    const IntegratorConfig& cfg, double hmax) {
    const std::size_t n = y.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    dnf /= double(n);
    dny /= double(n);
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h * f0[i];
    try {
        st.eval(t + h, y1, f1);
    } catch (const std::domain_error&) {
        return std::min(h * 1e-3, hmax);
    }
    double der2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2 / double(n)) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
}

bool crosses(double gl, double gr, int direction) {
    if (gl == 0.0) return false;
    if (gl < 0.0 && gr >= 0.0) return direction >= 0;
    if (gl > 0.0 && gr <= 0.0) return direction <= 0;
    return false;
}

}  // namespace

void IntegratorConfig::validate(double t0) const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
    if (!(t_max > t0)) throw std::invalid_argument("t_max must exceed the initial time");
    if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
}

std::string termination_name(Termination t) {
    switch (t) {
        case Termination::ReachedTMax: return "reached_t_max";
        case Termination::Event: return "event";
        case Termination::StepFailure: return "step_failure";
        case Termination::StateInvalid: return "state_invalid";
    }
    return "unknown";
}

std::vector<double> Trajectory::interpolate(double t) const {
    if (samples.empty()) throw std::logic_error("interpolate on empty trajectory");
    if (t <= samples.front().t) return samples.front().y;
    if (t >= samples.back().t) return samples.back().y;
    auto it = std::upper_bound(samples.begin(), samples.end(), t, [](double v, const Sample& s) { return v < s.t; });
    const Sample& b = *it;
    const Sample& a = *(it - 1);
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    std::vector<double> y(a.y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = h00 * a.y[i] + h10 * h * a.dy[i] + h01 * b.y[i] + h11 * h * b.dy[i];
    return y;
}

Trajectory integrate(const Rhs& rhs, double t0, const std::vector<double>& y0, const IntegratorConfig& cfg) {
    cfg.validate(t0);
    Trajectory traj;
    const std::size_t n = y0.size();
    Stepper st(rhs, n, traj.rhs_evaluations);

    std::vector<double> y = y0;
    std::vector<double> dy(n);
    try {
        st.eval(t0, y, dy);
    } catch (const std::domain_error& e) {
        traj.samples.push_back({t0, y, std::vector<double>(n, 0.0), ""});
        traj.termination = Termination::StateInvalid;
        traj.message = e.what();
        return traj;
    }
    double t = t0;
    traj.samples.push_back({t, y, dy, ""});

    std::vector<double> g(cfg.events.size());
    for (std::size_t e = 0; e < cfg.events.size(); ++e) g[e] = cfg.events[e].fn(t, y);

    const double hmax = std::min(cfg.max_step, cfg.t_max - t0);
    double h = cfg.initial_step > 0.0 ? std::min(cfg.initial_step, hmax) : initial_step(st, t, y, dy, cfg, hmax);

    constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    double facold = 1e-4;
    bool last_rejected = false;

    while (true) {
        if (traj.accepted_steps + traj.rejected_steps >= cfg.max_steps) {
            traj.termination = Termination::StepFailure;
            traj.message = "max_steps exceeded";
            return traj;
        }
        const double hmin = 1e-14 * std::max(1.0, std::abs(t));
        bool last = false;
        if (t + h >= cfg.t_max) {
            h = cfg.t_max - t;
            last = true;
        }
        if (h < hmin) {
            traj.termination = Termination::StepFailure;
            traj.message = "step size underflow at t = " + std::to_string(t);
            return traj;
        }

        StepResult res;
        double err;
        try {
            res = st.step(t, y, dy, h);
            err = error_norm(res, y, cfg.rel_tol, cfg.abs_tol);
        } catch (const std::domain_error& ex) {
            ++traj.rejected_steps;
            last_rejected = true;
            h *= 0.25;
            if (h < hmin) {
                traj.termination = Termination::StateInvalid;
                traj.message = std::string("state left the admissible region: ") + ex.what();
                return traj;
            }
            continue;
        }

        const double fac11 = std::pow(err, expo1);
        if (err > 1.0) {
            ++traj.rejected_steps;
            last_rejected = true;
            h /= std::min(facc1, fac11 / safe);
            continue;
        }

        // accepted; locate events inside (t, t + h]
        const double t_new = last ? cfg.t_max : t + h;
        struct Crossing {
            double t;
            std::size_t index;
            std::vector<double> y, dy;
        };
        std::vector<Crossing> crossings;
        std::vector<double> g_new(cfg.events.size());
        for (std::size_t e = 0; e < cfg.events.size(); ++e) {
            g_new[e] = cfg.events[e].fn(t_new, res.y);
            if (!crosses(g[e], g_new[e], cfg.events[e].direction)) continue;
            double lo = 0.0, hi = 1.0;
            std::vector<double> y_hi = res.y, dy_hi = res.dy;
            const double tol = 1e-12 * (1.0 + std::abs(t_new));
            while ((hi - lo) * h > tol) {
                const double mid = 0.5 * (lo + hi);
                StepResult sub;
                try {
                    sub = st.step(t, y, dy, mid * h);
                } catch (const std::domain_error&) {
                    hi = mid;
                    continue;
                }
                const double gm = cfg.events[e].fn(t + mid * h, sub.y);
                if ((gm < 0.0) == (g[e] < 0.0) && gm != 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                    y_hi = sub.y;
                    dy_hi = sub.dy;
                }
            }
            const double te = hi >= 1.0 ? t_new : t + hi * h;
            crossings.push_back({te, e, y_hi, dy_hi});
        }
        std::sort(crossings.begin(), crossings.end(), [](const Crossing& a, const Crossing& b) {
            return a.t < b.t || (a.t == b.t && a.index < b.index);
        });

        ++traj.accepted_steps;
        for (const auto& c : crossings) {
            const Event& ev = cfg.events[c.index];
            traj.events.push_back({ev.name, c.t, ev.terminal});
            if (c.t > traj.samples.back().t) {
                traj.samples.push_back({c.t, c.y, c.dy, ev.name});
            } else if (traj.samples.back().event.empty()) {
                traj.samples.back().event = ev.name;
            }
            if (ev.terminal) {
                traj.termination = Termination::Event;
                traj.event_name = ev.name;
                traj.event_t = c.t;
                return traj;
            }
        }

        t = t_new;
        y = std::move(res.y);
        dy = std::move(res.dy);
        g = std::move(g_new);
        if (t > traj.samples.back().t) {
            traj.samples.push_back({t, y, dy, ""});
        }
        if (last) {
            traj.termination = Termination::ReachedTMax;
            return traj;
        }

        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double h_new = h / fac;
        if (last_rejected) h_new = std::min(h_new, h);
        facold = std::max(err, 1e-4);
        last_rejected = false;
        h = std::min(h_new, hmax);
    }
}

}  // namespace solitonlab::ode
