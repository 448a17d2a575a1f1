#include "solitonlab/rescaled_flow.hpp"

#include <cmath>
#include <stdexcept>

namespace solitonlab {

namespace {

int total_dim(const DancerWangAnsatz& a) {
    int n = 1;
    for (const auto& f : a.factors) n += f.d;
    return n;
}

double dim_of(const DancerWangAnsatz& a, std::size_t i) { return i == 0 ? 1.0 : double(a.factors[i - 1].d); }

}  // namespace

std::vector<double> RescaledState::to_vector() const {
    std::vector<double> y;
    y.reserve(X.size() + Y.size() + 3);
    y.insert(y.end(), X.begin(), X.end());
    y.insert(y.end(), Y.begin(), Y.end());
    y.push_back(Lc);
    y.push_back(t);
    y.push_back(u);
    return y;
}

RescaledState RescaledState::from_vector(double s, std::span<const double> y) {
    if (y.size() < 5 || (y.size() - 3) % 2 != 0) throw std::invalid_argument("rescaled state has the wrong size");
    const std::size_t k = (y.size() - 3) / 2;
    RescaledState r;
    r.X.assign(y.begin(), y.begin() + std::ptrdiff_t(k));
    r.Y.assign(y.begin() + std::ptrdiff_t(k), y.begin() + std::ptrdiff_t(2 * k));
    r.Lc = y[2 * k];
    r.t = y[2 * k + 1];
    r.u = y[2 * k + 2];
    r.s = s;
    return r;
}

DancerWangAnsatz dancer_wang_form(const Ansatz& a) {
    if (const auto* dw = std::get_if<DancerWangAnsatz>(&a)) return *dw;
    if (const auto* l = std::get_if<LuPagePopeAnsatz>(&a)) return l->as_dancer_wang();
    throw std::invalid_argument("the rescaled chart is only available for Dancer-Wang type systems");
}

RescaledState to_rescaled(const SolitonState& state, const DancerWangAnsatz& a) {
    const std::size_t k = a.m() + 1;
    if (state.f.size() != k) throw std::invalid_argument("to_rescaled: state does not match the ansatz");
    double trL = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(state.f[i] > 0.0)) throw std::domain_error("to_rescaled: nonpositive metric function");
        trL += dim_of(a, i) * state.df[i] / state.f[i];
    }
    const double denom = trL - state.du;
    if (!(denom > 0.0)) throw std::domain_error("to_rescaled: -du + tr L must be positive");
    RescaledState r;
    r.Lc = 1.0 / denom;
    r.X.resize(k);
    r.Y.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        r.X[i] = r.Lc * state.df[i] / state.f[i];
        r.Y[i] = r.Lc / state.f[i];
    }
    r.t = state.t;
    r.u = state.u;
    return r;
}

SolitonState from_rescaled(const RescaledState& r, const DancerWangAnsatz& a) {
    if (!(r.Lc > 0.0)) throw std::domain_error("from_rescaled: Lc must be positive");
    const std::size_t k = r.X.size();
    if (k != a.m() + 1 || r.Y.size() != k) throw std::invalid_argument("from_rescaled: state does not match the ansatz");
    SolitonState s;
    s.t = r.t;
    s.u = r.u;
    s.f.resize(k);
    s.df.resize(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(r.Y[i] > 0.0)) throw std::domain_error("from_rescaled: Y must be positive");
        s.f[i] = r.Lc / r.Y[i];
        s.df[i] = r.X[i] / r.Y[i];
        sum += dim_of(a, i) * r.X[i];
    }
    s.du = (sum - 1.0) / r.Lc;
    return s;
}

std::vector<double> rhs_rescaled(const RescaledState& r, const DancerWangAnsatz& a, double eps) {
    const std::size_t m = a.m();
    const std::size_t k = m + 1;
    if (r.X.size() != k || r.Y.size() != k) throw std::invalid_argument("rhs_rescaled: state does not match the ansatz");
    if (!(r.Y[0] > 0.0)) throw std::domain_error("rhs_rescaled: Y_0 must be positive");
    const double L2 = r.Lc * r.Lc;
    double sumX = 0.0;
    double sumX2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sumX += dim_of(a, i) * r.X[i];
        sumX2 += dim_of(a, i) * r.X[i] * r.X[i];
    }
    const double growth = sumX2 - 0.5 * eps * L2;

    // Lc^2 r_i in the new variables
    std::vector<double> ric(k, 0.0);
    const double Y0sq = r.Y[0] * r.Y[0];
    for (std::size_t i = 1; i < k; ++i) {
        const auto& fac = a.factors[i - 1];
        const double qsq = double(fac.q) * fac.q;
        const double Y2 = r.Y[i] * r.Y[i];
        const double ratio = Y2 * Y2 / Y0sq;
        ric[0] += fac.d * qsq / 4.0 * ratio;
        ric[i] = fac.p * Y2 - qsq / 2.0 * ratio;
    }

    std::vector<double> dy(2 * k + 3);
    for (std::size_t i = 0; i < k; ++i) {
        dy[i] = r.X[i] * (growth - 1.0) + ric[i] + 0.5 * eps * L2;
        dy[k + i] = r.Y[i] * (growth - r.X[i]);
    }
    dy[2 * k] = r.Lc * growth;
    dy[2 * k + 1] = r.Lc;
    dy[2 * k + 2] = sumX - 1.0;
    return dy;
}

void rhs_rescaled_flat(const DancerWangAnsatz& a, double eps, std::span<const double> y, std::span<double> dy) {
    const auto d = rhs_rescaled(RescaledState::from_vector(0.0, y), a, eps);
    std::copy(d.begin(), d.end(), dy.begin());
}

RescaledState critical_point(const DancerWangAnsatz& a) {
    RescaledState r;
    r.X.assign(a.m() + 1, 0.0);
    r.Y.assign(a.m() + 1, 0.0);
    r.X[0] = 1.0;
    r.Y[0] = 1.0;
    return r;
}

RescaledLocusResiduals rescaled_locus_residuals(const RescaledState& r, const DancerWangAnsatz& a, double eps) {
    const std::size_t k = a.m() + 1;
    const double L2 = r.Lc * r.Lc;
    const double Y0sq = r.Y[0] * r.Y[0];
    RescaledLocusResiduals out;
    double sumX = 0.0;
    double sumX2 = 0.0;
    double curv = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sumX += dim_of(a, i) * r.X[i];
        sumX2 += dim_of(a, i) * r.X[i] * r.X[i];
    }
    for (std::size_t i = 1; i < k; ++i) {
        const auto& fac = a.factors[i - 1];
        const double qsq = double(fac.q) * fac.q;
        const double Y2 = r.Y[i] * r.Y[i];
        const double ratio = Y0sq > 0.0 ? Y2 * Y2 / Y0sq : 0.0;
        curv += fac.d * fac.p * Y2 - fac.d * qsq / 4.0 * ratio;
        out.kahler_first.push_back(r.X[i] * r.X[i] - qsq / 4.0 * ratio);
        out.kahler_second.push_back(r.X[i] * (r.X[0] + 1.0) - fac.p * Y2 - 0.5 * eps * L2);
    }
    out.trace = sumX - 1.0;
    out.curvature = sumX2 + curv + (total_dim(a) - 1) * 0.5 * eps * L2 - 1.0;
    return out;
}

double rescaled_energy(const RescaledState& r, const DancerWangAnsatz& a, double eps) {
    double e = (total_dim(a) - 1) * 0.5 * eps * r.Lc * r.Lc;
    for (std::size_t i = 0; i <= a.m(); ++i) e += dim_of(a, i) * r.X[i] * r.X[i];
    for (std::size_t i = 1; i <= a.m(); ++i) {
        e += 0.5 * a.factors[i - 1].d * a.factors[i - 1].p * r.Y[i] * r.Y[i];
    }
    return e;
}

bool rescaled_apriori_bound(const RescaledState& r, const DancerWangAnsatz& a) {
    for (std::size_t i = 1; i <= a.m(); ++i) {
        const auto& fac = a.factors[i - 1];
        if (fac.q == 0) continue;
        const double ratio = r.Y[i] * r.Y[i] / (r.Y[0] * r.Y[0]);
        if (!(ratio < 2.0 * fac.p / (double(fac.q) * fac.q))) return false;
    }
    return true;
}

RescaledState RescaledSolution::state(std::size_t i) const {
    const auto& smp = traj.samples.at(i);
    return RescaledState::from_vector(smp.t, smp.y);
}

RescaledSolution integrate_rescaled(const ProblemSpec& spec, const SolveOptions& opts) {
    spec.validate();
    RescaledSolution sol;
    sol.spec = spec;
    sol.ansatz = dancer_wang_form(spec.ansatz);
    const auto start = to_rescaled(launch(spec, opts.launch), sol.ansatz);
    const std::size_t k = sol.ansatz.m() + 1;
    const std::size_t t_index = 2 * k + 1;
    const double t_max = opts.integrator.t_max;

    ode::IntegratorConfig cfg = opts.integrator;
    // the s-horizon is open ended; the carried physical time stops the run
    cfg.t_max = 1e300;
    cfg.events.clear();
    cfg.events.push_back({"horizon",
                          [t_index, t_max](double, std::span<const double> y) { return y[t_index] - t_max; }, +1,
                          true});
    cfg.events.push_back({kEventMetricDegenerate,
                          [k](double, std::span<const double> y) {
                              double m = y[2 * k];
                              for (std::size_t i = k; i < 2 * k; ++i) m = std::min(m, y[i]);
                              return m;
                          },
                          -1, true});
    for (double tc : opts.checkpoints) {
        cfg.events.push_back(
            {"checkpoint", [t_index, tc](double, std::span<const double> y) { return y[t_index] - tc; }, +1, false});
    }
    const auto a = sol.ansatz;
    const double eps = spec.epsilon;
    sol.traj = ode::integrate(
        [a, eps](double, std::span<const double> y, std::span<double> dy) { rhs_rescaled_flat(a, eps, y, dy); }, 0.0,
        start.to_vector(), cfg);
    return sol;
}

Solution physical_solution(const RescaledSolution& r) {
    Solution sol;
    sol.spec = r.spec;
    sol.traj = r.traj;
    sol.traj.samples.clear();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto s = r.physical(i);
        ode::Sample smp;
        smp.t = s.t;
        smp.y = s.to_vector();
        smp.dy.resize(smp.y.size());
        rhs_flat(r.spec.ansatz, r.spec.epsilon, smp.y, smp.dy);
        smp.event = r.traj.samples[i].event;
        sol.traj.samples.push_back(std::move(smp));
    }
    if (!sol.traj.samples.empty()) sol.launch_state = sol.state(0);
    if (r.traj.termination == ode::Termination::Event && r.traj.event_name == "horizon") {
        sol.traj.termination = ode::Termination::ReachedTMax;
        sol.traj.event_name.clear();
    } else if (r.traj.termination == ode::Termination::Event) {
        sol.traj.event_t = sol.traj.samples.back().t;
    }
    return sol;
}

}  // namespace solitonlab
