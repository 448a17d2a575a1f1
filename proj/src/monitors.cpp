#include "solitonlab/monitors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace solitonlab::monitors {

namespace {

constexpr std::size_t kMaxRecordedViolations = 16;

void record(std::vector<Violation>& out, std::size_t i, double t, const char* what, double value) {
    if (out.size() < kMaxRecordedViolations) out.push_back({i, t, what, value});
}

double max_shape_eigenvalue(const SolitonState& s) {
    double m = -std::numeric_limits<double>::infinity();
    for (double l : shape_eigenvalues(s)) m = std::max(m, l);
    return m;
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json to_json(const Violation& v) {
    return {{"sample", v.sample}, {"t", v.t}, {"quantity", v.quantity}, {"value", v.value}};
}

}  // namespace

// ---- two summands -------------------------------------------------------

TwoSummandsDiagnostics two_summands_roots(const TwoSummandsAnsatz& a) {
    if (!(a.A3 > 0.0)) throw std::invalid_argument("two_summands_roots: A3 must be positive");
    const double s = 2.0 * a.d1 + a.d2;
    const double mid = a.A2 / (2.0 * a.A3) * a.d1 / s;
    TwoSummandsDiagnostics d;
    d.D = mid * mid - (a.A1 / a.A3) * a.d2 / s;
    if (d.D < 0.0) return d;
    double w1sq, w2sq;
    if (a.A1 == 0.0) {
        w1sq = 0.0;
        w2sq = 2.0 * mid;
    } else {
        const double r = std::sqrt(d.D);
        w2sq = mid + r;
        // product form avoids cancellation in the smaller root
        w1sq = w2sq > 0.0 ? ((a.A1 / a.A3) * a.d2 / s) / w2sq : mid - r;
    }
    d.omega1 = std::sqrt(std::max(0.0, w1sq));
    d.omega2 = std::sqrt(std::max(0.0, w2sq));
    d.omega1_check = w1sq < a.A2 / (4.0 * a.A3);
    d.omega2_check = w2sq < a.A2 / (2.0 * a.A3);
    return d;
}

double omega_quartic(const TwoSummandsAnsatz& a, double w) {
    const double w2 = w * w;
    return a.A1 / a.d1 - (a.A2 / a.d2) * w2 + a.A3 * (1.0 / a.d1 + 2.0 / a.d2) * w2 * w2;
}

bool discriminant_ratio_predicate(const TwoSummandsAnsatz& a) {
    const double ric = a.A2 / a.d2;
    const double norm = a.A3 / a.d2;
    return ric * ric / (4.0 * norm) >= (2.0 * a.d1 + a.d2) * (a.d1 - 1.0) / a.d1;
}

C0ZeroPredicates c0_zero_predicates(const TwoSummandsAnsatz& a) {
    const double A2sq = a.A2 * a.A2;
    return {A2sq > 2.0 * a.d2 * (a.d2 + 2.0) * a.A3,
            (a.d1 + 1.0) * A2sq > 4.0 * a.d1 * a.d2 * (2.0 * a.d1 + a.d2) * a.A3};
}

double omega(const SolitonState& s) { return s.f.at(0) / s.f.at(1); }

double omega_dot(const SolitonState& s) {
    return (s.df[0] * s.f[1] - s.f[0] * s.df[1]) / (s.f[1] * s.f[1]);
}

// ---- Dancer-Wang and LPP ------------------------------------------------

double dw_c0(const DancerWangAnsatz& a, const std::vector<double>& g0) {
    const std::size_t m = a.m();
    if (g0.size() != m) throw std::invalid_argument("dw_c0: initial size mismatch");
    if (m == 1) return 1.0;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const auto& fi = a.factors[i];
            const auto& fj = a.factors[j];
            const double root = std::sqrt((fj.d + 2.0) / fj.d * double(fi.p) / fj.p);
            best = std::max({best, g0[i] / g0[j], root});
        }
    }
    return best + 1.0;
}

double dw_omega_bound(const DancerWangAnsatz& a, std::size_t i, double c0) {
    int min_p = std::numeric_limits<int>::max();
    for (const auto& f : a.factors) min_p = std::min(min_p, f.p);
    const auto& fi = a.factors.at(i);
    const double qsq = double(fi.q) * fi.q;
    if (qsq == 0.0) return std::numeric_limits<double>::infinity();
    return 4.0 * min_p / (double(a.m()) * c0 * c0 * (fi.d + 2.0) * qsq);
}

DWMonitorState dw_state(const SolitonState& s, const DancerWangAnsatz& a, double c0) {
    const std::size_t m = a.m();
    DWMonitorState st;
    st.t = s.t;
    st.C0_bound = c0;
    st.omega.resize(m);
    st.Q.assign(m, std::vector<double>(m, 1.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        st.omega[i] = s.f[0] / s.f[i + 1];
        const double bound = dw_omega_bound(a, i, c0);
        if (std::isfinite(bound)) worst = std::max(worst, st.omega[i] * st.omega[i] / bound);
        for (std::size_t j = 0; j < m; ++j) {
            st.Q[i][j] = s.f[i + 1] / s.f[j + 1];
            if (i != j) worst = std::max(worst, st.Q[i][j] / c0);
        }
    }
    st.worst_ratio = worst;
    st.bound_ok = worst <= 1.0;
    return st;
}

double lpp_omega_bound(const LuPagePopeAnsatz& a) {
    return 4.0 * a.p1 / ((a.d1 + 2.0) * double(a.q1) * a.q1);
}

// ---- invariant sets and budgets ----------------------------------------

InvariantContext invariant_context(const ProblemSpec& spec) {
    InvariantContext ctx;
    ctx.kind = spec.kind();
    if (const auto* ts = std::get_if<TwoSummandsAnsatz>(&spec.ansatz)) {
        ctx.omega2 = two_summands_roots(*ts).omega2;
    } else if (const auto* dw = std::get_if<DancerWangAnsatz>(&spec.ansatz)) {
        ctx.dw_c0 = dw_c0(*dw, spec.initial);
    }
    return ctx;
}

bool has_invariant_window(const InvariantContext& ctx) {
    return ctx.kind != SystemKind::TwoSummands || (ctx.omega2 && *ctx.omega2 > 0.0);
}

std::optional<double> invariant_violation(const SolitonState& s, const ProblemSpec& spec,
                                          const InvariantContext& ctx) {
    if (!has_invariant_window(ctx)) return std::nullopt;
    switch (ctx.kind) {
        case SystemKind::TwoSummands:
            return omega(s) / *ctx.omega2 - 1.0;
        case SystemKind::DancerWang:
            return dw_state(s, std::get<DancerWangAnsatz>(spec.ansatz), ctx.dw_c0).worst_ratio - 1.0;
        case SystemKind::LuPagePope: {
            const auto& a = std::get<LuPagePopeAnsatz>(spec.ansatz);
            const double w = s.f[0] / s.f[1];
            return w * w / lpp_omega_bound(a) - 1.0;
        }
    }
    return std::nullopt;
}

double curvature_budget(const SolitonState& s, const Ansatz& a) {
    struct Visitor {
        const SolitonState& s;
        double operator()(const TwoSummandsAnsatz& ts) const {
            return ts.A1 / (s.f[0] * s.f[0]) + ts.A2 / (s.f[1] * s.f[1]);
        }
        double operator()(const DancerWangAnsatz& dw) const {
            double sum = 0.0;
            for (std::size_t i = 0; i < dw.m(); ++i) {
                sum += double(dw.factors[i].d) * dw.factors[i].p / (s.f[i + 1] * s.f[i + 1]);
            }
            return sum;
        }
        double operator()(const LuPagePopeAnsatz& l) const {
            return double(l.d1) * l.p1 / (s.f[1] * s.f[1]) + double(l.d2) * (l.d2 - 1) / (s.f[2] * s.f[2]);
        }
    };
    return std::visit(Visitor{s}, a);
}

// ---- loci ---------------------------------------------------------------

LocusReport locus_membership(const SolitonState& s, const ProblemSpec& spec, double tol) {
    LocusReport r;
    const auto dims = component_dims(spec.ansatz);
    const double trL = trace_L(s, dims);
    const double denom = trL - s.du;
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        r.locus = "unclassifiable";
        return r;
    }
    const int n = orbit_dim(spec.ansatz);
    const double Lc = 1.0 / denom;
    r.classifiable = true;
    r.trace_ratio = trL / denom;
    r.curvature_ratio = (trace_L_squared(s, dims) + trace_ricci(spec.ansatz, s.f)) * Lc * Lc +
                        (n - 1) * (spec.epsilon / 2.0) * Lc * Lc;
    if (std::abs(r.trace_ratio - 1.0) <= tol && std::abs(r.curvature_ratio - 1.0) <= tol) {
        r.locus = "einstein";
    } else if (r.trace_ratio < 1.0 && r.curvature_ratio < 1.0) {
        r.locus = "strict";
    } else {
        r.locus = "outside";
    }
    return r;
}

// ---- trajectory reports -------------------------------------------------

PotentialReport potential_report(const std::vector<SolitonState>& states, const std::vector<double>& udd,
                                 const ProblemSpec& spec) {
    if (states.size() != udd.size()) throw std::invalid_argument("potential_report: size mismatch");
    PotentialReport r;
    r.applicable = spec.C < 0.0 && spec.epsilon >= 0.0;
    r.trivial = spec.C == 0.0;
    r.concavity_required = spec.epsilon > 0.0;
    if (!r.applicable) return r;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        if (!(s.t > 0.0)) continue;
        ++r.checked;
        if (!(s.u < 0.0)) {
            ++r.u_violations;
            record(r.violations, i, s.t, "u", s.u);
        }
        if (!(s.du < 0.0)) {
            ++r.du_violations;
            record(r.violations, i, s.t, "du", s.du);
        }
        const bool need_concave = spec.epsilon > 0.0 || max_shape_eigenvalue(s) > 1e-12;
        if (need_concave && !(udd[i] < 0.0)) {
            ++r.udd_violations;
            record(r.violations, i, s.t, "udd", udd[i]);
        }
    }
    return r;
}

PotentialReport potential_report(const Solution& sol) {
    std::vector<SolitonState> states;
    std::vector<double> udd;
    states.reserve(sol.size());
    udd.reserve(sol.size());
    for (std::size_t i = 0; i < sol.size(); ++i) {
        states.push_back(sol.state(i));
        udd.push_back(sol.udd(i));
    }
    return potential_report(states, udd, sol.spec);
}

bool AsymptoteReport::steady_ok(double rel_tol, double udd_tol) const {
    if (!steady || !reached_t_max) return false;
    const double scale = target_slope > 0.0 ? target_slope : 1.0;
    return slope_error <= rel_tol * scale && std::abs(terminal_udd) <= udd_tol;
}

AsymptoteReport asymptote_check(const Solution& sol) {
    const auto& spec = sol.spec;
    AsymptoteReport r;
    r.steady = spec.epsilon == 0.0;
    r.reached_t_max = sol.traj.termination == ode::Termination::ReachedTMax;
    const auto last = sol.final_state();
    r.t_end = last.t;
    r.terminal_slope = -last.du;
    r.target_slope = std::sqrt(std::max(0.0, -spec.C));
    r.slope_error = std::abs(r.terminal_slope - r.target_slope);
    r.relative_slope_error = r.target_slope > 0.0 ? r.slope_error / r.target_slope : r.slope_error;
    r.terminal_udd = sol.udd(sol.size() - 1);
    if (r.steady) return r;

    const double eps = spec.epsilon;
    const double sqC = r.target_slope;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto& smp = sol.traj.samples[i];
        const double slope = -smp.y[smp.y.size() - 1];
        if (!(slope < 0.5 * eps * smp.t + sqC)) {
            ++r.upper_bound_violations;
            if (!r.first_upper_violation) r.first_upper_violation = Violation{i, smp.t, "slope", slope};
        }
    }

    // lower bound from a handful of anchor times t0 beyond the threshold
    const int n = orbit_dim(spec.ansatz);
    const double threshold = 2.0 * std::sqrt(5.0 / eps);
    const double shift = std::sqrt(n * eps / 2.0) + sqC;
    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        if (sol.traj.samples[i].t > threshold) anchors.push_back(i);
    }
    if (anchors.size() > 8) {
        std::vector<std::size_t> picked;
        for (int k = 0; k < 8; ++k) picked.push_back(anchors[k * (anchors.size() - 1) / 7]);
        anchors = picked;
    }
    for (std::size_t a : anchors) {
        const auto& s0 = sol.traj.samples[a];
        const double slope0 = -s0.y.back();
        const double base = 0.5 * eps * s0.t + shift;
        for (std::size_t i = a; i < sol.size(); ++i) {
            const auto& smp = sol.traj.samples[i];
            const double lower = 0.9 * (0.5 * eps * smp.t + shift) / base * slope0;
            ++r.lower_bound_checks;
            if (!(lower < -smp.y.back())) ++r.lower_bound_violations;
        }
    }
    return r;
}

ConservationReport conservation_report(const Solution& sol, double tol_scale) {
    const auto& spec = sol.spec;
    const auto dims = component_dims(spec.ansatz);
    const int n = orbit_dim(spec.ansatz);
    ConservationReport r;
    r.tolerance = tol_scale * (1.0 + std::abs(spec.C));
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto s = sol.state(i);
        const double udd = sol.udd(i);
        const double r3 = conservation_residual(s, udd, spec);
        const double r4 = conservation_residual_trace_form(s, spec);
        r.max_residual = std::max(r.max_residual, std::abs(r3));
        r.max_trace_form_residual = std::max(r.max_trace_form_residual, std::abs(r4));
        // both forms vanish identically; compare against the magnitude of their terms
        const double trL = trace_L(s, dims);
        const double fr = trL - s.du;
        const double scale = std::abs(udd) + std::abs(fr * s.du) + std::abs(spec.C) +
                             std::abs(spec.epsilon * s.u) + std::abs(trace_ricci(spec.ansatz, s.f)) +
                             trace_L_squared(s, dims) + fr * fr + (n - 1) * spec.epsilon / 2.0;
        if (scale > 0.0) r.max_form_disagreement = std::max(r.max_form_disagreement, std::abs(r3 - r4) / scale);
        const double two_udd = 2.0 * udd;
        r.max_identity_mismatch = std::max(r.max_identity_mismatch,
                                           std::abs(u_second_derivative_identity(s, spec) - two_udd) /
                                               (1.0 + std::abs(two_udd)));
    }
    return r;
}

LocusTrajectoryReport locus_report(const Solution& sol, double tol) {
    LocusTrajectoryReport r;
    bool started_strict = false;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto lr = locus_membership(sol.state(i), sol.spec, tol);
        if (lr.classifiable) {
            r.max_einstein_residual = std::max(
                {r.max_einstein_residual, std::abs(lr.trace_ratio - 1.0), std::abs(lr.curvature_ratio - 1.0)});
        }
        if (i == 0) started_strict = lr.locus == "strict";
        if (lr.locus == "strict") ++r.strict;
        else if (lr.locus == "einstein") ++r.einstein;
        else if (lr.locus == "outside") ++r.outside;
        else ++r.unclassifiable;
        if (started_strict && lr.locus != "strict" && !r.first_strict_exit) r.first_strict_exit = i;
    }
    return r;
}

OmegaMonitorReport two_summands_omega_monitor(const Solution& sol) {
    const auto& a = std::get<TwoSummandsAnsatz>(sol.spec.ansatz);
    OmegaMonitorReport r;
    const auto roots = two_summands_roots(a);
    r.roots_exist = roots.omega2.has_value();
    r.omega2 = roots.omega2;
    r.omega_dot_limit = 1.0 / sol.spec.initial.at(0);
    const bool lemma_applies = sol.spec.C <= 0.0 && sol.spec.epsilon >= 0.0;
    r.window_held = r.roots_exist;
    r.max_omega = -std::numeric_limits<double>::infinity();
    r.max_omega_dot = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto s = sol.state(i);
        const double w = omega(s);
        const double wd = omega_dot(s);
        if (i == 0) {
            r.launch_omega = w;
            r.launch_omega_dot = wd;
        }
        r.max_omega = std::max(r.max_omega, w);
        r.max_omega_dot = std::max(r.max_omega_dot, wd);
        if (r.roots_exist) {
            if (!(w < *r.omega2)) r.window_held = false;
            if (lemma_applies && w >= 0.0 && w <= *r.omega2 && wd > r.omega_dot_limit * (1.0 + 1e-6)) {
                ++r.slope_violations;
            }
        }
    }
    return r;
}

DWMonitorReport dw_apriori_monitor(const Solution& sol, bool keep_series) {
    const auto& a = std::get<DancerWangAnsatz>(sol.spec.ansatz);
    const std::size_t m = a.m();
    DWMonitorReport r;
    r.C0_bound = dw_c0(a, sol.spec.initial);
    bool kahler_seed = true;
    for (const auto& f : a.factors) kahler_seed = kahler_seed && f.q < 0;
    for (std::size_t k = 0; k < sol.size(); ++k) {
        const auto s = sol.state(k);
        auto st = dw_state(s, a, r.C0_bound);
        ++r.samples;
        r.worst_ratio = std::max(r.worst_ratio, st.worst_ratio);
        if (!st.bound_ok) {
            ++r.bound_violations;
            if (!r.first_violation_t) r.first_violation_t = s.t;
        } else {
            for (std::size_t i = 0; i < m; ++i) {
                const auto& fi = a.factors[i];
                const double gi = s.f[i + 1];
                const double qsq = double(fi.q) * fi.q;
                const double lhs = fi.p / (gi * gi) - 0.5 * qsq * s.f[0] * s.f[0] / (gi * gi * gi * gi);
                const double rhs = double(fi.d) * fi.p / ((fi.d + 2.0) * gi * gi);
                if (lhs < rhs - 1e-12 * std::abs(rhs)) ++r.key_estimate_violations;
                if (fi.d <= 1) continue;
                for (std::size_t j = 0; j < m; ++j) {
                    if (i == j) continue;
                    const double gj = s.f[j + 1];
                    const double qdot = (s.df[i + 1] * gj - gi * s.df[j + 1]) / (gj * gj);
                    const double g0 = sol.spec.initial[j];
                    const double ceiling = std::sqrt(fi.p / ((fi.d - 1.0) * g0 * g0));
                    if (qdot > ceiling * (1.0 + 1e-6)) ++r.qdot_violations;
                }
            }
        }
        if (kahler_seed) {
            ++r.kahler_samples;
            for (double v : kahler_residual(s, a)) r.max_kahler_residual = std::max(r.max_kahler_residual, std::abs(v));
        }
        if (keep_series) r.series.push_back(std::move(st));
    }
    return r;
}

LppMonitorReport lpp_monitor(const Solution& sol) {
    const auto& a = std::get<LuPagePopeAnsatz>(sol.spec.ansatz);
    LppMonitorReport r;
    r.bound = lpp_omega_bound(a);
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto& y = sol.traj.samples[i].y;
        const double w = y[0] / y[1];
        const double ratio = w * w / r.bound;
        r.worst_ratio = std::max(r.worst_ratio, ratio);
        if (!(ratio < 1.0)) ++r.violations;
    }
    return r;
}

ScalarBoundReport scalar_curvature_bound(const Solution& sol) {
    const auto dec = induced_decomposition(sol.spec.ansatz);
    ScalarBoundReport r;
    r.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sol.size(); ++k) {
        const auto s = sol.state(k);
        double budget = 0.0;
        for (std::size_t i = 0; i < dec.size(); ++i) {
            budget += 0.5 * dec.dim(i) * dec.summand(i).b / (s.f[i] * s.f[i]);
        }
        const double excess = trace_ricci(sol.spec.ansatz, s.f) - budget;
        r.max_excess = std::max(r.max_excess, excess);
        if (excess > 1e-12 * std::max(1.0, std::abs(budget))) ++r.violations;
    }
    return r;
}

// ---- classification -----------------------------------------------------

std::string verdict_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::NumericallyComplete: return "numerically_complete";
        case VerdictKind::InvariantSetExit: return "invariant_set_exit";
        case VerdictKind::MetricDegenerate: return "metric_degenerate";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

VerdictKind parse_verdict(const std::string& s) {
    for (auto k : {VerdictKind::NumericallyComplete, VerdictKind::InvariantSetExit, VerdictKind::MetricDegenerate,
                   VerdictKind::Inconclusive}) {
        if (verdict_name(k) == s) return k;
    }
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

std::string Verdict::text() const {
    std::string out = verdict_name(kind);
    if (t_star) out += " at t = " + std::to_string(*t_star);
    if (!reason.empty()) out += ": " + reason;
    if (kind == VerdictKind::NumericallyComplete) {
        out += " (operational verdict: horizon reached with invariants intact; not a proof of completeness)";
    }
    return out;
}

Verdict classify_completeness(const Solution& sol, const ClassifyOptions& opts) {
    const auto& tr = sol.traj;
    Verdict v;
    switch (tr.termination) {
        case ode::Termination::Event:
            v.t_star = tr.event_t;
            if (tr.event_name == kEventInvariantExit) {
                v.kind = VerdictKind::InvariantSetExit;
                v.reason = "left the invariant set of the ansatz";
            } else if (tr.event_name == kEventShapeOperator) {
                v.kind = VerdictKind::InvariantSetExit;
                v.reason = "a shape operator eigenvalue reached zero";
            } else if (tr.event_name == kEventMetricDegenerate) {
                v.kind = VerdictKind::MetricDegenerate;
                v.reason = "a metric function reached zero";
            } else {
                v.kind = VerdictKind::Inconclusive;
                v.reason = "terminated by event " + tr.event_name;
            }
            return v;
        case ode::Termination::StateInvalid:
            v.kind = VerdictKind::MetricDegenerate;
            v.t_star = tr.samples.empty() ? 0.0 : tr.back().t;
            v.reason = "state left the domain of the equations";
            return v;
        case ode::Termination::StepFailure:
            v.kind = VerdictKind::Inconclusive;
            v.t_star = tr.samples.empty() ? 0.0 : tr.back().t;
            v.reason = "integrator failure: " + tr.message;
            return v;
        case ode::Termination::ReachedTMax:
            break;
    }

    const auto ctx = invariant_context(sol.spec);
    if (!has_invariant_window(ctx)) {
        v.kind = VerdictKind::Inconclusive;
        v.reason = "the ansatz has no invariant window (negative discriminant)";
        return v;
    }
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto s = sol.state(i);
        const auto viol = invariant_violation(s, sol.spec, ctx);
        if (viol && *viol > 0.0) {
            v.kind = VerdictKind::InvariantSetExit;
            v.t_star = s.t;
            v.reason = "invariant set violated at a sample";
            return v;
        }
        for (double d : s.df) {
            if (!(d > 0.0)) {
                v.kind = VerdictKind::InvariantSetExit;
                v.t_star = s.t;
                v.reason = "shape operator not positive at a sample";
                return v;
            }
        }
    }
    const auto cons = conservation_report(sol, opts.conservation_tol);
    if (!cons.ok()) {
        v.kind = VerdictKind::Inconclusive;
        v.reason = "conservation residual " + std::to_string(cons.max_residual) + " above tolerance";
        return v;
    }
    v.kind = VerdictKind::NumericallyComplete;
    v.reason = "reached t_max = " + std::to_string(tr.back().t);
    return v;
}

// ---- comparison ODE and growth probe ------------------------------------

double comparison_ode_closed_form(double a, double y_star, double s_star, double s) {
    if (!(a > 0.0)) throw std::invalid_argument("comparison ODE needs a > 0");
    if (!(-a + 0.5 * y_star * y_star < 0.0)) throw std::invalid_argument("comparison ODE needs y_star^2 < 2a");
    const double r = std::sqrt(2.0 * a);
    return r * std::tanh(std::sqrt(a / 2.0) * (s_star - s) + std::atanh(y_star / r));
}

double comparison_ode_threshold(double c, double s0) {
    if (!(c > 0.0) || !(s0 > 0.0)) throw std::invalid_argument("comparison_ode_threshold needs c > 0 and s0 > 0");
    // -y(s0) = sqrt(2a) tanh(sqrt(a/2) s0) is increasing in a
    auto slope = [s0](double a) { return std::sqrt(2.0 * a) * std::tanh(std::sqrt(a / 2.0) * s0); };
    double lo = 0.0;
    double hi = 1.0;
    while (slope(hi) < c) hi *= 2.0;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) >= c ? hi : lo) = mid;
    }
    return hi;
}

namespace {

GrowthSample probe_one(const ProblemSpec& family, double C, double tau, const SolveOptions& base) {
    GrowthSample g;
    g.C = C;
    ProblemSpec spec = family;
    spec.C = C;
    SolveOptions so = base;
    so.invariant_event = false;
    so.checkpoints.clear();
    so.integrator.t_max = tau;
    try {
        const auto sol = solve_problem(spec, so);
        g.slope = -sol.final_state().du;
        g.admissible = sol.traj.termination == ode::Termination::ReachedTMax;
        if (!g.admissible) g.note = termination_name(sol.traj.termination) + " " + sol.traj.event_name;
    } catch (const std::exception& e) {
        g.note = e.what();
    }
    return g;
}

}  // namespace

GrowthProbeReport growth_probe(const ProblemSpec& family, double c, double tau, const GrowthProbeOptions& opts) {
    if (!(c > 0.0)) throw std::invalid_argument("growth_probe: c must be positive");
    if (!(opts.C_min < opts.C_max) || !(opts.C_max < 0.0)) {
        throw std::invalid_argument("growth_probe: need C_min < C_max < 0");
    }
    if (opts.per_decade < 1) throw std::invalid_argument("growth_probe: per_decade must be >= 1");
    ProblemSpec probe_spec = family;
    probe_spec.C = opts.C_max;
    probe_spec.validate();
    const double delta = opts.solve.launch.delta > 0.0 ? opts.solve.launch.delta : default_launch_delta(probe_spec);
    if (!(tau > delta)) throw std::invalid_argument("growth_probe: tau must exceed the launch offset");

    GrowthProbeReport rep;
    rep.c = c;
    rep.tau = tau;

    // grid in log|C|, most negative first
    const double e_hi = std::log10(-opts.C_min);
    const double e_lo = std::log10(-opts.C_max);
    const int steps = int(std::ceil((e_hi - e_lo) * opts.per_decade - 1e-9));
    std::vector<double> grid;
    for (int k = 0; k <= steps; ++k) {
        const double e = std::max(e_lo, e_hi - double(k) / opts.per_decade);
        grid.push_back(-std::pow(10.0, e));
    }

    std::vector<GrowthSample> res(grid.size());
    std::atomic<std::size_t> next{0};
    unsigned workers = opts.jobs > 0 ? unsigned(opts.jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(grid.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < grid.size(); i = next++) res[i] = probe_one(family, grid[i], tau, opts.solve);
        });
    }
    for (auto& th : pool) th.join();

    auto meets = [c](const GrowthSample& g) { return g.admissible && g.slope >= c; };
    std::size_t run = 0;
    while (run < res.size() && meets(res[run])) ++run;

    std::vector<GrowthSample> all = res;
    if (run == 0) {
        rep.found = false;
        rep.message = "no admissible C in range";
    } else if (run == res.size()) {
        rep.found = true;
        rep.empirical_C0 = res.back().C;
        rep.bracket_other = 0.0;
        rep.message = "every sampled C meets the target; bracket extends to the least negative grid point";
    } else {
        double meet = res[run - 1].C;
        double miss = res[run].C;
        while ((std::abs(meet) - std::abs(miss)) / std::abs(meet) > opts.bracket_rel) {
            const double mid = -std::sqrt(meet * miss);
            auto g = probe_one(family, mid, tau, opts.solve);
            const bool ok = meets(g);
            all.push_back(g);
            (ok ? meet : miss) = mid;
        }
        rep.found = true;
        rep.empirical_C0 = meet;
        rep.bracket_other = miss;
    }

    std::sort(all.begin(), all.end(), [](const GrowthSample& x, const GrowthSample& y) { return x.C < y.C; });
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        if (!all[i].admissible || !all[i + 1].admissible) continue;
        if (all[i].slope < all[i + 1].slope - 1e-9 * (1.0 + std::abs(all[i + 1].slope))) rep.monotone = false;
    }
    rep.samples = std::move(all);

    if (rep.found) {
        const int dS = collapsing_dim(family.ansatz);
        rep.empirical_udd0 = rep.empirical_C0 / (dS + 1.0);
        ProblemSpec at = family;
        at.C = rep.empirical_C0;
        const double budget = curvature_budget(launch(at, opts.solve.launch), at.ansatz);
        if (std::isfinite(budget) && collapsing_dim(family.ansatz) == 1) rep.c_star = budget;
    }
    return rep;
}

// ---- serialization ------------------------------------------------------

nlohmann::json to_json(const TwoSummandsDiagnostics& d) {
    return {{"check", "fibre-to-base ratio window of the two-summands ansatz"},
            {"D", d.D},
            {"omega1", opt(d.omega1)},
            {"omega2", opt(d.omega2)},
            {"omega1_check", d.omega1_check},
            {"omega2_check", d.omega2_check}};
}

nlohmann::json to_json(const PotentialReport& r) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : r.violations) v.push_back(to_json(x));
    return {{"check", "soliton potential is negative, decreasing and concave"},
            {"applicable", r.applicable},
            {"trivial_potential", r.trivial},
            {"concavity_required", r.concavity_required},
            {"checked", r.checked},
            {"u_violations", r.u_violations},
            {"du_violations", r.du_violations},
            {"udd_violations", r.udd_violations},
            {"violations", v}};
}

nlohmann::json to_json(const AsymptoteReport& r) {
    nlohmann::json j = {{"check", r.steady ? "steady terminal slope approaches sqrt(-C)"
                                           : "expanding slope stays below (eps/2) t + sqrt(-C)"},
                        {"steady", r.steady},
                        {"reached_t_max", r.reached_t_max},
                        {"t_end", r.t_end},
                        {"terminal_slope", r.terminal_slope},
                        {"target_slope", r.target_slope},
                        {"slope_error", r.slope_error},
                        {"relative_slope_error", r.relative_slope_error},
                        {"terminal_udd", r.terminal_udd}};
    if (!r.steady) {
        j["upper_bound_violations"] = r.upper_bound_violations;
        j["first_upper_violation"] = r.first_upper_violation ? to_json(*r.first_upper_violation) : nlohmann::json();
        j["lower_bound_checks"] = r.lower_bound_checks;
        j["lower_bound_violations"] = r.lower_bound_violations;
    }
    return j;
}

nlohmann::json to_json(const ConservationReport& r) {
    return {{"check", "first integral of the soliton equations"},
            {"max_residual", r.max_residual},
            {"max_trace_form_residual", r.max_trace_form_residual},
            {"max_form_disagreement", r.max_form_disagreement},
            {"max_identity_mismatch", r.max_identity_mismatch},
            {"tolerance", r.tolerance},
            {"ok", r.ok()}};
}

nlohmann::json to_json(const LocusTrajectoryReport& r) {
    return {{"check", "Einstein and strict soliton loci are preserved"},
            {"strict", r.strict},
            {"einstein", r.einstein},
            {"outside", r.outside},
            {"unclassifiable", r.unclassifiable},
            {"max_einstein_residual", r.max_einstein_residual},
            {"first_strict_exit", r.first_strict_exit ? nlohmann::json(*r.first_strict_exit) : nlohmann::json()}};
}

nlohmann::json to_json(const OmegaMonitorReport& r) {
    return {{"check", "omega stays below omega2 with slope at most 1/f_bar"},
            {"roots_exist", r.roots_exist},
            {"omega2", opt(r.omega2)},
            {"max_omega", r.max_omega},
            {"max_omega_dot", r.max_omega_dot},
            {"omega_dot_limit", r.omega_dot_limit},
            {"slope_violations", r.slope_violations},
            {"window_held", r.window_held},
            {"launch_omega", r.launch_omega},
            {"launch_omega_dot", r.launch_omega_dot}};
}

nlohmann::json to_json(const DWMonitorReport& r) {
    nlohmann::json j = {{"check", "a priori bounds on omega_i and Q_ij are preserved"},
                        {"C0_bound", r.C0_bound},
                        {"samples", r.samples},
                        {"bound_violations", r.bound_violations},
                        {"first_violation_t", opt(r.first_violation_t)},
                        {"worst_ratio", r.worst_ratio},
                        {"qdot_violations", r.qdot_violations},
                        {"key_estimate_violations", r.key_estimate_violations}};
    if (r.kahler_samples > 0) {
        j["kahler_samples"] = r.kahler_samples;
        j["max_kahler_residual"] = r.max_kahler_residual;
    }
    return j;
}

nlohmann::json to_json(const LppMonitorReport& r) {
    return {{"check", "omega_1^2 stays below 4 p1 / ((d1 + 2) q1^2)"},
            {"bound", r.bound},
            {"worst_ratio", r.worst_ratio},
            {"violations", r.violations}};
}

nlohmann::json to_json(const ScalarBoundReport& r) {
    return {{"check", "tr r is bounded by half the weighted Killing budget"},
            {"violations", r.violations},
            {"max_excess", r.max_excess}};
}

nlohmann::json to_json(const Verdict& v) {
    return {{"verdict", verdict_name(v.kind)}, {"t_star", opt(v.t_star)}, {"reason", v.reason}, {"text", v.text()}};
}

nlohmann::json to_json(const GrowthProbeReport& r) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& g : r.samples) {
        s.push_back({{"C", g.C}, {"slope", g.slope}, {"admissible", g.admissible}, {"note", g.note}});
    }
    return {{"check", "slope target at tau is met once C is negative enough"},
            {"c", r.c},
            {"tau", r.tau},
            {"c_star", opt(r.c_star)},
            {"found", r.found},
            {"empirical_C0", r.found ? nlohmann::json(r.empirical_C0) : nlohmann::json()},
            {"bracket_other", r.found ? nlohmann::json(r.bracket_other) : nlohmann::json()},
            {"empirical_udd0", r.found ? nlohmann::json(r.empirical_udd0) : nlohmann::json()},
            {"monotone", r.monotone},
            {"message", r.message},
            {"samples", s}};
}

}  // namespace solitonlab::monitors
