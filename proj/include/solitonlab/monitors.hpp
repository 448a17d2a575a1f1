#pragma once

#include "solitonlab/solve.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace solitonlab::monitors {

// ---- two summands -------------------------------------------------------

struct TwoSummandsDiagnostics {
    double D = 0.0;
    std::optional<double> omega1;
    std::optional<double> omega2;
    bool omega1_check = false;  // omega1^2 < A2 / (4 A3)
    bool omega2_check = false;  // omega2^2 < A2 / (2 A3)
};

TwoSummandsDiagnostics two_summands_roots(const TwoSummandsAnsatz& a);
// A1/d1 - (A2/d2) w^2 + A3 (1/d1 + 2/d2) w^4
double omega_quartic(const TwoSummandsAnsatz& a, double omega);
// (A2/d2)^2 / (4 A3/d2) >= (2 d1 + d2)(d1 - 1)/d1
bool discriminant_ratio_predicate(const TwoSummandsAnsatz& a);

struct C0ZeroPredicates {
    bool circle_bundle;  // A2^2 > 2 d2 (d2 + 2) A3
    bool general;        // (d1 + 1) A2^2 > 4 d1 d2 (2 d1 + d2) A3
};
C0ZeroPredicates c0_zero_predicates(const TwoSummandsAnsatz& a);

double omega(const SolitonState& s);
double omega_dot(const SolitonState& s);

// ---- Dancer-Wang and LPP ------------------------------------------------

// max{Q_ij(0), sqrt((d_j + 2)/d_j p_i/p_j)} + 1 over i != j; 1 when m = 1
double dw_c0(const DancerWangAnsatz& a, const std::vector<double>& g0);
// right-hand side of the omega_i^2 bound
double dw_omega_bound(const DancerWangAnsatz& a, std::size_t i, double c0);

struct DWMonitorState {
    double t = 0.0;
    std::vector<double> omega;
    std::vector<std::vector<double>> Q;
    double C0_bound = 1.0;
    bool bound_ok = true;
    double worst_ratio = 0.0;  // max of omega_i^2 / bound_i and Q_ij / C0
};

DWMonitorState dw_state(const SolitonState& s, const DancerWangAnsatz& a, double c0);
double lpp_omega_bound(const LuPagePopeAnsatz& a);

// ---- invariant sets and budgets ----------------------------------------

// Precomputed constants for the ansatz invariant set.
struct InvariantContext {
    SystemKind kind = SystemKind::TwoSummands;
    std::optional<double> omega2;  // two summands window, absent when D < 0
    double dw_c0 = 1.0;
};

InvariantContext invariant_context(const ProblemSpec& spec);
bool has_invariant_window(const InvariantContext& ctx);
// negative inside the invariant set, positive outside; nullopt when no window exists
std::optional<double> invariant_violation(const SolitonState& s, const ProblemSpec& spec, const InvariantContext& ctx);

// -tr_g B for the ansatz
double curvature_budget(const SolitonState& s, const Ansatz& a);

// ---- loci ---------------------------------------------------------------

struct LocusReport {
    bool classifiable = false;
    double trace_ratio = 0.0;      // tr L / (-du + tr L)
    double curvature_ratio = 0.0;  // (tr L^2 + tr r)/(-du + tr L)^2 + (n-1)(eps/2) Lc^2
    std::string locus;             // "strict", "einstein", "outside", "unclassifiable"
};

LocusReport locus_membership(const SolitonState& s, const ProblemSpec& spec, double tol = 1e-7);

// ---- trajectory reports -------------------------------------------------

struct Violation {
    std::size_t sample = 0;
    double t = 0.0;
    std::string quantity;
    double value = 0.0;
};

struct PotentialReport {
    bool applicable = false;         // C < 0 and eps >= 0
    bool trivial = false;            // C = 0
    bool concavity_required = false;  // eps > 0, or eps = 0 with L != 0 (checked per sample)
    std::size_t checked = 0;
    std::size_t u_violations = 0;
    std::size_t du_violations = 0;
    std::size_t udd_violations = 0;
    std::vector<Violation> violations;  // first few
    std::size_t violation_count() const { return u_violations + du_violations + udd_violations; }
    bool ok() const { return violation_count() == 0; }
};

PotentialReport potential_report(const Solution& sol);
PotentialReport potential_report(const std::vector<SolitonState>& states, const std::vector<double>& udd,
                                 const ProblemSpec& spec);

struct AsymptoteReport {
    bool steady = true;
    bool reached_t_max = false;
    double t_end = 0.0;
    double terminal_slope = 0.0;  // -du(t_end)
    double target_slope = 0.0;    // sqrt(-C)
    double slope_error = 0.0;     // |terminal - target|
    double relative_slope_error = 0.0;
    double terminal_udd = 0.0;
    std::size_t upper_bound_violations = 0;
    std::optional<Violation> first_upper_violation;
    std::size_t lower_bound_checks = 0;
    std::size_t lower_bound_violations = 0;
    bool steady_ok(double rel_tol = 0.01, double udd_tol = 1e-3) const;
};

AsymptoteReport asymptote_check(const Solution& sol);

struct ConservationReport {
    double max_residual = 0.0;             // conservation law in first-integral form
    double max_trace_form_residual = 0.0;  // same law via the Ricci trace
    double max_form_disagreement = 0.0;    // |r3 - r4| / (1 + |udd| + |C|)
    double max_identity_mismatch = 0.0;    // |identity - 2 udd| / (1 + |2 udd|)
    double tolerance = 0.0;
    bool ok() const { return max_residual <= tolerance; }
};

ConservationReport conservation_report(const Solution& sol, double tol_scale = 1e-6);

struct LocusTrajectoryReport {
    std::size_t strict = 0;
    std::size_t einstein = 0;
    std::size_t outside = 0;
    std::size_t unclassifiable = 0;
    double max_einstein_residual = 0.0;  // max |ratio - 1| over samples
    std::optional<std::size_t> first_strict_exit;
};

LocusTrajectoryReport locus_report(const Solution& sol, double tol = 1e-7);

struct OmegaMonitorReport {
    bool roots_exist = false;
    std::optional<double> omega2;
    double max_omega = 0.0;
    double max_omega_dot = 0.0;
    double omega_dot_limit = 0.0;  // 1 / f_bar
    std::size_t slope_violations = 0;  // omega_dot > limit (1 + 1e-6) while omega in [0, omega2]
    bool window_held = false;          // omega < omega2 at every sample
    double launch_omega = 0.0;
    double launch_omega_dot = 0.0;
};

OmegaMonitorReport two_summands_omega_monitor(const Solution& sol);

struct DWMonitorReport {
    double C0_bound = 1.0;
    std::size_t samples = 0;
    std::size_t bound_violations = 0;
    std::optional<double> first_violation_t;
    double worst_ratio = 0.0;
    std::size_t qdot_violations = 0;       // dQ_ij above sqrt(p_i / ((d_i - 1) g_j(0)^2)) for d_i > 1
    std::size_t key_estimate_violations = 0;  // p_i/g_i^2 - q_i^2 f^2/(2 g_i^4) >= d_i p_i /((d_i + 2) g_i^2)
    std::vector<DWMonitorState> series;    // one entry per sample
    std::size_t kahler_samples = 0;
    double max_kahler_residual = 0.0;
    bool all_ok() const { return bound_violations == 0; }
};

DWMonitorReport dw_apriori_monitor(const Solution& sol, bool keep_series = false);

struct LppMonitorReport {
    double bound = 0.0;
    double worst_ratio = 0.0;
    std::size_t violations = 0;
};
LppMonitorReport lpp_monitor(const Solution& sol);

struct ScalarBoundReport {
    std::size_t violations = 0;
    double max_excess = 0.0;  // max of tr r - (1/2) sum d_i b_i / f_i^2
};
ScalarBoundReport scalar_curvature_bound(const Solution& sol);

// ---- classification -----------------------------------------------------

enum class VerdictKind { NumericallyComplete, InvariantSetExit, MetricDegenerate, Inconclusive };
std::string verdict_name(VerdictKind k);
VerdictKind parse_verdict(const std::string& s);

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<double> t_star;
    std::string reason;
    std::string text() const;
};

struct ClassifyOptions {
    double conservation_tol = 1e-6;  // scaled by (1 + |C|)
};

Verdict classify_completeness(const Solution& sol, const ClassifyOptions& opts = {});

// ---- comparison ODE and growth probe ------------------------------------

// y' = -a + y^2/2 with y(s_star) = y_star
double comparison_ode_closed_form(double a, double y_star, double s_star, double s);
// smallest a0 such that -y(s0) >= c for all a > a0 (y(0) = 0); closed form bisection
double comparison_ode_threshold(double c, double s0);

struct GrowthSample {
    double C = 0.0;
    double slope = 0.0;  // -du(tau)
    bool admissible = false;
    std::string note;
};

struct GrowthProbeOptions {
    double C_min = -1e4;
    double C_max = -1e-8;
    int per_decade = 4;
    double bracket_rel = 0.01;
    int jobs = 0;  // 0: hardware concurrency
    SolveOptions solve;
};

struct GrowthProbeReport {
    double c = 0.0;
    double tau = 0.0;
    std::optional<double> c_star;  // curvature budget at launch
    bool found = false;
    double empirical_C0 = 0.0;      // conservative end of the bracket
    double bracket_other = 0.0;     // the end that misses the target
    double empirical_udd0 = 0.0;    // empirical_C0 / (d_S + 1)
    bool monotone = true;
    std::vector<GrowthSample> samples;  // sorted by C
    std::string message;
};

GrowthProbeReport growth_probe(const ProblemSpec& family, double c, double tau, const GrowthProbeOptions& opts);

// ---- serialization ------------------------------------------------------

nlohmann::json to_json(const TwoSummandsDiagnostics& d);
nlohmann::json to_json(const PotentialReport& r);
nlohmann::json to_json(const AsymptoteReport& r);
nlohmann::json to_json(const ConservationReport& r);
nlohmann::json to_json(const LocusTrajectoryReport& r);
nlohmann::json to_json(const OmegaMonitorReport& r);
nlohmann::json to_json(const DWMonitorReport& r);
nlohmann::json to_json(const LppMonitorReport& r);
nlohmann::json to_json(const ScalarBoundReport& r);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const GrowthProbeReport& r);

}  // namespace solitonlab::monitors
