// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "solitonlab/config.hpp"
#include "solitonlab/homogeneous_geometry.hpp"
#include "solitonlab/lie_oracle.hpp"
#include "solitonlab/monitors.hpp"
#include "solitonlab/rescaled_flow.hpp"
#include "solitonlab/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using namespace solitonlab;
using namespace solitonlab::monitors;

namespace {

const fs::path kSpecs = SOLITONLAB_SPECS;
const fs::path kData = SOLITONLAB_DATA;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

RunConfig spec_file(const std::string& name) { return load_config((kSpecs / (name + ".json")).string()); }

std::vector<RunConfig> all_specs() {
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(kSpecs))
        if (e.path().extension() == ".json") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    std::vector<RunConfig> out;
    for (const auto& p : paths) out.push_back(load_config(p.string()));
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome conservation() {
    Outcome o;
    double worst = 0.0, worst_forms = 0.0;
    int count = 0;
    for (const char* sys : {"ts", "dw", "lpp"}) {
        for (const char* tag : {"eps0_C0", "eps0_C1", "eps1_C0", "eps1_C10"}) {
            const auto cfg = spec_file(std::string("conservation_") + sys + "_" + tag);
            const auto sol = solve_problem(cfg.spec, cfg.solve);
            const auto rep = conservation_report(sol);
            const double scaled = rep.max_residual / (1.0 + std::abs(cfg.spec.C));
            worst = std::max(worst, scaled);
            worst_forms = std::max(worst_forms, rep.max_form_disagreement);
            if (scaled > 1e-8 || rep.max_form_disagreement > 1e-10) o.pass = false;
            ++count;
        }
    }
    o.detail = std::to_string(count) + " specs, max residual/(1+|C|) " + fmt("%.3g", worst) + ", max form disagreement " +
               fmt("%.3g", worst_forms);
    return o;
}

Outcome curvature_oracle() {
    Outcome o;
    double worst = 0.0;
    std::vector<std::pair<oracle::HomogeneousSpace, std::vector<double>>> cases{
        {oracle::su2_su2_product(), {1.0, 2.0}},
        {oracle::su2_su2_berger(), {0.5, 1.5, 2.0}},
        {oracle::su2_su2_circle(), {1.0, 3.0}},
        {oracle::su2_su2_diagonal(), {0.7}}};
    for (unsigned seed = 1; seed <= 10; ++seed) cases.push_back({oracle::su2_su2_random_split({1, 2, 3}, seed), {0.4, 1.3, 2.2}});
    for (const auto& [space, x] : cases) {
        const auto dec = oracle::extract_decomposition(space);
        const auto closed = geometry::ricci_eigenvalues(dec, geometry::ScalingVector{x});
        const auto brute = oracle::brute_ricci_eigenvalues(space, x);
        for (std::size_t i = 0; i < closed.size(); ++i) worst = std::max(worst, rel(closed[i], brute[i]));
        worst = std::max(worst, rel(geometry::scalar_curvature(dec, geometry::ScalingVector{x}),
                                    oracle::brute_scalar_curvature(space, x)));
    }
    if (worst > 1e-12) o.pass = false;

    const auto torus = geometry::load_decomposition((kData / "abelian_t3.json").string());
    const geometry::ScalingVector tx{{0.3, 1.0, 7.0}};
    bool flat = geometry::scalar_curvature(torus, tx) == 0.0;
    for (double r : geometry::ricci_eigenvalues(torus, tx)) flat = flat && r == 0.0;
    if (!flat) o.pass = false;

    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> count(1, 4), dim(1, 6);
    std::uniform_real_distribution<double> pos(0.0, 3.0), lg(-2.0, 2.0);
    double trace_worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const int s = count(rng);
        std::vector<geometry::Summand> sums;
        for (int i = 0; i < s; ++i) sums.push_back({dim(rng), pos(rng), std::nullopt});
        geometry::IsotropyDecomposition dec(sums);
        for (int i = 0; i < s; ++i)
            for (int j = i; j < s; ++j)
                for (int k = j; k < s; ++k)
                    if (rng() % 2) dec.set_triple(i, j, k, pos(rng));
        geometry::ScalingVector x;
        for (int i = 0; i < s; ++i) x.x.push_back(std::exp(lg(rng)));
        const auto r = geometry::ricci_eigenvalues(dec, x);
        double tr = 0.0, mag = 0.0;
        for (int i = 0; i < s; ++i) {
            tr += dec.dim(std::size_t(i)) * r[std::size_t(i)];
            mag += std::abs(dec.dim(std::size_t(i)) * r[std::size_t(i)]);
        }
        trace_worst = std::max(trace_worst, std::abs(tr - geometry::scalar_curvature(dec, x)) / std::max(1.0, mag));
    }
    if (trace_worst > 1e-13) o.pass = false;
    o.detail = "max oracle deviation " + fmt("%.3g", worst) + ", torus " + (flat ? "exactly flat" : "NOT flat") +
               ", trace identity " + fmt("%.3g", trace_worst);
    return o;
}

Outcome integrator_oracle() {
    Outcome o;
    double worst = 0.0;
    for (double a : {0.5, 1.0, 2.0, 8.0}) {
        ode::IntegratorConfig cfg;
        cfg.t_max = 5.0;
        cfg.rel_tol = 1e-12;
        cfg.abs_tol = 1e-14;
        const auto tr = ode::integrate(
            [a](double, std::span<const double> y, std::span<double> dy) { dy[0] = -a + 0.5 * y[0] * y[0]; }, 0.0, {0.0},
            cfg);
        if (tr.termination != ode::Termination::ReachedTMax) o.pass = false;
        for (const auto& s : tr.samples)
            worst = std::max(worst, std::abs(s.y[0] - comparison_ode_closed_form(a, 0.0, 0.0, s.t)));
    }
    ode::IntegratorConfig cfg;
    cfg.t_max = 5.0;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    cfg.events.push_back({"level", [](double, std::span<const double> y) { return y[0] + 1.0; }, -1, true});
    const auto tr = ode::integrate(
        [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -2.0 + 0.5 * y[0] * y[0]; }, 0.0, {0.0}, cfg);
    const double event_err = std::abs(tr.event_t - std::atanh(0.5));
    if (worst > 1e-9 || event_err > 1e-9) o.pass = false;
    o.detail = "max deviation " + fmt("%.3g", worst) + ", event time error " + fmt("%.3g", event_err);
    return o;
}

struct SpecRun {
    RunConfig cfg;
    Solution sol;
};

Outcome monotonicity(const std::vector<SpecRun>& runs) {
    Outcome o;
    std::size_t checked_runs = 0, samples = 0, violations = 0;
    for (const auto& r : runs) {
        if (!(r.cfg.spec.C < 0.0)) continue;
        const auto rep = potential_report(r.sol);
        ++checked_runs;
        samples += rep.checked;
        violations += rep.violation_count();
    }
    o.pass = violations == 0 && checked_runs > 0;
    o.detail = std::to_string(checked_runs) + " runs, " + std::to_string(samples) + " samples, " +
               std::to_string(violations) + " violations";
    return o;
}

Outcome steady_asymptote() {
    Outcome o;
    // the shipped constants must be the ones the structure-constant oracle produces
    const auto raw = two_summands_from_decomposition(oracle::extract_decomposition(oracle::sp1_sp2_hopf()));
    const double lambda = raw.A1 / (raw.d1 * (raw.d1 - 1.0));
    const auto cfg = spec_file("complete_two_summands");
    const auto& a = std::get<TwoSummandsAnsatz>(cfg.spec.ansatz);
    const double dA = std::max({rel(a.A1, raw.A1 / lambda), rel(a.A2, raw.A2 / lambda), rel(a.A3, raw.A3 / lambda)});
    const bool dims = a.d1 == raw.d1 && a.d2 == raw.d2;
    const auto sol = solve_problem(cfg.spec, cfg.solve);
    const auto rep = asymptote_check(sol);
    const bool horizon = rep.reached_t_max && std::abs(rep.t_end - 100.0) < 1e-9;
    o.pass = dims && dA <= 1e-12 && horizon && rep.relative_slope_error <= 0.01 && std::abs(rep.terminal_udd) <= 1e-3;
    o.detail = "C = " + fmt("%g", cfg.spec.C) + ", -du(100) = " + fmt("%.6g", rep.terminal_slope) + " vs " +
               fmt("%.6g", rep.target_slope) + " (" + fmt("%.3g", 100.0 * rep.relative_slope_error) + "%), udd(100) = " +
               fmt("%.3g", rep.terminal_udd) + ", constants vs oracle " + fmt("%.3g", dA);
    return o;
}

Outcome expanding(const std::vector<SpecRun>& runs) {
    Outcome o;
    std::size_t n = 0, samples = 0, violations = 0;
    for (const auto& r : runs) {
        if (r.cfg.spec.epsilon != 1.0) continue;
        const auto rep = asymptote_check(r.sol);
        ++n;
        samples += r.sol.size();
        violations += rep.upper_bound_violations;
    }
    o.pass = n > 0 && violations == 0;
    o.detail = std::to_string(n) + " runs, " + std::to_string(samples) + " samples, " + std::to_string(violations) +
               " violations";
    return o;
}

Outcome growth() {
    Outcome o;
    const auto cfg = spec_file("complete_two_summands_d1");
    GrowthProbeOptions opts;
    opts.solve = cfg.solve;
    const auto five = growth_probe(cfg.spec, 5.0, 0.5, opts);
    const auto ten = growth_probe(cfg.spec, 10.0, 0.5, opts);
    bool below_ok = true;
    for (const auto& s : five.samples)
        if (s.C < five.empirical_C0 && !(s.admissible && s.slope >= 5.0)) below_ok = false;
    const bool unit = cfg.spec.initial.at(0) == 1.0 && std::get<TwoSummandsAnsatz>(cfg.spec.ansatz).d1 == 1;
    o.pass = unit && five.found && std::isfinite(five.empirical_C0) && five.empirical_C0 < 0.0 && below_ok && ten.found &&
             std::abs(ten.empirical_C0) >= std::abs(five.empirical_C0);
    o.detail = "C0(c=5) = " + fmt("%.6g", five.empirical_C0) + ", C0(c=10) = " + fmt("%.6g", ten.empirical_C0) + ", " +
               std::to_string(five.samples.size()) + " samples" + (below_ok ? "" : ", a sample below C0 misses");
    return o;
}

Outcome invariant_sets() {
    Outcome o;
    std::string detail;
    auto verdict_of = [](const Solution& s) { return classify_completeness(s).kind; };
    {
        const auto cfg = spec_file("complete_two_summands");
        const auto sol = solve_problem(cfg.spec, cfg.solve);
        const auto om = two_summands_omega_monitor(sol);
        const bool ok = verdict_of(sol) == VerdictKind::NumericallyComplete && om.window_held && sol.final_state().t >= 100.0;
        o.pass = o.pass && ok;
        detail += std::string("two_summands ") + (ok ? "ok" : "FAILED");
    }
    {
        const auto cfg = spec_file("complete_dancer_wang");
        const auto sol = solve_problem(cfg.spec, cfg.solve);
        const auto dw = dw_apriori_monitor(sol);
        const bool ok = verdict_of(sol) == VerdictKind::NumericallyComplete && dw.all_ok() && sol.final_state().t >= 100.0;
        o.pass = o.pass && ok;
        detail += std::string(", dancer_wang ") + (ok ? "ok" : "FAILED");
    }
    {
        const auto cfg = spec_file("complete_lpp");
        const auto sol = solve_problem(cfg.spec, cfg.solve);
        const bool ok = verdict_of(sol) == VerdictKind::NumericallyComplete && lpp_monitor(sol).violations == 0 &&
                        sol.final_state().t >= 100.0;
        o.pass = o.pass && ok;
        detail += std::string(", lpp ") + (ok ? "ok" : "FAILED");
    }
    {
        const auto cfg = spec_file("exit_two_summands");
        const auto sol = solve_problem(cfg.spec, cfg.solve);
        const auto v = classify_completeness(sol);
        const bool no_roots = !two_summands_roots(std::get<TwoSummandsAnsatz>(cfg.spec.ansatz)).omega2;
        const bool ok = cfg.spec.C == 0.0 && no_roots && v.kind == VerdictKind::InvariantSetExit;
        o.pass = o.pass && ok;
        detail += ", exit spec " + verdict_name(v.kind) + (v.t_star ? " at t = " + fmt("%.4g", *v.t_star) : "");
    }
    o.detail = detail;
    return o;
}

Outcome charts() {
    Outcome o;
    double worst = 0.0;
    std::size_t compared = 0;
    for (const char* name : {"chart_dw_m1", "chart_dw_m2"}) {
        const auto cfg = spec_file(name);
        auto opts = cfg.solve;
        opts.integrator.t_max = 10.0;
        opts.checkpoints.clear();
        for (int k = 1; k < 40; ++k) opts.checkpoints.push_back(0.25 * k);
        const auto phys = solve_problem(cfg.spec, opts);
        const auto resc = integrate_rescaled(cfg.spec, opts);
        std::vector<SolitonState> a{phys.state(0)}, b{resc.physical(0)};
        for (std::size_t i = 0; i < phys.size(); ++i)
            if (phys.traj.samples[i].event == "checkpoint") a.push_back(phys.state(i));
        for (std::size_t i = 0; i < resc.size(); ++i)
            if (resc.traj.samples[i].event == "checkpoint") b.push_back(resc.physical(i));
        a.push_back(phys.final_state());
        b.push_back(resc.physical(resc.size() - 1));
        if (a.size() != b.size() || a.size() != 41 || phys.traj.termination != ode::Termination::ReachedTMax ||
            resc.traj.event_name != "horizon") {
            o.pass = false;
            continue;
        }
        for (std::size_t j = 0; j < a.size(); ++j) {
            worst = std::max(worst, std::abs(a[j].t - b[j].t));
            for (std::size_t i = 0; i < a[j].f.size(); ++i) worst = std::max(worst, rel(b[j].f[i], a[j].f[i]));
            worst = std::max(worst, rel(b[j].du, a[j].du));
            ++compared;
        }
    }
    double crit = 0.0;
    for (const auto& a : {DancerWangAnsatz{{{2, 2, 1, false}}}, DancerWangAnsatz{{{2, 2, 1, false}, {2, 2, 1, false}}}}) {
        for (double v : rhs_rescaled(critical_point(a), a, 0.0)) crit = std::max(crit, std::abs(v));
    }
    o.pass = o.pass && worst <= 1e-6 && crit <= 1e-12;
    o.detail = std::to_string(compared) + " matched times, max deviation " + fmt("%.3g", worst) +
               ", rhs at critical point " + fmt("%.3g", crit);
    return o;
}

Outcome kahler() {
    Outcome o;
    double phys_worst = 0.0, resc_worst = 0.0;
    for (const char* name : {"kahler_dw_steady", "kahler_dw_expanding"}) {
        const auto cfg = spec_file(name);
        const auto& a = std::get<DancerWangAnsatz>(cfg.spec.ansatz);
        auto opts = cfg.solve;
        opts.integrator.t_max = 10.0;
        opts.invariant_event = false;
        const auto phys = solve_problem(cfg.spec, opts);
        const auto resc = integrate_rescaled(cfg.spec, opts);
        if (phys.final_state().t < 10.0 || resc.traj.event_name != "horizon") o.pass = false;
        for (std::size_t i = 0; i < phys.size(); ++i)
            for (double v : kahler_residual(phys.state(i), a)) phys_worst = std::max(phys_worst, std::abs(v));
        for (std::size_t i = 0; i < resc.size(); ++i) {
            const auto res = rescaled_locus_residuals(resc.state(i), a, cfg.spec.epsilon);
            for (double v : res.kahler_first) resc_worst = std::max(resc_worst, std::abs(v));
            for (double v : res.kahler_second) resc_worst = std::max(resc_worst, std::abs(v));
        }
    }
    o.pass = o.pass && phys_worst <= 1e-6 && resc_worst <= 1e-6;
    o.detail = "physical chart " + fmt("%.3g", phys_worst) + ", rescaled chart " + fmt("%.3g", resc_worst);
    return o;
}

Outcome determinism(const std::vector<RunConfig>& cfgs) {
    Outcome o;
    const auto root = fs::temp_directory_path() / ("solitonlab_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    std::size_t same = 0;
    for (const auto& cfg : cfgs) {
        const auto a = root / (cfg.name + "_a"), b = root / (cfg.name + "_b");
        run_config(cfg, a, true);
        run_config(cfg, b, true);
        const auto ta = slurp(a / "trajectory.csv");
        if (!ta.empty() && ta == slurp(b / "trajectory.csv")) ++same;
        else o.pass = false;
    }
    fs::remove_all(root);
    o.detail = std::to_string(same) + "/" + std::to_string(cfgs.size()) + " specs bitwise identical";
    return o;
}

}  // namespace

int main() {
    const auto cfgs = all_specs();
    std::vector<SpecRun> runs;
    for (const auto& c : cfgs) runs.push_back({c, solve_problem(c.spec, c.solve)});

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"conservation-law fidelity", conservation},
        {"curvature oracle equivalence", curvature_oracle},
        {"integrator oracle", integrator_oracle},
        {"potential monotonicity", [&] { return monotonicity(runs); }},
        {"steady asymptote", steady_asymptote},
        {"expanding slope bound", [&] { return expanding(runs); }},
        {"growth probe", growth},
        {"invariant-set preservation", invariant_sets},
        {"chart equivalence", charts},
        {"Kahler locus", kahler},
        {"determinism", [&] { return determinism(cfgs); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
