#include "solitonlab/run.hpp"

#include "solitonlab/homogeneous_geometry.hpp"
#include "solitonlab/rescaled_flow.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace solitonlab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string run_id(const json& config) {
    const std::string text = config.dump() + "|" + kVersion;
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

namespace {

class RefusedError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void prepare_dir(const fs::path& out, const std::string& id, bool force) {
    fs::create_directories(out);
    const fs::path manifest = out / "manifest.json";
    if (!fs::exists(manifest) || force) return;
    std::ifstream in(manifest);
    json m;
    try {
        in >> m;
    } catch (const json::exception&) {
        throw RefusedError(out.string() + " holds an unreadable manifest; use --force to overwrite");
    }
    if (m.value("run_id", std::string{}) != id) {
        throw RefusedError(out.string() + " holds a different run (" + m.value("run_id", std::string{"?"}) +
                           "); use --force to overwrite");
    }
}

void write_json(const fs::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

// ---- trajectory CSV -----------------------------------------------------

std::string trajectory_csv(const Solution& sol) {
    const auto& spec = sol.spec;
    const auto names = component_names(spec.ansatz);
    std::ostringstream os;
    os << "t";
    for (const auto& n : names) os << ",f_" << n;
    for (const auto& n : names) os << ",df_" << n;
    os << ",u,du,udd,conservation_residual,trace_ratio,curvature_ratio,locus";

    const auto kind = spec.kind();
    std::optional<monitors::InvariantContext> ctx;
    ctx = monitors::invariant_context(spec);
    const DancerWangAnsatz* dw = std::get_if<DancerWangAnsatz>(&spec.ansatz);
    bool kahler = false;
    if (kind == SystemKind::TwoSummands) {
        os << ",omega,omega_dot";
    } else if (dw) {
        for (std::size_t i = 0; i < dw->m(); ++i) os << ",omega_" << i + 1;
        kahler = std::all_of(dw->factors.begin(), dw->factors.end(), [](const auto& f) { return f.q < 0; });
        if (kahler) {
            for (std::size_t i = 0; i < dw->m(); ++i) os << ",kahler_" << i + 1;
        }
    } else {
        os << ",omega_1";
    }
    os << ",invariant_violation\n";

    for (std::size_t k = 0; k < sol.size(); ++k) {
        const auto s = sol.state(k);
        const double udd = sol.udd(k);
        os << format_number(s.t);
        for (double v : s.f) os << ',' << format_number(v);
        for (double v : s.df) os << ',' << format_number(v);
        os << ',' << format_number(s.u) << ',' << format_number(s.du) << ',' << format_number(udd) << ','
           << format_number(conservation_residual(s, udd, spec));
        const auto lr = monitors::locus_membership(s, spec);
        os << ',' << format_number(lr.trace_ratio) << ',' << format_number(lr.curvature_ratio) << ',' << lr.locus;
        if (kind == SystemKind::TwoSummands) {
            os << ',' << format_number(monitors::omega(s)) << ',' << format_number(monitors::omega_dot(s));
        } else if (dw) {
            for (std::size_t i = 0; i < dw->m(); ++i) os << ',' << format_number(s.f[0] / s.f[i + 1]);
            if (kahler) {
                for (double r : kahler_residual(s, *dw)) os << ',' << format_number(r);
            }
        } else {
            os << ',' << format_number(s.f[0] / s.f[1]);
        }
        const auto viol = monitors::invariant_violation(s, spec, *ctx);
        os << ',' << (viol ? format_number(*viol) : std::string("nan")) << '\n';
    }
    return os.str();
}

std::string rescaled_csv(const RescaledSolution& r) {
    const std::size_t k = r.ansatz.m() + 1;
    std::ostringstream os;
    os << "s";
    for (std::size_t i = 0; i < k; ++i) os << ",X_" << i;
    for (std::size_t i = 0; i < k; ++i) os << ",Y_" << i;
    os << ",Lc,t,u,trace_residual,curvature_residual,energy";
    for (std::size_t i = 1; i < k; ++i) os << ",kahler_a_" << i << ",kahler_b_" << i;
    os << '\n';
    for (std::size_t n = 0; n < r.size(); ++n) {
        const auto st = r.state(n);
        const auto res = rescaled_locus_residuals(st, r.ansatz, r.spec.epsilon);
        os << format_number(st.s);
        for (double v : st.X) os << ',' << format_number(v);
        for (double v : st.Y) os << ',' << format_number(v);
        os << ',' << format_number(st.Lc) << ',' << format_number(st.t) << ',' << format_number(st.u) << ','
           << format_number(res.trace) << ',' << format_number(res.curvature) << ','
           << format_number(rescaled_energy(st, r.ansatz, r.spec.epsilon));
        for (std::size_t i = 0; i + 1 < k; ++i) {
            os << ',' << format_number(res.kahler_first[i]) << ',' << format_number(res.kahler_second[i]);
        }
        os << '\n';
    }
    return os.str();
}

// ---- rescaled chart reports ---------------------------------------------

json rescaled_report(const RescaledSolution& r) {
    double max_trace = 0.0, max_curv = 0.0, max_kahler = 0.0, max_energy = 0.0;
    std::size_t bounded_samples = 0;
    std::size_t strict_breaks = 0;
    std::optional<double> last_trace;
    for (std::size_t n = 0; n < r.size(); ++n) {
        const auto st = r.state(n);
        const auto res = rescaled_locus_residuals(st, r.ansatz, r.spec.epsilon);
        max_trace = std::max(max_trace, std::abs(res.trace));
        max_curv = std::max(max_curv, std::abs(res.curvature));
        for (std::size_t i = 0; i < res.kahler_first.size(); ++i) {
            max_kahler = std::max({max_kahler, std::abs(res.kahler_first[i]), std::abs(res.kahler_second[i])});
        }
        if (rescaled_apriori_bound(st, r.ansatz)) {
            ++bounded_samples;
            max_energy = std::max(max_energy, rescaled_energy(st, r.ansatz, r.spec.epsilon));
        }
        if (r.spec.C < 0.0 && !(res.trace < 0.0)) ++strict_breaks;
        last_trace = res.trace;
    }
    json j = {{"check", "loci and boundedness in the compactified chart"},
              {"samples", r.size()},
              {"termination", ode::termination_name(r.traj.termination)},
              {"event", r.traj.event_name},
              {"max_abs_trace_residual", max_trace},
              {"max_abs_curvature_residual", max_curv},
              {"bounded_samples", bounded_samples},
              {"max_energy_when_bounded", max_energy},
              {"strict_locus_breaks", strict_breaks}};
    const bool kahler = std::all_of(r.ansatz.factors.begin(), r.ansatz.factors.end(), [](const auto& f) { return f.q < 0; });
    if (kahler) j["max_kahler_residual"] = max_kahler;
    return j;
}

// max relative disagreement in (f, g_i, du) at matching checkpoint samples
json chart_comparison(const Solution& direct, const Solution& rescaled) {
    std::vector<const ode::Sample*> a, b;
    for (const auto& s : direct.traj.samples) {
        if (s.event == "checkpoint") a.push_back(&s);
    }
    for (const auto& s : rescaled.traj.samples) {
        if (s.event == "checkpoint") b.push_back(&s);
    }
    if (direct.traj.termination == ode::Termination::ReachedTMax &&
        rescaled.traj.termination == ode::Termination::ReachedTMax) {
        a.push_back(&direct.traj.back());
        b.push_back(&rescaled.traj.back());
    }
    const std::size_t n = std::min(a.size(), b.size());
    double worst = 0.0;
    json points = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const auto sa = SolitonState::from_vector(a[i]->t, a[i]->y);
        const auto sb = SolitonState::from_vector(b[i]->t, b[i]->y);
        double d = 0.0;
        for (std::size_t k = 0; k < sa.f.size(); ++k) {
            d = std::max(d, std::abs(sa.f[k] - sb.f[k]) / std::max(1.0, std::abs(sa.f[k])));
        }
        d = std::max(d, std::abs(sa.du - sb.du) / std::max(1.0, std::abs(sa.du)));
        worst = std::max(worst, d);
        points.push_back({{"t", sa.t}, {"t_rescaled", sb.t}, {"max_rel_diff", d}});
    }
    return {{"check", "physical and compactified charts agree"},
            {"matched_checkpoints", n},
            {"max_rel_diff", worst},
            {"points", points}};
}

// ---- SVG ----------------------------------------------------------------

std::string svg_plot(const Solution& sol) {
    const double W = 640, H = 400, pad = 40;
    const auto names = component_names(sol.spec.ansatz);
    std::vector<std::vector<double>> series(names.size() + 1);
    std::vector<double> ts;
    double ymax = 0.0;
    for (std::size_t k = 0; k < sol.size(); ++k) {
        const auto s = sol.state(k);
        ts.push_back(s.t);
        for (std::size_t i = 0; i < names.size(); ++i) series[i].push_back(s.f[i]);
        series.back().push_back(-s.du);
    }
    for (const auto& ser : series) {
        for (double v : ser) {
            if (std::isfinite(v)) ymax = std::max(ymax, v);
        }
    }
    if (ymax <= 0.0) ymax = 1.0;
    const double tmax = ts.empty() || ts.back() <= 0.0 ? 1.0 : ts.back();
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
       << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        os << "<polyline fill=\"none\" stroke=\"" << colours[i % 7] << "\" points=\"";
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const double x = pad + (W - 2 * pad) * ts[k] / tmax;
            const double y = H - pad - (H - 2 * pad) * std::clamp(series[i][k] / ymax, 0.0, 1.0);
            os << format_number(x) << ',' << format_number(y) << ' ';
        }
        os << "\"/>\n";
        const std::string label = i < names.size() ? names[i] : "-du";
        os << "<text x=\"" << W - pad + 4 << "\" y=\"" << pad + 14 * (i + 1) << "\" font-size=\"11\" fill=\""
           << colours[i % 7] << "\">" << label << "</text>\n";
    }
    os << "<text x=\"" << pad << "\" y=\"" << H - 8 << "\" font-size=\"11\">t in [0, " << format_number(tmax)
       << "], y in [0, " << format_number(ymax) << "]</text>\n</svg>\n";
    return os.str();
}

std::vector<double> comparison_times(const RunConfig& cfg) {
    if (!cfg.solve.checkpoints.empty()) return cfg.solve.checkpoints;
    std::vector<double> out;
    const double hi = std::min(10.0, cfg.solve.integrator.t_max);
    for (int k = 1; k <= int(hi); ++k) out.push_back(double(k));
    return out;
}

}  // namespace

// ---- single run ---------------------------------------------------------

RunOutcome run_config(const RunConfig& cfg, const fs::path& out, bool force) {
    const auto started = std::chrono::steady_clock::now();
    RunOutcome outcome;
    const std::string id = run_id(cfg.raw);
    try {
        prepare_dir(out, id, force);
    } catch (const RefusedError& e) {
        outcome.error = e.what();
        outcome.exit_code = exit_code::error;
        return outcome;
    }

    SolveOptions opts = cfg.solve;
    if (cfg.chart == Chart::Both) opts.checkpoints = comparison_times(cfg);

    std::optional<RescaledSolution> rescaled;
    std::optional<Solution> rescaled_physical;
    if (cfg.chart != Chart::Physical) {
        rescaled = integrate_rescaled(cfg.spec, opts);
        rescaled_physical = physical_solution(*rescaled);
    }
    const Solution sol = cfg.chart == Chart::Rescaled ? *rescaled_physical : solve_problem(cfg.spec, opts);

    json report;
    report["name"] = cfg.name;
    report["spec"] = spec_to_json(cfg.spec);
    report["chart"] = chart_name(cfg.chart);
    report["launch"] = {{"t", sol.launch_state.t}, {"state", sol.launch_state.to_vector()}};
    report["integration"] = {{"termination", ode::termination_name(sol.traj.termination)},
                             {"event", sol.traj.event_name},
                             {"event_t", sol.traj.event_t},
                             {"message", sol.traj.message},
                             {"samples", sol.size()},
                             {"accepted_steps", sol.traj.accepted_steps},
                             {"rejected_steps", sol.traj.rejected_steps}};

    const auto verdict = monitors::classify_completeness(sol);
    report["verdict"] = monitors::to_json(verdict);
    json checks;
    const auto cons = monitors::conservation_report(sol);
    if (cfg.monitor_enabled("conservation")) checks["conservation"] = monitors::to_json(cons);
    const auto pot = monitors::potential_report(sol);
    if (cfg.monitor_enabled("potential")) checks["potential"] = monitors::to_json(pot);
    const auto asym = monitors::asymptote_check(sol);
    if (cfg.monitor_enabled("asymptote")) checks["asymptote"] = monitors::to_json(asym);
    const auto loci = monitors::locus_report(sol);
    if (cfg.monitor_enabled("locus")) checks["locus"] = monitors::to_json(loci);
    if (cfg.monitor_enabled("scalar_bound")) checks["scalar_bound"] = monitors::to_json(monitors::scalar_curvature_bound(sol));
    if (cfg.monitor_enabled("invariant")) {
        switch (cfg.spec.kind()) {
            case SystemKind::TwoSummands: {
                const auto& a = std::get<TwoSummandsAnsatz>(cfg.spec.ansatz);
                checks["roots"] = monitors::to_json(monitors::two_summands_roots(a));
                checks["omega"] = monitors::to_json(monitors::two_summands_omega_monitor(sol));
                break;
            }
            case SystemKind::DancerWang:
                checks["dancer_wang"] = monitors::to_json(monitors::dw_apriori_monitor(sol));
                break;
            case SystemKind::LuPagePope:
                checks["lpp"] = monitors::to_json(monitors::lpp_monitor(sol));
                break;
        }
    }
    if (rescaled) checks["rescaled"] = rescaled_report(*rescaled);
    if (cfg.chart == Chart::Both) checks["chart_comparison"] = chart_comparison(sol, *rescaled_physical);
    report["checks"] = checks;

    std::vector<std::string> artifacts{"trajectory.csv"};
    write_atomic(out / "trajectory.csv", trajectory_csv(sol));
    if (rescaled) {
        write_atomic(out / "rescaled.csv", rescaled_csv(*rescaled));
        artifacts.push_back("rescaled.csv");
    }
    if (cfg.svg) {
        write_atomic(out / "trajectory.svg", svg_plot(sol));
        artifacts.push_back("trajectory.svg");
    }
    write_json(out / "report.json", report);
    artifacts.push_back("report.json");

    outcome.verdict = monitors::verdict_name(verdict.kind);
    outcome.t_end = sol.traj.samples.empty() ? 0.0 : sol.traj.back().t;
    outcome.terminal_slope = asym.terminal_slope;
    outcome.max_conservation_residual = cons.max_residual;
    outcome.max_locus_residual = loci.max_einstein_residual;
    outcome.expanding_bound_violations = asym.upper_bound_violations;
    if (cfg.expect) {
        outcome.exit_code = *cfg.expect == verdict.kind ? exit_code::ok : exit_code::not_complete;
    } else if (verdict.kind == monitors::VerdictKind::NumericallyComplete) {
        outcome.exit_code = exit_code::ok;
    } else if (sol.traj.termination == ode::Termination::StepFailure) {
        outcome.exit_code = exit_code::integrator_failure;
    } else {
        outcome.exit_code = exit_code::not_complete;
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest = {{"run_id", id},
                     {"tool", "solitonlab"},
                     {"version", kVersion},
                     {"name", cfg.name},
                     {"spec", spec_to_json(cfg.spec)},
                     {"config", cfg.raw},
                     {"verdict", outcome.verdict},
                     {"expect", cfg.expect ? json(monitors::verdict_name(*cfg.expect)) : json()},
                     {"exit_code", outcome.exit_code},
                     {"diagnostics",
                      {{"terminal_slope", outcome.terminal_slope},
                       {"max_conservation_residual", outcome.max_conservation_residual},
                       {"max_locus_residual", outcome.max_locus_residual}}},
                     {"artifacts", artifacts},
                     {"wall_time_s", wall}};
    write_json(out / "manifest.json", manifest);
    return outcome;
}

// ---- commands -----------------------------------------------------------

int cmd_solve(const std::string& config_path, const std::string& out, bool force, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_code::bad_input;
    }
    try {
        const auto r = run_config(cfg, out, force);
        if (!r.error.empty()) {
            log << "error: " << r.error << '\n';
            return r.exit_code;
        }
        log << "verdict: " << r.verdict << " (t_end = " << r.t_end << ", -du = " << r.terminal_slope << ")\n";
        return r.exit_code;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::error;
    }
}

GridAxis parse_grid(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("grid", "expected PARAM=start:step:count, got " + text);
    GridAxis g;
    g.param = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("grid", "expected PARAM=start:step:count, got " + text);
    try {
        std::size_t used = 0;
        g.start = std::stod(rest.substr(0, c1), &used);
        if (used != c1) throw std::invalid_argument("start");
        g.step = std::stod(rest.substr(c1 + 1, c2 - c1 - 1), &used);
        if (used != c2 - c1 - 1) throw std::invalid_argument("step");
        const std::string cnt = rest.substr(c2 + 1);
        g.count = std::stoi(cnt, &used);
        if (used != cnt.size()) throw std::invalid_argument("count");
    } catch (const std::exception&) {
        throw ConfigError("grid", "cannot parse " + text);
    }
    if (g.count < 1) throw ConfigError("grid", "count must be positive in " + text);
    return g;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& grids, const std::string& out, int jobs,
              bool force, std::ostream& log) {
    RunConfig base;
    std::vector<GridAxis> axes;
    try {
        base = load_config(config_path);
        for (const auto& g : grids) axes.push_back(parse_grid(g));
        if (axes.empty()) throw ConfigError("grid", "at least one --grid is required");
        RunConfig probe = base;
        for (const auto& a : axes) apply_parameter(probe, a.param, a.start);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_code::bad_input;
    }

    // cells in row-major order, first axis outermost
    std::size_t total = 1;
    for (const auto& a : axes) total *= std::size_t(a.count);
    std::vector<std::vector<double>> cells(total);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t rem = c;
        std::vector<double> vals(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            vals[k] = axes[k].value(int(rem % std::size_t(axes[k].count)));
            rem /= std::size_t(axes[k].count);
        }
        cells[c] = vals;
    }

    try {
        fs::create_directories(out);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::error;
    }
    std::vector<RunOutcome> results(total);
    std::atomic<std::size_t> next{0};
    unsigned workers = jobs > 0 ? unsigned(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(total));
    auto cell_name = [](std::size_t c) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "cell_%04zu", c);
        return std::string(buf);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < total; c = next++) {
                try {
                    RunConfig cfg = base;
                    for (std::size_t k = 0; k < axes.size(); ++k) apply_parameter(cfg, axes[k].param, cells[c][k]);
                    results[c] = run_config(cfg, fs::path(out) / cell_name(c), force);
                } catch (const ConfigError& e) {
                    results[c].exit_code = exit_code::bad_input;
                    results[c].error = e.what();
                } catch (const std::exception& e) {
                    results[c].exit_code = exit_code::error;
                    results[c].error = e.what();
                }
            }
        });
    }
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "cell";
    for (const auto& a : axes) csv << ',' << a.param;
    csv << ",verdict,exit_code,t_end,terminal_slope,max_conservation_residual,expanding_bound_violations,error\n";
    bool failures = false;
    for (std::size_t c = 0; c < total; ++c) {
        const auto& r = results[c];
        csv << cell_name(c);
        for (double v : cells[c]) csv << ',' << format_number(v);
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        csv << ',' << r.verdict << ',' << r.exit_code << ',' << format_number(r.t_end) << ','
            << format_number(r.terminal_slope) << ',' << format_number(r.max_conservation_residual) << ','
            << r.expanding_bound_violations << ',' << err << '\n';
        if (!r.error.empty()) failures = true;
        log << cell_name(c) << ": " << (r.error.empty() ? r.verdict : "error: " + r.error) << '\n';
    }
    write_atomic(fs::path(out) / "sweep_summary.csv", csv.str());
    return failures ? exit_code::error : exit_code::ok;
}

int cmd_probe_c0(const std::string& config_path, double c, double tau, const std::string& out,
                 const ProbeCliOptions& popts, bool force, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_code::bad_input;
    }
    json identity = {{"config", cfg.raw}, {"c", c}, {"tau", tau}, {"C_min", popts.C_min}, {"C_max", popts.C_max},
                     {"per_decade", popts.per_decade}};
    const std::string id = run_id(identity);
    try {
        prepare_dir(out, id, force);
        monitors::GrowthProbeOptions o;
        o.C_min = popts.C_min;
        o.C_max = popts.C_max;
        o.per_decade = popts.per_decade;
        o.jobs = popts.jobs;
        o.solve = cfg.solve;
        const auto rep = monitors::growth_probe(cfg.spec, c, tau, o);
        std::ostringstream csv;
        csv << "C,slope,admissible\n";
        for (const auto& s : rep.samples) {
            csv << format_number(s.C) << ',' << format_number(s.slope) << ',' << (s.admissible ? 1 : 0) << '\n';
        }
        write_atomic(fs::path(out) / "probe.csv", csv.str());
        json r = monitors::to_json(rep);
        r["spec"] = spec_to_json(cfg.spec);
        write_json(fs::path(out) / "probe.json", r);
        json manifest = {{"run_id", id},
                         {"tool", "solitonlab"},
                         {"version", kVersion},
                         {"command", "probe-c0"},
                         {"config", identity},
                         {"found", rep.found},
                         {"empirical_C0", rep.found ? json(rep.empirical_C0) : json()},
                         {"artifacts", {"probe.csv", "probe.json"}}};
        write_json(fs::path(out) / "manifest.json", manifest);
        if (!rep.found) {
            log << "probe: " << rep.message << '\n';
            return exit_code::no_admissible_c;
        }
        log << "probe: empirical C0 = " << rep.empirical_C0 << " (other end " << rep.bracket_other << ")\n";
        return exit_code::ok;
    } catch (const RefusedError& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::error;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::bad_input;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::error;
    }
}

int cmd_curvature(const std::string& decomposition_path, const std::string& x_list, std::ostream& out,
                  std::ostream& log) {
    geometry::IsotropyDecomposition dec;
    geometry::ScalingVector x;
    try {
        dec = geometry::load_decomposition(decomposition_path);
        std::stringstream ss(x_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            x.x.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("bad scaling '" + item + "'");
        }
        if (x.x.empty()) {
            x.x.assign(dec.size(), 1.0);
        }
        if (x.x.size() != dec.size()) {
            throw std::invalid_argument("expected " + std::to_string(dec.size()) + " scalings, got " +
                                        std::to_string(x.x.size()));
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::bad_input;
    }
    const auto report = geometry::validate(dec);
    json j;
    try {
        j["scalar_curvature"] = geometry::scalar_curvature(dec, x);
        j["ricci"] = geometry::ricci_eigenvalues(dec, x);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::bad_input;
    }
    j["x"] = x.x;
    j["validation"] = geometry::to_json(report);
    out << j.dump(2) << '\n';
    if (!report.ok()) {
        log << "validation errors: " << report.issues.size() << '\n';
        return exit_code::validation;
    }
    return exit_code::ok;
}

}  // namespace solitonlab
