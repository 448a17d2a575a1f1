#include "solitonlab/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Cohomogeneity-one Ricci soliton ODE toolkit"};
    app.set_version_flag("--version", solitonlab::kVersion);
    app.require_subcommand(1);

    std::string config, out, decomposition, x_list;
    std::vector<std::string> grids;
    int jobs = 0;
    bool force = false;
    double c = 0.0, tau = 0.0;
    solitonlab::ProbeCliOptions probe;

    auto* solve = app.add_subcommand("solve", "integrate one configuration and classify it");
    solve->add_option("--config", config, "configuration JSON")->required();
    solve->add_option("--out", out, "output directory")->required();
    solve->add_flag("--force", force, "overwrite a directory holding a different run");

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
    sweep->add_option("--config", config, "base configuration JSON")->required();
    sweep->add_option("--grid", grids, "PARAM=start:step:count (C, epsilon, initialK)")->required();
    sweep->add_option("--out", out, "output directory")->required();
    sweep->add_option("--jobs", jobs, "worker threads (0: all cores)");
    sweep->add_flag("--force", force, "overwrite cells holding a different run");

    auto* pc = app.add_subcommand("probe-c0", "bracket the C needed for a slope target at tau");
    pc->add_option("--config", config, "configuration JSON (C is varied)")->required();
    pc->add_option("--c", c, "slope target")->required();
    pc->add_option("--tau", tau, "probe time")->required();
    pc->add_option("--out", out, "output directory")->required();
    pc->add_option("--c-min", probe.C_min, "most negative C sampled");
    pc->add_option("--c-max", probe.C_max, "least negative C sampled");
    pc->add_option("--per-decade", probe.per_decade, "grid points per decade");
    pc->add_option("--jobs", probe.jobs, "worker threads (0: all cores)");
    pc->add_flag("--force", force, "overwrite a directory holding a different run");

    auto* curv = app.add_subcommand("curvature", "curvature of a homogeneous metric");
    curv->add_option("--decomposition", decomposition, "decomposition JSON")->required();
    curv->add_option("--x", x_list, "comma separated scalings x_i (default all 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : solitonlab::exit_code::bad_input;
    }

    if (*solve) return solitonlab::cmd_solve(config, out, force, std::cerr);
    if (*sweep) return solitonlab::cmd_sweep(config, grids, out, jobs, force, std::cerr);
    if (*pc) return solitonlab::cmd_probe_c0(config, c, tau, out, probe, force, std::cerr);
    if (*curv) return solitonlab::cmd_curvature(decomposition, x_list, std::cout, std::cerr);
    return solitonlab::exit_code::error;
}
