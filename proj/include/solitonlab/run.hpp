#pragma once

#include "solitonlab/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace solitonlab {

inline constexpr const char* kVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int not_complete = 2;
inline constexpr int no_admissible_c = 3;
inline constexpr int bad_input = 64;
inline constexpr int validation = 65;
inline constexpr int integrator_failure = 70;
}  // namespace exit_code

// 64-bit FNV-1a of the canonical config dump and the tool version, as hex
std::string run_id(const nlohmann::json& config);

struct RunOutcome {
    int exit_code = exit_code::error;
    std::string verdict;
    std::string error;
    double t_end = 0.0;
    double terminal_slope = 0.0;
    double max_conservation_residual = 0.0;
    double max_locus_residual = 0.0;
    std::size_t expanding_bound_violations = 0;
};

// Solves, runs the monitors and writes trajectory.csv, report.json and manifest.json into out.
RunOutcome run_config(const RunConfig& cfg, const std::filesystem::path& out, bool force);

struct GridAxis {
    std::string param;
    double start = 0.0;
    double step = 0.0;
    int count = 0;
    double value(int k) const { return start + k * step; }
};

// PARAM=start:step:count
GridAxis parse_grid(const std::string& text);

struct ProbeCliOptions {
    double C_min = -1e4;
    double C_max = -1e-8;
    int per_decade = 4;
    int jobs = 0;
};

int cmd_solve(const std::string& config_path, const std::string& out, bool force, std::ostream& log);
int cmd_sweep(const std::string& config_path, const std::vector<std::string>& grids, const std::string& out, int jobs,
              bool force, std::ostream& log);
int cmd_probe_c0(const std::string& config_path, double c, double tau, const std::string& out,
                 const ProbeCliOptions& opts, bool force, std::ostream& log);
int cmd_curvature(const std::string& decomposition_path, const std::string& x_list, std::ostream& out,
                  std::ostream& log);

// fixed %.17g formatting used for every CSV number
std::string format_number(double v);
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace solitonlab
