#pragma once

#include "solitonlab/monitors.hpp"
#include "solitonlab/solve.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace solitonlab {

// Configuration problem; field() names the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Chart { Physical, Rescaled, Both };
std::string chart_name(Chart c);

inline const std::set<std::string>& known_monitors() {
    static const std::set<std::string> names{"conservation", "potential", "asymptote", "locus", "invariant",
                                             "scalar_bound"};
    return names;
}

struct RunConfig {
    std::string name;
    ProblemSpec spec;
    SolveOptions solve;
    Chart chart = Chart::Physical;
    std::set<std::string> monitors;  // empty: everything applicable
    std::optional<monitors::VerdictKind> expect;
    bool svg = false;
    nlohmann::json raw;

    bool monitor_enabled(const std::string& m) const { return monitors.empty() || monitors.count(m) > 0; }
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json spec_to_json(const ProblemSpec& spec);

// grid parameters: C, epsilon, initialK (0-based index into the initial sizes)
void apply_parameter(RunConfig& cfg, const std::string& param, double value);

}  // namespace solitonlab
