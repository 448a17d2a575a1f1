#include "solitonlab/config.hpp"

#include <cmath>
#include <fstream>

namespace solitonlab {

namespace {

using nlohmann::json;

const json& require_key(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(path + key, "missing");
    return j.at(key);
}

double get_number(const json& j, const std::string& key, const std::string& path) {
    const auto& v = require_key(j, key, path);
    if (!v.is_number()) throw ConfigError(path + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path + key, "must be finite");
    return x;
}

double get_number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
    return j.contains(key) ? get_number(j, key, path) : fallback;
}

int get_int(const json& j, const std::string& key, const std::string& path) {
    const auto& v = require_key(j, key, path);
    if (!v.is_number_integer()) throw ConfigError(path + key, "expected an integer");
    return v.get<int>();
}

Ansatz parse_ansatz(SystemKind kind, const json& a) {
    const std::string p = "ansatz.";
    if (!a.is_object()) throw ConfigError("ansatz", "expected an object");
    switch (kind) {
        case SystemKind::TwoSummands: {
            TwoSummandsAnsatz ts;
            ts.d1 = get_int(a, "d1", p);
            ts.d2 = get_int(a, "d2", p);
            ts.A1 = get_number(a, "A1", p);
            ts.A2 = get_number(a, "A2", p);
            ts.A3 = get_number(a, "A3", p);
            ts.geometric = a.value("geometric", true);
            return ts;
        }
        case SystemKind::DancerWang: {
            DancerWangAnsatz dw;
            const auto& fs = require_key(a, "factors", p);
            if (!fs.is_array() || fs.empty()) throw ConfigError("ansatz.factors", "expected a non-empty array");
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const std::string fp = "ansatz.factors[" + std::to_string(i) + "].";
                DancerWangFactor f;
                f.d = get_int(fs[i], "d", fp);
                f.p = get_int(fs[i], "p", fp);
                f.q = get_int(fs[i], "q", fp);
                f.degenerate = fs[i].value("degenerate", false);
                dw.factors.push_back(f);
            }
            return dw;
        }
        case SystemKind::LuPagePope: {
            LuPagePopeAnsatz l;
            l.d1 = get_int(a, "d1", p);
            l.p1 = get_int(a, "p1", p);
            l.q1 = get_int(a, "q1", p);
            l.d2 = get_int(a, "d2", p);
            return l;
        }
    }
    throw ConfigError("system", "unsupported");
}

// maps validation messages from the core types back to config fields
template <class F>
void checked(const std::string& field, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
    }
}

}  // namespace

std::string chart_name(Chart c) {
    switch (c) {
        case Chart::Physical: return "physical";
        case Chart::Rescaled: return "rescaled";
        case Chart::Both: return "both";
    }
    return "physical";
}

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
    RunConfig cfg;
    cfg.raw = j;
    cfg.name = j.value("name", std::string{});

    const auto& sys = require_key(j, "system", "");
    if (!sys.is_string()) throw ConfigError("system", "expected a string");
    SystemKind kind;
    checked("system", [&] { kind = parse_system_name(sys.get<std::string>()); });

    cfg.spec.ansatz = parse_ansatz(kind, require_key(j, "ansatz", ""));
    checked("ansatz", [&] { validate_ansatz(cfg.spec.ansatz); });

    cfg.spec.epsilon = get_number_or(j, "epsilon", "", 0.0);
    if (cfg.spec.epsilon < 0.0) throw ConfigError("epsilon", "must be >= 0");
    cfg.spec.C = get_number_or(j, "C", "", 0.0);
    if (cfg.spec.C > 0.0) throw ConfigError("C", "must be <= 0");

    const auto& init = require_key(j, "initial", "");
    if (init.is_number()) {
        cfg.spec.initial = {init.get<double>()};
    } else if (init.is_array()) {
        for (std::size_t i = 0; i < init.size(); ++i) {
            if (!init[i].is_number()) throw ConfigError("initial[" + std::to_string(i) + "]", "expected a number");
            cfg.spec.initial.push_back(init[i].get<double>());
        }
    } else {
        throw ConfigError("initial", "expected a number or an array of numbers");
    }
    for (std::size_t i = 0; i < cfg.spec.initial.size(); ++i) {
        const double g = cfg.spec.initial[i];
        if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("initial[" + std::to_string(i) + "]", "must be positive");
    }
    checked("initial", [&] { cfg.spec.validate(); });

    cfg.solve.launch.delta = get_number_or(j, "launch_delta", "", 0.0);
    if (cfg.solve.launch.delta < 0.0) throw ConfigError("launch_delta", "must be positive");
    if (j.contains("launch_order")) cfg.solve.launch.order = get_int(j, "launch_order", "");

    if (j.contains("integrator")) {
        const auto& in = j.at("integrator");
        if (!in.is_object()) throw ConfigError("integrator", "expected an object");
        auto& ic = cfg.solve.integrator;
        ic.rel_tol = get_number_or(in, "rel_tol", "integrator.", ic.rel_tol);
        ic.abs_tol = get_number_or(in, "abs_tol", "integrator.", ic.abs_tol);
        ic.t_max = get_number_or(in, "t_max", "integrator.", 100.0);
        ic.max_step = get_number_or(in, "max_step", "integrator.", ic.max_step);
        if (in.contains("max_steps")) ic.max_steps = get_int(in, "max_steps", "integrator.");
        if (!(ic.rel_tol > 0.0)) throw ConfigError("integrator.rel_tol", "must be positive");
        if (!(ic.abs_tol > 0.0)) throw ConfigError("integrator.abs_tol", "must be positive");
        if (!(ic.t_max > 0.0)) throw ConfigError("integrator.t_max", "must be positive");
        if (ic.max_steps < 1) throw ConfigError("integrator.max_steps", "must be positive");
        cfg.solve.invariant_event = in.value("stop_on_invariant_exit", true);
    } else {
        cfg.solve.integrator.t_max = 100.0;
    }

    if (j.contains("checkpoints")) {
        const auto& cp = j.at("checkpoints");
        if (!cp.is_array()) throw ConfigError("checkpoints", "expected an array");
        for (const auto& t : cp) {
            if (!t.is_number()) throw ConfigError("checkpoints", "expected numbers");
            cfg.solve.checkpoints.push_back(t.get<double>());
        }
    }

    if (j.contains("chart")) {
        const std::string c = j.at("chart").is_string() ? j.at("chart").get<std::string>() : "";
        if (c == "physical") cfg.chart = Chart::Physical;
        else if (c == "rescaled") cfg.chart = Chart::Rescaled;
        else if (c == "both") cfg.chart = Chart::Both;
        else throw ConfigError("chart", "expected physical, rescaled or both");
        if (cfg.chart != Chart::Physical && kind == SystemKind::TwoSummands) {
            throw ConfigError("chart", "the rescaled chart is available for dancer_wang and lpp only");
        }
    }

    if (j.contains("monitors")) {
        const auto& m = j.at("monitors");
        if (!m.is_array()) throw ConfigError("monitors", "expected an array of names");
        for (const auto& x : m) {
            if (!x.is_string() || !known_monitors().count(x.get<std::string>())) {
                throw ConfigError("monitors", "unknown monitor " + x.dump());
            }
            cfg.monitors.insert(x.get<std::string>());
        }
    }

    if (j.contains("expect") && !j.at("expect").is_null()) {
        if (!j.at("expect").is_string()) throw ConfigError("expect", "expected a verdict name");
        checked("expect", [&] { cfg.expect = monitors::parse_verdict(j.at("expect").get<std::string>()); });
    }
    cfg.svg = j.value("svg", false);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

json spec_to_json(const ProblemSpec& spec) {
    json a;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TwoSummandsAnsatz>) {
                a = {{"d1", x.d1}, {"d2", x.d2}, {"A1", x.A1}, {"A2", x.A2}, {"A3", x.A3}, {"geometric", x.geometric}};
            } else if constexpr (std::is_same_v<T, DancerWangAnsatz>) {
                a["factors"] = json::array();
                for (const auto& f : x.factors) {
                    json fj = {{"d", f.d}, {"p", f.p}, {"q", f.q}};
                    if (f.degenerate) fj["degenerate"] = true;
                    a["factors"].push_back(fj);
                }
            } else {
                a = {{"d1", x.d1}, {"p1", x.p1}, {"q1", x.q1}, {"d2", x.d2}};
            }
        },
        spec.ansatz);
    return {{"system", system_name(spec.kind())},
            {"ansatz", a},
            {"epsilon", spec.epsilon},
            {"C", spec.C},
            {"initial", spec.initial}};
}

void apply_parameter(RunConfig& cfg, const std::string& param, double value) {
    if (param == "C") {
        cfg.spec.C = value;
        cfg.raw["C"] = value;
    } else if (param == "epsilon") {
        cfg.spec.epsilon = value;
        cfg.raw["epsilon"] = value;
    } else if (param.rfind("initial", 0) == 0 && param.size() > 7) {
        std::size_t idx = 0;
        try {
            std::size_t used = 0;
            idx = std::stoul(param.substr(7), &used);
            if (used != param.size() - 7) throw std::invalid_argument(param);
        } catch (const std::exception&) {
            throw ConfigError("grid", "bad parameter " + param);
        }
        if (idx >= cfg.spec.initial.size()) throw ConfigError("grid", "index out of range in " + param);
        cfg.spec.initial[idx] = value;
        cfg.raw["initial"] = cfg.spec.initial;
    } else {
        throw ConfigError("grid", "unknown parameter " + param + " (expected C, epsilon or initialK)");
    }
    checked("grid", [&] { cfg.spec.validate(); });
}

}  // namespace solitonlab
