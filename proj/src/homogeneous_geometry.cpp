#include "solitonlab/homogeneous_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace solitonlab::geometry {

IsotropyDecomposition::IsotropyDecomposition(std::vector<Summand> summands)
    : summands_(std::move(summands)), triples_(summands_.size() * summands_.size() * summands_.size(), 0.0) {}

int IsotropyDecomposition::total_dim() const {
    int n = 0;
    for (const auto& s : summands_) n += s.dim;
    return n;
}

std::size_t IsotropyDecomposition::index(std::size_t i, std::size_t j, std::size_t k) const {
    const std::size_t s = summands_.size();
    if (i >= s || j >= s || k >= s) throw std::out_of_range("triple index out of range");
    return (i * s + j) * s + k;
}

double IsotropyDecomposition::triple(std::size_t i, std::size_t j, std::size_t k) const {
    return triples_[index(i, j, k)];
}

void IsotropyDecomposition::set_triple(std::size_t i, std::size_t j, std::size_t k, double value) {
    for (auto [a, b, c] : {std::array{i, j, k}, std::array{i, k, j}, std::array{j, i, k},
                           std::array{j, k, i}, std::array{k, i, j}, std::array{k, j, i}}) {
        triples_[index(a, b, c)] = value;
    }
}

void IsotropyDecomposition::set_triple_entry(std::size_t i, std::size_t j, std::size_t k, double value) {
    triples_[index(i, j, k)] = value;
}

static void check_dims(const IsotropyDecomposition& dec, const ScalingVector& x) {
    if (x.x.size() != dec.size()) {
        throw std::invalid_argument("scaling vector has " + std::to_string(x.x.size()) + " entries, decomposition has " +
                                    std::to_string(dec.size()) + " summands");
    }
    for (double xi : x.x) {
        if (!(xi > 0.0)) throw std::invalid_argument("scalings must be strictly positive");
    }
}

double scalar_curvature(const IsotropyDecomposition& dec, const ScalingVector& x) {
    check_dims(dec, x);
    const std::size_t s = dec.size();
    double bracket = 0.0;
    double killing = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        killing += dec.dim(i) * dec.summand(i).b / x.x[i];
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = 0; k < s; ++k) bracket += dec.triple(i, j, k) * x.x[k] / (x.x[i] * x.x[j]);
    }
    return -0.25 * bracket + 0.5 * killing;
}

std::vector<double> ricci_eigenvalues(const IsotropyDecomposition& dec, const ScalingVector& x) {
    check_dims(dec, x);
    const std::size_t s = dec.size();
    std::vector<double> r(s);
    for (std::size_t i = 0; i < s; ++i) {
        double first = 0.0;
        double second = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            for (std::size_t k = 0; k < s; ++k) {
                const double t = dec.triple(i, j, k);
                first += t * x.x[k] / (x.x[i] * x.x[j]);
                second += t * x.x[i] / (x.x[j] * x.x[k]);
            }
        }
        const double di = dec.dim(i);
        r[i] = 0.5 * dec.summand(i).b / x.x[i] - first / (2.0 * di) + second / (4.0 * di);
    }
    return r;
}

bool ValidationReport::ok(double wz_tol) const {
    if (!issues.empty()) return false;
    for (const auto& w : wang_ziller_residuals)
        if (w && std::abs(*w) > wz_tol) return false;
    return true;
}

ValidationReport validate(const IsotropyDecomposition& dec) {
    ValidationReport rep;
    const std::size_t s = dec.size();
    for (std::size_t i = 0; i < s; ++i) {
        if (dec.dim(i) <= 0) rep.issues.push_back({"dimension", {int(i)}, double(dec.dim(i))});
        if (dec.summand(i).b < 0.0) rep.issues.push_back({"negative_b", {int(i)}, dec.summand(i).b});
    }
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            for (std::size_t k = 0; k < s; ++k) {
                const double t = dec.triple(i, j, k);
                // computed structure constants carry rounding noise
                const double noise = 1e-12 * std::max(1.0, std::abs(t));
                if (t < -noise) rep.issues.push_back({"negative_triple", {int(i), int(j), int(k)}, t});
                // compare against the other orderings once per unordered triple
                if (!(i <= j && j <= k)) continue;
                std::set<std::array<std::size_t, 3>> seen{{i, j, k}};
                for (auto p : {std::array{i, k, j}, std::array{j, i, k}, std::array{j, k, i}, std::array{k, i, j},
                               std::array{k, j, i}}) {
                    if (!seen.insert(p).second) continue;
                    const double o = dec.triple(p[0], p[1], p[2]);
                    if (std::abs(o - t) > noise) {
                        rep.issues.push_back({"symmetry", {int(p[0]), int(p[1]), int(p[2])}, o - t});
                    }
                }
            }
        }
    }
    for (std::size_t i = 0; i < s; ++i) {
        const auto& c = dec.summand(i).c;
        if (!c) {
            rep.wang_ziller_residuals.push_back(std::nullopt);
            continue;
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = 0; k < s; ++k) sum += dec.triple(i, j, k);
        rep.wang_ziller_residuals.push_back(sum - dec.dim(i) * (dec.summand(i).b - 2.0 * *c));
    }
    return rep;
}

IsotropyDecomposition decomposition_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("summands") || !j["summands"].is_array())
        throw std::invalid_argument("decomposition: missing 'summands' array");
    std::vector<Summand> summands;
    for (const auto& s : j["summands"]) {
        Summand sm;
        if (!s.contains("dim") || !s["dim"].is_number_integer()) throw std::invalid_argument("decomposition: summand 'dim' must be an integer");
        if (!s.contains("b") || !s["b"].is_number()) throw std::invalid_argument("decomposition: summand 'b' must be a number");
        sm.dim = s["dim"].get<int>();
        sm.b = s["b"].get<double>();
        if (s.contains("c") && !s["c"].is_null()) sm.c = s["c"].get<double>();
        summands.push_back(sm);
    }
    IsotropyDecomposition dec(std::move(summands));
    if (j.contains("triples")) {
        // explicit entries win; missing orderings are filled by symmetry
        std::set<std::array<std::size_t, 3>> given;
        std::vector<std::pair<std::array<std::size_t, 3>, double>> entries;
        const int s = static_cast<int>(dec.size());
        for (const auto& t : j["triples"]) {
            const int i = t.at("i").get<int>();
            const int jj = t.at("j").get<int>();
            const int k = t.at("k").get<int>();
            if (i < 0 || jj < 0 || k < 0 || i >= s || jj >= s || k >= s)
                throw std::invalid_argument("decomposition: triple index out of range");
            std::array<std::size_t, 3> key{std::size_t(i), std::size_t(jj), std::size_t(k)};
            given.insert(key);
            entries.emplace_back(key, t.at("value").get<double>());
        }
        for (const auto& [key, v] : entries) dec.set_triple_entry(key[0], key[1], key[2], v);
        for (const auto& [key, v] : entries) {
            auto perm = key;
            std::sort(perm.begin(), perm.end());
            do {
                if (!given.count(perm)) dec.set_triple_entry(perm[0], perm[1], perm[2], v);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
    if (j.contains("metadata")) {
        const auto& m = j["metadata"];
        if (m.is_object() && m.contains("normalization")) dec.normalization = m["normalization"].get<std::string>();
    }
    return dec;
}

nlohmann::json to_json(const IsotropyDecomposition& dec) {
    nlohmann::json j;
    j["summands"] = nlohmann::json::array();
    for (const auto& s : dec.summands()) {
        nlohmann::json e{{"dim", s.dim}, {"b", s.b}};
        e["c"] = s.c ? nlohmann::json(*s.c) : nlohmann::json(nullptr);
        j["summands"].push_back(e);
    }
    j["triples"] = nlohmann::json::array();
    const std::size_t s = dec.size();
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t jj = i; jj < s; ++jj)
            for (std::size_t k = jj; k < s; ++k)
                if (dec.triple(i, jj, k) != 0.0)
                    j["triples"].push_back({{"i", i}, {"j", jj}, {"k", k}, {"value", dec.triple(i, jj, k)}});
    j["metadata"] = {{"normalization", dec.normalization}};
    return j;
}

nlohmann::json to_json(const ValidationReport& report) {
    nlohmann::json j;
    j["ok"] = report.ok();
    j["issues"] = nlohmann::json::array();
    for (const auto& is : report.issues) j["issues"].push_back({{"kind", is.kind}, {"indices", is.indices}, {"value", is.value}});
    j["wang_ziller_residuals"] = nlohmann::json::array();
    for (const auto& w : report.wang_ziller_residuals) j["wang_ziller_residuals"].push_back(w ? nlohmann::json(*w) : nlohmann::json(nullptr));
    return j;
}

IsotropyDecomposition load_decomposition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open decomposition file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("decomposition file is not valid JSON: ") + e.what());
    }
    try {
        return decomposition_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("decomposition file: ") + e.what());
    }
}

}  // namespace solitonlab::geometry
