#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace solitonlab::geometry {

struct Summand {
    int dim = 0;
    double b = 0.0;
    std::optional<double> c;
};

// Isotropy data of a homogeneous principal orbit G/K with p = p_1 + ... + p_s.
class IsotropyDecomposition {
public:
    IsotropyDecomposition() = default;
    explicit IsotropyDecomposition(std::vector<Summand> summands);

    std::size_t size() const { return summands_.size(); }
    const std::vector<Summand>& summands() const { return summands_; }
    const Summand& summand(std::size_t i) const { return summands_.at(i); }
    int dim(std::size_t i) const { return summands_.at(i).dim; }
    int total_dim() const;

    double triple(std::size_t i, std::size_t j, std::size_t k) const;
    // writes all permutations of (i, j, k)
    void set_triple(std::size_t i, std::size_t j, std::size_t k, double value);
    // writes the single ordered entry; only useful for building invalid data
    void set_triple_entry(std::size_t i, std::size_t j, std::size_t k, double value);

    std::string normalization;  // free-text convention for b

private:
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const;
    std::vector<Summand> summands_;
    std::vector<double> triples_;
};

struct ScalingVector {
    std::vector<double> x;
};

double scalar_curvature(const IsotropyDecomposition& dec, const ScalingVector& x);
std::vector<double> ricci_eigenvalues(const IsotropyDecomposition& dec, const ScalingVector& x);

// Same formulas with the metric functions f_i (x_i = f_i^2) and any scalar type.
template <class T>
std::vector<T> ricci_eigenvalues_of_f(const IsotropyDecomposition& dec, const std::vector<T>& f) {
    const std::size_t s = dec.size();
    std::vector<T> x(s);
    for (std::size_t i = 0; i < s; ++i) x[i] = f[i] * f[i];
    std::vector<T> r;
    r.reserve(s);
    for (std::size_t i = 0; i < s; ++i) {
        T ri = (0.5 * dec.summand(i).b) / x[i];
        const double di = dec.dim(i);
        for (std::size_t j = 0; j < s; ++j) {
            for (std::size_t k = 0; k < s; ++k) {
                const double t = dec.triple(i, j, k);
                if (t == 0.0) continue;
                ri = ri - (t / (2.0 * di)) * x[k] / (x[i] * x[j]) + (t / (4.0 * di)) * x[i] / (x[j] * x[k]);
            }
        }
        r.push_back(ri);
    }
    return r;
}

struct ValidationIssue {
    std::string kind;  // "symmetry", "negative_triple", "negative_b", "dimension"
    std::vector<int> indices;
    double value = 0.0;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    // sum_{j,k}[ijk] - d_i (b_i - 2 c_i), present only when c_i is given
    std::vector<std::optional<double>> wang_ziller_residuals;
    bool ok(double wz_tol = 1e-10) const;
};

ValidationReport validate(const IsotropyDecomposition& dec);

IsotropyDecomposition decomposition_from_json(const nlohmann::json& j);
nlohmann::json to_json(const IsotropyDecomposition& dec);
nlohmann::json to_json(const ValidationReport& report);
IsotropyDecomposition load_decomposition(const std::string& path);

}  // namespace solitonlab::geometry
