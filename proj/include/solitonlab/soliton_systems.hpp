#pragma once

#include "solitonlab/homogeneous_geometry.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace solitonlab {

struct TwoSummandsAnsatz {
    int d1 = 0;
    int d2 = 0;
    double A1 = 0.0;
    double A2 = 0.0;
    double A3 = 0.0;
    bool geometric = false;

    void validate() const;
    // A1 = d1 (d1 - 1), the relation required for a smooth collapse of the fibre
    bool geometric_relation_holds(double tol = 1e-9) const;
    double base_ricci() const { return A2 / d2; }
    double a_norm_squared() const { return A3 / d2; }
};

struct DancerWangFactor {
    int d = 0;
    int p = 0;
    int q = 0;
    // allows q = 0 and odd d; used to embed the warped Einstein factor
    bool degenerate = false;
};

struct DancerWangAnsatz {
    std::vector<DancerWangFactor> factors;

    void validate() const;
    std::size_t m() const { return factors.size(); }
};

struct LuPagePopeAnsatz {
    int d1 = 0;
    int p1 = 0;
    int q1 = 0;
    int d2 = 0;

    void validate() const;
    DancerWangAnsatz as_dancer_wang() const;
};

using Ansatz = std::variant<TwoSummandsAnsatz, DancerWangAnsatz, LuPagePopeAnsatz>;

enum class SystemKind { TwoSummands, DancerWang, LuPagePope };

SystemKind system_kind(const Ansatz& a);
std::string system_name(SystemKind k);
SystemKind parse_system_name(const std::string& s);

void validate_ansatz(const Ansatz& a);
// multiplicity d_i of every metric function, collapsing component first
std::vector<int> component_dims(const Ansatz& a);
std::vector<std::string> component_names(const Ansatz& a);
// principal orbit dimension n
int orbit_dim(const Ansatz& a);
// dimension d_S of the collapsing sphere
int collapsing_dim(const Ansatz& a);

struct ProblemSpec {
    Ansatz ansatz;
    double epsilon = 0.0;
    double C = 0.0;
    // two summands: {f_bar}; Dancer-Wang: {g_bar_1..g_bar_m}; LPP: {g_bar_1, g_bar_2}
    std::vector<double> initial;

    // checks ansatz invariants, epsilon >= 0, C <= 0 and the initial sizes
    void validate() const;
    SystemKind kind() const { return system_kind(ansatz); }
};

struct SolitonState {
    double t = 0.0;
    std::vector<double> f;
    std::vector<double> df;
    double u = 0.0;
    double du = 0.0;

    std::size_t components() const { return f.size(); }
    // flat layout [f..., df..., u, du]
    std::vector<double> to_vector() const;
    static SolitonState from_vector(double t, std::span<const double> y);
};

struct StateDerivative {
    std::vector<double> df;    // d/dt f_i
    std::vector<double> ddf;   // d/dt df_i
    double du = 0.0;
    double ddu = 0.0;
    std::vector<double> dlog;  // d/dt (df_i / f_i)
};

// Ricci eigenvalues r_i of the principal orbit as functions of the metric functions.
template <class T>
std::vector<T> ricci_terms(const Ansatz& a, const std::vector<T>& f) {
    struct Visitor {
        const std::vector<T>& f;
        std::vector<T> operator()(const TwoSummandsAnsatz& ts) const {
            const T f1sq = f[0] * f[0];
            const T f2sq = f[1] * f[1];
            const T mixed = f1sq / (f2sq * f2sq);
            return {(ts.A1 / ts.d1) / f1sq + (ts.A3 / ts.d1) * mixed,
                    (ts.A2 / ts.d2) / f2sq - (2.0 * ts.A3 / ts.d2) * mixed};
        }
        std::vector<T> operator()(const DancerWangAnsatz& dw) const {
            const T fsq = f[0] * f[0];
            std::vector<T> r(f.size());
            T r0 = 0.0 * f[0];
            for (std::size_t i = 0; i < dw.m(); ++i) {
                const auto& fac = dw.factors[i];
                const T g2 = f[i + 1] * f[i + 1];
                const T ratio = fsq / (g2 * g2);
                const double qsq = double(fac.q) * fac.q;
                r0 = r0 + (fac.d * qsq / 4.0) * ratio;
                r[i + 1] = double(fac.p) / g2 - (qsq / 2.0) * ratio;
            }
            r[0] = r0;
            return r;
        }
        std::vector<T> operator()(const LuPagePopeAnsatz& lpp) const {
            const T fsq = f[0] * f[0];
            const T g1sq = f[1] * f[1];
            const T ratio = fsq / (g1sq * g1sq);
            const double qsq = double(lpp.q1) * lpp.q1;
            return {(lpp.d1 * qsq / 4.0) * ratio, double(lpp.p1) / g1sq - (qsq / 2.0) * ratio,
                    double(lpp.d2 - 1) / (f[2] * f[2])};
        }
    };
    return std::visit(Visitor{f}, a);
}

template <class T>
struct Rates {
    std::vector<T> dlog;  // d/dt (df_i / f_i)
    T udd;
};

// Common shape of all three systems:
//   d/dt L_i = -(-du + tr L) L_i + eps/2 + r_i,   udd = sum_i d_i (d/dt L_i + L_i^2) - eps/2
template <class T>
Rates<T> rates_from_ricci(const std::vector<int>& dims, double eps, const std::vector<T>& f, const std::vector<T>& df,
                          const T& du, const std::vector<T>& r) {
    const std::size_t k = f.size();
    std::vector<T> L(k);
    T trL = 0.0 * du;
    for (std::size_t i = 0; i < k; ++i) {
        L[i] = df[i] / f[i];
        trL = trL + double(dims[i]) * L[i];
    }
    const T friction = trL - du;
    Rates<T> out{std::vector<T>(k), 0.0 * du};
    T udd = 0.0 * du - eps / 2.0;
    for (std::size_t i = 0; i < k; ++i) {
        out.dlog[i] = r[i] + eps / 2.0 - friction * L[i];
        udd = udd + double(dims[i]) * (out.dlog[i] + L[i] * L[i]);
    }
    out.udd = udd;
    return out;
}

template <class T>
Rates<T> soliton_rates(const Ansatz& a, double eps, const std::vector<T>& f, const std::vector<T>& df, const T& du) {
    return rates_from_ricci(component_dims(a), eps, f, df, du, ricci_terms(a, f));
}

StateDerivative rhs_two_summands(const SolitonState& s, const TwoSummandsAnsatz& a, double eps);
StateDerivative rhs_dancer_wang(const SolitonState& s, const DancerWangAnsatz& a, double eps);
StateDerivative rhs_lpp(const SolitonState& s, const LuPagePopeAnsatz& a, double eps);
StateDerivative rhs(const SolitonState& s, const Ansatz& a, double eps);
// Same equations with r_i taken from the curvature formulas of a decomposition (x_i = f_i^2).
StateDerivative rhs_generic(const SolitonState& s, const geometry::IsotropyDecomposition& dec, double eps);

// flat form for the integrator: y = [f..., df..., u, du]
void rhs_flat(const Ansatz& a, double eps, std::span<const double> y, std::span<double> dy);

// Decomposition data whose curvature formulas reproduce the ansatz' Ricci terms.
geometry::IsotropyDecomposition induced_decomposition(const Ansatz& a);
// Inverse of the above for two summands (fibre first); needs [001] = [111] = 0.
TwoSummandsAnsatz two_summands_from_decomposition(const geometry::IsotropyDecomposition& dec);

std::vector<double> shape_eigenvalues(const SolitonState& s);
double trace_L(const SolitonState& s, const std::vector<int>& dims);
double trace_L_squared(const SolitonState& s, const std::vector<int>& dims);
double trace_ricci(const Ansatz& a, const std::vector<double>& f);

// udd + (-du + trL) du - C - eps u
double conservation_residual(const SolitonState& s, double udd, const ProblemSpec& spec);
// tr r + tr L^2 - (-du + trL)^2 + (n-1) eps/2 - C - eps u
double conservation_residual_trace_form(const SolitonState& s, const ProblemSpec& spec);
// 2 udd from the first integral
double u_second_derivative_identity(const SolitonState& s, const ProblemSpec& spec);

// 2 g_i dg_i + q_i f per factor; state components are (f, g_1, ..., g_m)
std::vector<double> kahler_residual(const SolitonState& s, const DancerWangAnsatz& a);

}  // namespace solitonlab
