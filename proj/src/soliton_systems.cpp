#include "solitonlab/soliton_systems.hpp"

#include <cmath>

namespace solitonlab {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_positive(const SolitonState& s) {
    for (std::size_t i = 0; i < s.f.size(); ++i) {
        if (!(s.f[i] > 0.0)) throw std::domain_error("metric function " + std::to_string(i) + " is not positive");
    }
}

StateDerivative assemble(const SolitonState& s, const Rates<double>& r) {
    StateDerivative d;
    const std::size_t k = s.f.size();
    d.df = s.df;
    d.ddf.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double L = s.df[i] / s.f[i];
        d.ddf[i] = s.f[i] * (r.dlog[i] + L * L);
    }
    d.du = s.du;
    d.ddu = r.udd;
    d.dlog = r.dlog;
    return d;
}

}  // namespace

void TwoSummandsAnsatz::validate() const {
    require(d1 >= 1, "two_summands: d1 must be a positive integer");
    require(d2 >= 1, "two_summands: d2 must be a positive integer");
    require(A1 >= 0.0, "two_summands: A1 must be nonnegative");
    require(A2 > 0.0, "two_summands: A2 must be positive");
    require(A3 > 0.0, "two_summands: A3 must be positive");
}

bool TwoSummandsAnsatz::geometric_relation_holds(double tol) const {
    const double target = double(d1) * (d1 - 1);
    return std::abs(A1 - target) <= tol * (1.0 + target);
}

void DancerWangAnsatz::validate() const {
    require(!factors.empty(), "dancer_wang: at least one factor is required");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        const std::string tag = "dancer_wang: factor " + std::to_string(i) + ": ";
        require(f.d >= 1, tag + "d must be positive");
        require(f.degenerate ? f.p >= 0 : f.p > 0, tag + "p must be a positive integer");
        if (!f.degenerate) {
            require(f.d % 2 == 0, tag + "d must be even");
            require(f.q != 0, tag + "q must be nonzero");
        }
    }
}

void LuPagePopeAnsatz::validate() const {
    require(d1 >= 2 && d1 % 2 == 0, "lpp: d1 must be even and positive");
    require(p1 > 0, "lpp: p1 must be a positive integer");
    require(q1 != 0, "lpp: q1 must be nonzero");
    require(d2 >= 1, "lpp: d2 must be a positive integer");
}

DancerWangAnsatz LuPagePopeAnsatz::as_dancer_wang() const {
    DancerWangAnsatz dw;
    dw.factors.push_back({d1, p1, q1, false});
    dw.factors.push_back({d2, d2 - 1, 0, true});
    return dw;
}

SystemKind system_kind(const Ansatz& a) {
    return std::visit(overloaded{[](const TwoSummandsAnsatz&) { return SystemKind::TwoSummands; },
                                 [](const DancerWangAnsatz&) { return SystemKind::DancerWang; },
                                 [](const LuPagePopeAnsatz&) { return SystemKind::LuPagePope; }},
                      a);
}

std::string system_name(SystemKind k) {
    switch (k) {
        case SystemKind::TwoSummands: return "two_summands";
        case SystemKind::DancerWang: return "dancer_wang";
        case SystemKind::LuPagePope: return "lpp";
    }
    return "unknown";
}

SystemKind parse_system_name(const std::string& s) {
    if (s == "two_summands") return SystemKind::TwoSummands;
    if (s == "dancer_wang") return SystemKind::DancerWang;
    if (s == "lpp") return SystemKind::LuPagePope;
    throw std::invalid_argument("unknown system '" + s + "'");
}

void validate_ansatz(const Ansatz& a) {
    std::visit([](const auto& x) { x.validate(); }, a);
}

std::vector<int> component_dims(const Ansatz& a) {
    return std::visit(overloaded{[](const TwoSummandsAnsatz& t) { return std::vector<int>{t.d1, t.d2}; },
                                 [](const DancerWangAnsatz& d) {
                                     std::vector<int> v{1};
                                     for (const auto& f : d.factors) v.push_back(f.d);
                                     return v;
                                 },
                                 [](const LuPagePopeAnsatz& l) { return std::vector<int>{1, l.d1, l.d2}; }},
                      a);
}

std::vector<std::string> component_names(const Ansatz& a) {
    return std::visit(overloaded{[](const TwoSummandsAnsatz&) { return std::vector<std::string>{"f1", "f2"}; },
                                 [](const DancerWangAnsatz& d) {
                                     std::vector<std::string> v{"f"};
                                     for (std::size_t i = 0; i < d.m(); ++i) v.push_back("g" + std::to_string(i + 1));
                                     return v;
                                 },
                                 [](const LuPagePopeAnsatz&) { return std::vector<std::string>{"f", "g1", "g2"}; }},
                      a);
}

int orbit_dim(const Ansatz& a) {
    int n = 0;
    for (int d : component_dims(a)) n += d;
    return n;
}

int collapsing_dim(const Ansatz& a) { return component_dims(a).front(); }

void ProblemSpec::validate() const {
    validate_ansatz(ansatz);
    require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be finite and >= 0");
    require(std::isfinite(C) && C <= 0.0, "C must be finite and <= 0");
    const std::size_t expected = std::visit(overloaded{[](const TwoSummandsAnsatz&) { return std::size_t(1); },
                                                       [](const DancerWangAnsatz& d) { return d.m(); },
                                                       [](const LuPagePopeAnsatz&) { return std::size_t(2); }},
                                            ansatz);
    require(initial.size() == expected,
            "initial: expected " + std::to_string(expected) + " sizes, got " + std::to_string(initial.size()));
    for (std::size_t i = 0; i < initial.size(); ++i)
        require(std::isfinite(initial[i]) && initial[i] > 0.0, "initial[" + std::to_string(i) + "] must be positive");
}

std::vector<double> SolitonState::to_vector() const {
    std::vector<double> y;
    y.reserve(2 * f.size() + 2);
    y.insert(y.end(), f.begin(), f.end());
    y.insert(y.end(), df.begin(), df.end());
    y.push_back(u);
    y.push_back(du);
    return y;
}

SolitonState SolitonState::from_vector(double t, std::span<const double> y) {
    if (y.size() < 4 || y.size() % 2 != 0) throw std::invalid_argument("state vector has invalid length");
    const std::size_t k = (y.size() - 2) / 2;
    SolitonState s;
    s.t = t;
    s.f.assign(y.begin(), y.begin() + std::ptrdiff_t(k));
    s.df.assign(y.begin() + std::ptrdiff_t(k), y.begin() + std::ptrdiff_t(2 * k));
    s.u = y[2 * k];
    s.du = y[2 * k + 1];
    return s;
}

StateDerivative rhs_two_summands(const SolitonState& s, const TwoSummandsAnsatz& a, double eps) {
    return rhs(s, Ansatz{a}, eps);
}

StateDerivative rhs_dancer_wang(const SolitonState& s, const DancerWangAnsatz& a, double eps) {
    return rhs(s, Ansatz{a}, eps);
}

StateDerivative rhs_lpp(const SolitonState& s, const LuPagePopeAnsatz& a, double eps) {
    return rhs(s, Ansatz{a}, eps);
}

StateDerivative rhs(const SolitonState& s, const Ansatz& a, double eps) {
    const auto dims = component_dims(a);
    if (s.f.size() != dims.size() || s.df.size() != dims.size())
        throw std::invalid_argument("state has " + std::to_string(s.f.size()) + " components, ansatz needs " +
                                    std::to_string(dims.size()));
    check_positive(s);
    return assemble(s, soliton_rates<double>(a, eps, s.f, s.df, s.du));
}

StateDerivative rhs_generic(const SolitonState& s, const geometry::IsotropyDecomposition& dec, double eps) {
    if (s.f.size() != dec.size()) throw std::invalid_argument("state and decomposition sizes differ");
    check_positive(s);
    std::vector<int> dims;
    for (std::size_t i = 0; i < dec.size(); ++i) dims.push_back(dec.dim(i));
    const auto r = geometry::ricci_eigenvalues_of_f(dec, s.f);
    return assemble(s, rates_from_ricci(dims, eps, s.f, s.df, s.du, r));
}

void rhs_flat(const Ansatz& a, double eps, std::span<const double> y, std::span<double> dy) {
    const std::size_t k = (y.size() - 2) / 2;
    std::vector<double> f(y.begin(), y.begin() + std::ptrdiff_t(k));
    std::vector<double> df(y.begin() + std::ptrdiff_t(k), y.begin() + std::ptrdiff_t(2 * k));
    for (std::size_t i = 0; i < k; ++i)
        if (!(f[i] > 0.0)) throw std::domain_error("metric function " + std::to_string(i) + " is not positive");
    const double du = y[2 * k + 1];
    const auto r = soliton_rates<double>(a, eps, f, df, du);
    for (std::size_t i = 0; i < k; ++i) {
        const double L = df[i] / f[i];
        dy[i] = df[i];
        dy[k + i] = f[i] * (r.dlog[i] + L * L);
    }
    dy[2 * k] = du;
    dy[2 * k + 1] = r.udd;
}

geometry::IsotropyDecomposition induced_decomposition(const Ansatz& a) {
    using geometry::IsotropyDecomposition;
    using geometry::Summand;
    return std::visit(
        overloaded{
            [](const TwoSummandsAnsatz& t) {
                IsotropyDecomposition dec({Summand{t.d1, 2.0 * (t.A1 + 2.0 * t.A3) / t.d1, std::nullopt},
                                           Summand{t.d2, 2.0 * t.A2 / t.d2, std::nullopt}});
                dec.set_triple(0, 1, 1, 4.0 * t.A3);
                dec.normalization = "induced by two-summands constants";
                return dec;
            },
            [](const DancerWangAnsatz& d) {
                std::vector<Summand> s;
                double b0 = 0.0;
                for (const auto& f : d.factors) b0 += f.d * double(f.q) * f.q;
                s.push_back({1, b0, std::nullopt});
                for (const auto& f : d.factors) s.push_back({f.d, 2.0 * f.p, std::nullopt});
                IsotropyDecomposition dec(s);
                for (std::size_t i = 0; i < d.m(); ++i) {
                    const auto& f = d.factors[i];
                    dec.set_triple(0, i + 1, i + 1, f.d * double(f.q) * f.q);
                }
                dec.normalization = "induced by circle-bundle constants";
                return dec;
            },
            [](const LuPagePopeAnsatz& l) { return induced_decomposition(Ansatz{l.as_dancer_wang()}); }},
        a);
}

TwoSummandsAnsatz two_summands_from_decomposition(const geometry::IsotropyDecomposition& dec) {
    if (dec.size() != 2) throw std::invalid_argument("two summands expected");
    const double tol = 1e-12 * (1.0 + std::abs(dec.triple(0, 1, 1)));
    if (std::abs(dec.triple(0, 0, 1)) > tol || std::abs(dec.triple(1, 1, 1)) > tol) {
        throw std::invalid_argument("decomposition has [001] or [111] entries outside the two-summands ansatz");
    }
    TwoSummandsAnsatz a;
    a.d1 = dec.dim(0);
    a.d2 = dec.dim(1);
    a.A3 = dec.triple(0, 1, 1) / 4.0;
    a.A2 = a.d2 * dec.summand(1).b / 2.0;
    a.A1 = a.d1 * dec.summand(0).b / 2.0 - dec.triple(0, 0, 0) / 4.0 - dec.triple(0, 1, 1) / 2.0;
    a.geometric = true;
    return a;
}

std::vector<double> shape_eigenvalues(const SolitonState& s) {
    std::vector<double> L(s.f.size());
    for (std::size_t i = 0; i < s.f.size(); ++i) L[i] = s.df[i] / s.f[i];
    return L;
}

double trace_L(const SolitonState& s, const std::vector<int>& dims) {
    double tr = 0.0;
    for (std::size_t i = 0; i < s.f.size(); ++i) tr += dims[i] * s.df[i] / s.f[i];
    return tr;
}

double trace_L_squared(const SolitonState& s, const std::vector<int>& dims) {
    double tr = 0.0;
    for (std::size_t i = 0; i < s.f.size(); ++i) {
        const double L = s.df[i] / s.f[i];
        tr += dims[i] * L * L;
    }
    return tr;
}

double trace_ricci(const Ansatz& a, const std::vector<double>& f) {
    const auto dims = component_dims(a);
    const auto r = ricci_terms<double>(a, f);
    double tr = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) tr += dims[i] * r[i];
    return tr;
}

double conservation_residual(const SolitonState& s, double udd, const ProblemSpec& spec) {
    const double trL = trace_L(s, component_dims(spec.ansatz));
    return udd + (-s.du + trL) * s.du - spec.C - spec.epsilon * s.u;
}

double conservation_residual_trace_form(const SolitonState& s, const ProblemSpec& spec) {
    const auto dims = component_dims(spec.ansatz);
    const double trL = trace_L(s, dims);
    const double n = orbit_dim(spec.ansatz);
    const double fr = -s.du + trL;
    return trace_ricci(spec.ansatz, s.f) + trace_L_squared(s, dims) - fr * fr + (n - 1.0) * spec.epsilon / 2.0 - spec.C -
           spec.epsilon * s.u;
}

double u_second_derivative_identity(const SolitonState& s, const ProblemSpec& spec) {
    const auto dims = component_dims(spec.ansatz);
    const double trL = trace_L(s, dims);
    const double n = orbit_dim(spec.ansatz);
    return spec.C + spec.epsilon * s.u + s.du * s.du + trace_L_squared(s, dims) - trL * trL +
           trace_ricci(spec.ansatz, s.f) + (n - 1.0) * spec.epsilon / 2.0;
}

std::vector<double> kahler_residual(const SolitonState& s, const DancerWangAnsatz& a) {
    if (s.f.size() != a.m() + 1) throw std::invalid_argument("kahler_residual: state does not match the ansatz");
    std::vector<double> r(a.m());
    for (std::size_t i = 0; i < a.m(); ++i) r[i] = 2.0 * s.f[i + 1] * s.df[i + 1] + a.factors[i].q * s.f[0];
    return r;
}

}  // namespace solitonlab
