#include "solitonlab/lie_oracle.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace solitonlab::oracle {

Eigen::MatrixXd LieAlgebra::ad(int a) const {
    // column b holds the coordinates of [e_a, e_b]
    Eigen::MatrixXd m(n_, n_);
    for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c) m(c, b) = at(a, b, c);
    return m;
}

Eigen::MatrixXd LieAlgebra::killing_form() const {
    std::vector<Eigen::MatrixXd> ads;
    for (int a = 0; a < n_; ++a) ads.push_back(ad(a));
    Eigen::MatrixXd B(n_, n_);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) B(a, b) = (ads[a] * ads[b]).trace();
    return B;
}

LieAlgebra abelian(int n) { return LieAlgebra(n); }

LieAlgebra su2() {
    LieAlgebra g(3);
    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3;
        const int c = (a + 2) % 3;
        g.at(a, b, c) = 1.0;
        g.at(b, a, c) = -1.0;
    }
    return g;
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
    const int na = a.dim();
    LieAlgebra g(na + b.dim());
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            for (int k = 0; k < na; ++k) g.at(i, j, k) = a.at(i, j, k);
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            for (int k = 0; k < b.dim(); ++k) g.at(na + i, na + j, na + k) = b.at(i, j, k);
    return g;
}

static Eigen::VectorXd flatten(const Eigen::MatrixXcd& m) {
    const Eigen::Index sz = m.size();
    Eigen::VectorXd v(2 * sz);
    for (Eigen::Index i = 0; i < sz; ++i) {
        v(i) = m.data()[i].real();
        v(sz + i) = m.data()[i].imag();
    }
    return v;
}

LieAlgebra from_matrices(const std::vector<Eigen::MatrixXcd>& basis) {
    const int n = static_cast<int>(basis.size());
    if (n == 0) return LieAlgebra(0);
    Eigen::MatrixXd V(2 * basis[0].size(), n);
    for (int a = 0; a < n; ++a) V.col(a) = flatten(basis[a]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    if (qr.rank() != n) throw std::invalid_argument("from_matrices: basis is linearly dependent");
    LieAlgebra g(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const Eigen::VectorXd w = flatten(basis[a] * basis[b] - basis[b] * basis[a]);
            const Eigen::VectorXd x = qr.solve(w);
            if ((V * x - w).norm() > 1e-10 * (1.0 + w.norm())) throw std::invalid_argument("from_matrices: span is not closed under brackets");
            for (int c = 0; c < n; ++c) g.at(a, b, c) = x(c);
        }
    }
    return g;
}

LieAlgebra sp1_sp2() {
    using cd = std::complex<double>;
    const cd I(0.0, 1.0);
    auto quat = [&](double a, double b, double c, double d) {
        Eigen::Matrix2cd q;
        q << a + I * b, c + I * d, -c + I * d, a - I * b;
        return q;
    };
    const std::vector<Eigen::Matrix2cd> units{quat(0, 1, 0, 0), quat(0, 0, 1, 0), quat(0, 0, 0, 1)};
    auto embed = [](const Eigen::Matrix2cd& x, int row, int col) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
        m.block(2 * row, 2 * col, 2, 2) = x;
        return m;
    };
    std::vector<Eigen::MatrixXcd> basis;
    for (const auto& q : units) basis.push_back(embed(q, 0, 0));
    for (const auto& q : units) basis.push_back(embed(q, 1, 1));
    for (const auto& q : units) basis.push_back(embed(q, 2, 2));
    std::vector<Eigen::Matrix2cd> offdiag{quat(1, 0, 0, 0), units[0], units[1], units[2]};
    for (const auto& v : offdiag) basis.push_back(embed(v, 1, 2) + embed(-v.adjoint(), 2, 1));
    return from_matrices(basis);
}

int HomogeneousSpace::p_dim() const {
    int n = 0;
    for (int d : p_dims) n += d;
    return n;
}

std::vector<int> HomogeneousSpace::summand_of_index() const {
    std::vector<int> s(std::size_t(k_dim), -1);
    for (std::size_t i = 0; i < p_dims.size(); ++i) s.insert(s.end(), std::size_t(p_dims[i]), int(i));
    return s;
}

HomogeneousSpace adapt(const LieAlgebra& g, const Eigen::MatrixXd& b, const std::vector<Eigen::VectorXd>& k_span,
                       const std::vector<std::vector<Eigen::VectorXd>>& p_spans) {
    const int n = g.dim();
    std::vector<Eigen::VectorXd> out;
    auto absorb = [&](const std::vector<Eigen::VectorXd>& vecs) {
        int added = 0;
        for (const auto& v : vecs) {
            Eigen::VectorXd w = v;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& u : out) w -= (u.transpose() * b * w)(0) * u;
            const double nn = std::sqrt((w.transpose() * b * w)(0));
            if (nn > 1e-9) {
                out.push_back(w / nn);
                ++added;
            }
        }
        return added;
    };
    HomogeneousSpace space;
    space.k_dim = absorb(k_span);
    for (const auto& span : p_spans) space.p_dims.push_back(absorb(span));
    if (static_cast<int>(out.size()) != n) throw std::invalid_argument("adapt: spans do not cover the algebra");
    Eigen::MatrixXd E(n, n);
    for (int a = 0; a < n; ++a) E.col(a) = out[std::size_t(a)];
    const Eigen::MatrixXd Einv = E.inverse();
    LieAlgebra h(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd br = Eigen::VectorXd::Zero(n);
            for (int a = 0; a < n; ++a) {
                if (E(a, i) == 0.0) continue;
                for (int bb = 0; bb < n; ++bb) {
                    const double w = E(a, i) * E(bb, j);
                    if (w == 0.0) continue;
                    for (int c = 0; c < n; ++c) br(c) += w * g.at(a, bb, c);
                }
            }
            const Eigen::VectorXd coords = Einv * br;
            for (int k = 0; k < n; ++k) h.at(i, j, k) = coords(k);
        }
    }
    space.algebra = h;
    return space;
}

geometry::IsotropyDecomposition extract_decomposition(const HomogeneousSpace& space) {
    const LieAlgebra& g = space.algebra;
    const int n = g.dim();
    const auto owner = space.summand_of_index();
    const Eigen::MatrixXd B = g.killing_form();
    const std::size_t s = space.p_dims.size();
    std::vector<geometry::Summand> summands(s);
    for (std::size_t i = 0; i < s; ++i) {
        summands[i].dim = space.p_dims[i];
        summands[i].b = 0.0;
        summands[i].c = 0.0;
    }
    for (int a = space.k_dim; a < n; ++a) {
        const std::size_t i = std::size_t(owner[std::size_t(a)]);
        summands[i].b += -B(a, a) / space.p_dims[i];
        double cas = 0.0;
        for (int z = 0; z < space.k_dim; ++z)
            for (int c = 0; c < n; ++c) cas += g.at(z, a, c) * g.at(z, a, c);
        *summands[i].c += cas / space.p_dims[i];
    }
    geometry::IsotropyDecomposition dec(summands);
    std::vector<double> t(s * s * s, 0.0);
    for (int a = space.k_dim; a < n; ++a)
        for (int bb = space.k_dim; bb < n; ++bb)
            for (int c = space.k_dim; c < n; ++c) {
                const double v = g.at(a, bb, c);
                t[(std::size_t(owner[a]) * s + std::size_t(owner[bb])) * s + std::size_t(owner[c])] += v * v;
            }
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = 0; k < s; ++k) dec.set_triple_entry(i, j, k, t[(i * s + j) * s + k]);
    dec.normalization = "b = -B_g";
    return dec;
}

static std::vector<double> per_index_scaling(const HomogeneousSpace& space, const std::vector<double>& x) {
    if (x.size() != space.p_dims.size()) throw std::invalid_argument("oracle: scaling size mismatch");
    const auto owner = space.summand_of_index();
    std::vector<double> xi(std::size_t(space.algebra.dim()), 0.0);
    for (int a = space.k_dim; a < space.algebra.dim(); ++a) xi[std::size_t(a)] = x[std::size_t(owner[std::size_t(a)])];
    return xi;
}

double brute_scalar_curvature(const HomogeneousSpace& space, const std::vector<double>& x) {
    const LieAlgebra& g = space.algebra;
    const int n = g.dim();
    const int k0 = space.k_dim;
    const auto xi = per_index_scaling(space, x);
    const Eigen::MatrixXd B = g.killing_form();
    double bracket = 0.0;
    double killing = 0.0;
    for (int a = k0; a < n; ++a) {
        killing += B(a, a) / xi[a];
        for (int b = k0; b < n; ++b)
            for (int c = k0; c < n; ++c) bracket += g.at(a, b, c) * g.at(a, b, c) * xi[c] / (xi[a] * xi[b]);
    }
    return -0.25 * bracket - 0.5 * killing;
}

Eigen::MatrixXd brute_ricci_matrix(const HomogeneousSpace& space, const std::vector<double>& x) {
    const LieAlgebra& g = space.algebra;
    const int n = g.dim();
    const int k0 = space.k_dim;
    const int m = n - k0;
    const auto xi = per_index_scaling(space, x);
    const Eigen::MatrixXd B = g.killing_form();
    Eigen::MatrixXd ric(m, m);
    for (int a = k0; a < n; ++a) {
        for (int b = k0; b < n; ++b) {
            const double sab = std::sqrt(xi[a] * xi[b]);
            double t1 = 0.0;
            double t3 = 0.0;
            for (int c = k0; c < n; ++c) {
                for (int e = k0; e < n; ++e) {
                    t1 += g.at(a, c, e) * g.at(b, c, e) * xi[e] / (sab * xi[c]);
                    t3 += g.at(c, e, a) * g.at(c, e, b) * sab / (xi[c] * xi[e]);
                }
            }
            ric(a - k0, b - k0) = -0.5 * t1 - 0.5 * B(a, b) / sab + 0.25 * t3;
        }
    }
    return ric;
}

std::vector<double> brute_ricci_eigenvalues(const HomogeneousSpace& space, const std::vector<double>& x) {
    const Eigen::MatrixXd ric = brute_ricci_matrix(space, x);
    std::vector<double> r;
    int off = 0;
    for (int d : space.p_dims) {
        r.push_back(ric.block(off, off, d, d).trace() / d);
        off += d;
    }
    return r;
}

geometry::IsotropyDecomposition rescale_b(const geometry::IsotropyDecomposition& dec, double lambda) {
    std::vector<geometry::Summand> summands = dec.summands();
    for (auto& s : summands) {
        s.b /= lambda;
        if (s.c) *s.c /= lambda;
    }
    geometry::IsotropyDecomposition out(summands);
    const std::size_t s = dec.size();
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = 0; k < s; ++k) out.set_triple_entry(i, j, k, dec.triple(i, j, k) / lambda);
    out.normalization = dec.normalization;
    return out;
}

namespace {

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

std::vector<Eigen::VectorXd> units(int n, std::initializer_list<int> idx) {
    std::vector<Eigen::VectorXd> v;
    for (int i : idx) v.push_back(unit(n, i));
    return v;
}

std::vector<Eigen::VectorXd> all_units(int n) {
    std::vector<Eigen::VectorXd> v;
    for (int i = 0; i < n; ++i) v.push_back(unit(n, i));
    return v;
}

LieAlgebra su2_su2() { return direct_sum(su2(), su2()); }

}  // namespace

HomogeneousSpace su2_su2_product() {
    const LieAlgebra g = su2_su2();
    return adapt(g, -g.killing_form(), {}, {units(6, {0, 1, 2}), units(6, {3, 4, 5})});
}

HomogeneousSpace su2_su2_berger() {
    const LieAlgebra g = su2_su2();
    return adapt(g, -g.killing_form(), {}, {units(6, {0}), units(6, {1, 2}), units(6, {3, 4, 5})});
}

HomogeneousSpace su2_su2_circle() {
    const LieAlgebra g = su2_su2();
    return adapt(g, -g.killing_form(), units(6, {0}), {units(6, {1, 2}), units(6, {3, 4, 5})});
}

HomogeneousSpace su2_su2_diagonal() {
    const LieAlgebra g = su2_su2();
    std::vector<Eigen::VectorXd> k;
    for (int i = 0; i < 3; ++i) k.push_back(unit(6, i) + unit(6, 3 + i));
    return adapt(g, -g.killing_form(), k, {all_units(6)});
}

HomogeneousSpace su2_su2_random_split(const std::vector<int>& sizes, unsigned seed) {
    const LieAlgebra g = su2_su2();
    const Eigen::MatrixXd b = -g.killing_form();
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd R(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) R(i, j) = nd(rng);
    std::vector<std::vector<Eigen::VectorXd>> spans;
    int col = 0;
    for (int sz : sizes) {
        std::vector<Eigen::VectorXd> span;
        for (int c = 0; c < sz; ++c) span.push_back(R.col(col++));
        spans.push_back(span);
    }
    if (col != 6) throw std::invalid_argument("su2_su2_random_split: sizes must add up to 6");
    return adapt(g, b, {}, spans);
}

HomogeneousSpace sp1_sp2_hopf() {
    const LieAlgebra g = sp1_sp2();
    const int n = g.dim();
    std::vector<Eigen::VectorXd> k;
    for (int i = 0; i < 3; ++i) k.push_back(unit(n, i) + unit(n, 3 + i));
    for (int i = 0; i < 3; ++i) k.push_back(unit(n, 6 + i));
    std::vector<Eigen::VectorXd> h;
    for (int i = 0; i < 9; ++i) h.push_back(unit(n, i));
    return adapt(g, -g.killing_form(), k, {h, all_units(n)});
}

}  // namespace solitonlab::oracle
