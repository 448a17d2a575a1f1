#pragma once

// Brute-force curvature of G/K from explicit Lie algebra data. Test support:
// everything here works on a concrete basis and is independent of the
// closed forms in homogeneous_geometry.

#include "solitonlab/homogeneous_geometry.hpp"

#include <Eigen/Dense>

#include <vector>

namespace solitonlab::oracle {

// [e_a, e_b] = sum_c at(a, b, c) e_c
class LieAlgebra {
public:
    explicit LieAlgebra(int n) : n_(n), c_(std::size_t(n) * n * n, 0.0) {}
    int dim() const { return n_; }
    double& at(int a, int b, int c) { return c_[(std::size_t(a) * n_ + b) * n_ + c]; }
    double at(int a, int b, int c) const { return c_[(std::size_t(a) * n_ + b) * n_ + c]; }
    Eigen::MatrixXd ad(int a) const;
    Eigen::MatrixXd killing_form() const;

private:
    int n_;
    std::vector<double> c_;
};

LieAlgebra abelian(int n);
LieAlgebra su2();
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);
// real Lie algebra spanned by the given complex matrices
LieAlgebra from_matrices(const std::vector<Eigen::MatrixXcd>& basis);
// sp(1) + sp(2): indices 0-2 sp(1), 3-5 and 6-8 the diagonal sp(1)'s of sp(2), 9-12 off-diagonal
LieAlgebra sp1_sp2();

// g in a b-orthonormal basis adapted to g = k + p_1 + ... + p_s
struct HomogeneousSpace {
    LieAlgebra algebra{0};
    int k_dim = 0;
    std::vector<int> p_dims;
    int p_dim() const;
    std::vector<int> summand_of_index() const;  // -1 for k
};

// Gram-Schmidt of the spans (original coordinates) w.r.t. b, in order k, p_1, ...;
// vectors that are dependent on earlier ones are dropped.
HomogeneousSpace adapt(const LieAlgebra& g, const Eigen::MatrixXd& b, const std::vector<Eigen::VectorXd>& k_span,
                       const std::vector<std::vector<Eigen::VectorXd>>& p_spans);

geometry::IsotropyDecomposition extract_decomposition(const HomogeneousSpace& space);

double brute_scalar_curvature(const HomogeneousSpace& space, const std::vector<double>& x);
// Ric in a <,>-orthonormal basis of p
Eigen::MatrixXd brute_ricci_matrix(const HomogeneousSpace& space, const std::vector<double>& x);
// block traces of brute_ricci_matrix divided by d_i
std::vector<double> brute_ricci_eigenvalues(const HomogeneousSpace& space, const std::vector<double>& x);

// b -> lambda * b rescales b_i, c_i and [ijk] by 1/lambda
geometry::IsotropyDecomposition rescale_b(const geometry::IsotropyDecomposition& dec, double lambda);

// su(2)+su(2) with b = -B
HomogeneousSpace su2_su2_product();   // K trivial; p_1, p_2 the two factors
HomogeneousSpace su2_su2_berger();    // K trivial; span(e1), span(e2, e3), second factor
HomogeneousSpace su2_su2_circle();    // K = U(1) in the first factor
HomogeneousSpace su2_su2_diagonal();  // K = diagonal su(2)
// su(2)+su(2) with K trivial and p split into pieces of the given sizes after a random b-orthogonal rotation
HomogeneousSpace su2_su2_random_split(const std::vector<int>& sizes, unsigned seed);

// Sp(1)xSp(2) / Sp(1)xSp(1) with b = -B_g; p_1 = h/k (dim 3), p_2 = g/h (dim 4)
HomogeneousSpace sp1_sp2_hopf();

}  // namespace solitonlab::oracle
