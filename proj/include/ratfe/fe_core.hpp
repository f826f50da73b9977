#pragma once
// Machinery shared by both element families: exact moment tables floated
// once, Lagrange interpolation for loads, Vandermonde inversion, dof maps and
// triplet assembly.

#include "ratfe/quadrature.hpp"
#include "ratfe/ratfun.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace ratfe {

using SparseSym = Eigen::SparseMatrix<double>;

// Gram-type table of means: M(a, b) = to_float(mean of f[a] * g[b]).
Eigen::MatrixXd moment_matrix(const std::vector<RatCombo>& f, const std::vector<RatCombo>& g, MemoCache* cache);

// Symmetric variant for a single family; only the upper triangle is integrated.
Eigen::MatrixXd moment_matrix_sym(const std::vector<RatCombo>& f, MemoCache* cache);

// Flattened lambda-Hessians: entry r*9 + 3*i + j is d_i d_j f[r].
std::vector<RatCombo> hessian_family(const std::vector<RatCombo>& f);

// Lagrange basis of P_r in barycentric form and its nodes.
std::vector<RatCombo> lagrange_basis(int r);
std::vector<std::array<double, 3>> lagrange_nodes(int r);

// J x L matrix of means of phi_j * b_l.
Eigen::MatrixXd rhs_moments(int r, const std::vector<RatCombo>& basis, MemoCache* cache);

// Partial-pivot LU inverse with one refinement step; throws SingularVandermonde.
Eigen::MatrixXd vandermonde_invert(const Eigen::MatrixXd& V);

// Shape-function gradients / Hessians from lambda-derivatives.
// grad_x = G^T grad_lambda,  hess_x = G^T H_lambda G.
inline Eigen::Vector2d to_physical_grad(const Eigen::Matrix<double, 3, 2>& G, const Eigen::Vector3d& gl) {
    return G.transpose() * gl;
}
inline Eigen::Matrix2d to_physical_hess(const Eigen::Matrix<double, 3, 2>& G, const Eigen::Matrix3d& hl) {
    return G.transpose() * hl * G;
}

struct DofMap {
    std::vector<std::vector<int>> l2g;  // per element, local order
    int ndof = 0;
    std::vector<char> fixed;  // boundary-constrained dofs

    std::vector<int> free_dofs() const;
};

// Accumulates dense element contributions as triplets and compresses once.
class Assembler {
public:
    explicit Assembler(int n) : n_(n), rhs_(Eigen::VectorXd::Zero(n)) {}
    void add_matrix(const std::vector<int>& dofs, const Eigen::MatrixXd& local);
    void add_vector(const std::vector<int>& dofs, const Eigen::VectorXd& local);
    SparseSym matrix() const;
    const Eigen::VectorXd& vector() const { return rhs_; }

private:
    int n_;
    std::vector<Eigen::Triplet<double>> trip_;
    Eigen::VectorXd rhs_;
};

// Sub-matrix / sub-vector on a dof subset.
SparseSym restrict_matrix(const SparseSym& A, const std::vector<int>& rows, const std::vector<int>& cols);
Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v, const std::vector<int>& idx);

// Writes a dense tensor as CSV with one column per index plus "value".
void write_tensor_csv(std::ostream& os, const std::vector<std::string>& index_names, const std::vector<int>& dims,
                      const std::vector<double>& data);

}  // namespace ratfe
