#pragma once
// Sparse direct solvers and the smallest generalized eigenpair.

#include "ratfe/fe_core.hpp"

#include <Eigen/Sparse>

namespace ratfe {

enum class SpdMethod { Direct, ConjugateGradient };

// Relative residual <= 1e-12 (direct) or 1e-10 (CG), else NoConvergence.
Eigen::VectorXd spd_solve(const SparseSym& A, const Eigen::VectorXd& b, SpdMethod method = SpdMethod::Direct);

// Sparse LU with iterative refinement; relative residual <= 1e-10.
Eigen::VectorXd sym_indef_solve(const SparseSym& K, const Eigen::VectorXd& rhs);

struct EigenPair {
    double lambda = 0.0;
    Eigen::VectorXd x;  // x^T M x = 1
    int iterations = 0;
};

// Inverse power iteration on A^{-1} M with one Cholesky factorization of A.
EigenPair gen_eig_smallest(const SparseSym& A, const SparseSym& M, double tol = 1e-10, int maxit = 500);

}  // namespace ratfe
