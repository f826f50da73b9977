#include "ratfe/solvers.hpp"

#include "ratfe/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>

namespace ratfe {

namespace {
double rel_residual(const SparseSym& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double nb = b.norm();
    const double nr = (A * x - b).norm();
    return nb == 0.0 ? nr : nr / nb;
}
}  // namespace

Eigen::VectorXd spd_solve(const SparseSym& A, const Eigen::VectorXd& b, SpdMethod method) {
    if (A.rows() != A.cols() || A.rows() != b.size()) throw SolverError("spd_solve: dimension mismatch");
    if (b.size() == 0) return b;
    if (method == SpdMethod::ConjugateGradient) {
        Eigen::ConjugateGradient<SparseSym, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-11);
        cg.setMaxIterations(static_cast<int>(std::max<Eigen::Index>(1000, 10 * A.rows())));
        cg.compute(A);
        Eigen::VectorXd x = cg.solve(b);
        if (cg.info() != Eigen::Success || rel_residual(A, x, b) > 1e-10) throw NoConvergence("CG did not converge");
        return x;
    }
    Eigen::SimplicialLLT<SparseSym> llt(A);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed");
    Eigen::VectorXd x = llt.solve(b);
    for (int k = 0; k < 3 && rel_residual(A, x, b) > 1e-12; ++k) x += llt.solve(b - A * x);
    if (rel_residual(A, x, b) > 1e-12) throw NoConvergence("direct SPD solve missed the residual target");
    return x;
}

Eigen::VectorXd sym_indef_solve(const SparseSym& K, const Eigen::VectorXd& rhs) {
    if (K.rows() != K.cols() || K.rows() != rhs.size()) throw SolverError("sym_indef_solve: dimension mismatch");
    if (rhs.size() == 0) return rhs;
    Eigen::SparseLU<SparseSym, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success) throw SingularSystem("sparse LU failed: " + lu.lastErrorMessage());
    Eigen::VectorXd x = lu.solve(rhs);
    for (int k = 0; k < 3 && rel_residual(K, x, rhs) > 1e-13; ++k) x += lu.solve(rhs - K * x);
    const double r = rel_residual(K, x, rhs);
    if (!(r <= 1e-10)) throw SingularSystem("saddle solve residual " + std::to_string(r));
    return x;
}

EigenPair gen_eig_smallest(const SparseSym& A, const SparseSym& M, double tol, int maxit) {
    if (A.rows() != A.cols() || M.rows() != A.rows() || M.cols() != A.cols())
        throw SolverError("gen_eig_smallest: dimension mismatch");
    const Eigen::Index n = A.rows();
    if (n == 0) throw SolverError("gen_eig_smallest: empty problem");
    Eigen::SimplicialLLT<SparseSym> llt(A);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization of A failed");

    Eigen::VectorXd x = M * Eigen::VectorXd::Ones(n);
    auto m_normalize = [&](Eigen::VectorXd& v) {
        const double nm = std::sqrt(v.dot(M * v));
        if (!(nm > 0.0)) throw NotPositiveDefinite("M is not positive definite on the iterate");
        v /= nm;
    };
    m_normalize(x);
    double lambda = x.dot(A * x);
    for (int it = 1; it <= maxit; ++it) {
        x = llt.solve(M * x);
        m_normalize(x);
        const double next = x.dot(A * x);
        const double change = std::abs(next - lambda) / std::abs(next);
        lambda = next;
        if (change <= tol) return {lambda, x, it};
    }
    throw NoConvergence("inverse iteration did not converge");
}

}  // namespace ratfe
