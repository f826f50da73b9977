#include "ratfe/fe_core.hpp"

#include "ratfe/errors.hpp"

#include <iomanip>
#include <ostream>

namespace ratfe {

Eigen::MatrixXd moment_matrix(const std::vector<RatCombo>& f, const std::vector<RatCombo>& g, MemoCache* cache) {
    Eigen::MatrixXd M(f.size(), g.size());
    for (size_t a = 0; a < f.size(); ++a)
        for (size_t b = 0; b < g.size(); ++b) M(a, b) = to_float(integral_mean_combo(multiply(f[a], g[b]), cache));
    return M;
}

Eigen::MatrixXd moment_matrix_sym(const std::vector<RatCombo>& f, MemoCache* cache) {
    const auto n = static_cast<Eigen::Index>(f.size());
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a; b < n; ++b) {
            if (f[a].is_zero() || f[b].is_zero()) {
                M(a, b) = M(b, a) = 0.0;
                continue;
            }
            M(a, b) = M(b, a) = to_float(integral_mean_combo(multiply(f[a], f[b]), cache));
        }
    return M;
}

std::vector<RatCombo> hessian_family(const std::vector<RatCombo>& f) {
    std::vector<RatCombo> out;
    out.reserve(9 * f.size());
    for (const auto& b : f) {
        const auto H = hessian_lambda(b);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out.push_back(H[i][j]);
    }
    return out;
}

namespace {
std::vector<std::array<int, 3>> lagrange_multi_indices(int r) {
    if (r < 0) throw ConfigError("Lagrange degree must be >= 0");
    std::vector<std::array<int, 3>> out;
    for (int a0 = r; a0 >= 0; --a0)
        for (int a1 = r - a0; a1 >= 0; --a1) out.push_back({a0, a1, r - a0 - a1});
    return out;
}
}  // namespace

std::vector<RatCombo> lagrange_basis(int r) {
    std::vector<RatCombo> out;
    for (const auto& a : lagrange_multi_indices(r)) {
        RatCombo phi = RatCombo::constant(1);
        for (int m = 0; m < 3; ++m)
            for (int l = 0; l < a[m]; ++l) {
                const RatCombo factor = BigRational(r, l + 1) * RatCombo::lambda(m) -
                                        RatCombo::constant(BigRational(l, l + 1));
                phi = multiply(phi, factor);
            }
        out.push_back(phi);
    }
    return out;
}

std::vector<std::array<double, 3>> lagrange_nodes(int r) {
    std::vector<std::array<double, 3>> out;
    for (const auto& a : lagrange_multi_indices(r)) {
        if (r == 0) {
            out.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
        } else {
            out.push_back({double(a[0]) / r, double(a[1]) / r, double(a[2]) / r});
        }
    }
    return out;
}

Eigen::MatrixXd rhs_moments(int r, const std::vector<RatCombo>& basis, MemoCache* cache) {
    return moment_matrix(lagrange_basis(r), basis, cache);
}

Eigen::MatrixXd vandermonde_invert(const Eigen::MatrixXd& V) {
    if (V.rows() != V.cols()) throw SingularVandermonde("Vandermonde matrix is not square");
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(V.rows(), V.cols());
    // PartialPivLU does not report singularity; check the pivots.
    const Eigen::MatrixXd& LU = lu.matrixLU();
    const double vmax = V.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < LU.rows(); ++i)
        if (!(std::abs(LU(i, i)) > 1e-13 * vmax)) throw SingularVandermonde("singular Vandermonde matrix");
    Eigen::MatrixXd X = lu.solve(I);
    X += lu.solve(I - V * X);
    const double res = (V * X - I).cwiseAbs().maxCoeff();
    if (!(res <= 1e-9 * std::max(1.0, V.cwiseAbs().maxCoeff() * X.cwiseAbs().maxCoeff())))
        throw SingularVandermonde("Vandermonde inversion residual too large");
    return X;
}

std::vector<int> DofMap::free_dofs() const {
    std::vector<int> out;
    for (int k = 0; k < ndof; ++k)
        if (!fixed[k]) out.push_back(k);
    return out;
}

void Assembler::add_matrix(const std::vector<int>& dofs, const Eigen::MatrixXd& local) {
    const auto n = static_cast<Eigen::Index>(dofs.size());
    if (local.rows() != n || local.cols() != n) throw IndexOutOfRange("local matrix size does not match dofs");
    for (int d : dofs)
        if (d < 0 || d >= n_) throw IndexOutOfRange("dof index out of range");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) trip_.emplace_back(dofs[i], dofs[j], local(i, j));
}

void Assembler::add_vector(const std::vector<int>& dofs, const Eigen::VectorXd& local) {
    if (local.size() != static_cast<Eigen::Index>(dofs.size()))
        throw IndexOutOfRange("local vector size does not match dofs");
    for (size_t i = 0; i < dofs.size(); ++i) {
        if (dofs[i] < 0 || dofs[i] >= n_) throw IndexOutOfRange("dof index out of range");
        rhs_(dofs[i]) += local(static_cast<Eigen::Index>(i));
    }
}

SparseSym Assembler::matrix() const {
    SparseSym A(n_, n_);
    A.setFromTriplets(trip_.begin(), trip_.end());
    A.makeCompressed();
    return A;
}

SparseSym restrict_matrix(const SparseSym& A, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::vector<int> rmap(A.rows(), -1), cmap(A.cols(), -1);
    for (size_t i = 0; i < rows.size(); ++i) rmap[rows[i]] = static_cast<int>(i);
    for (size_t j = 0; j < cols.size(); ++j) cmap[cols[j]] = static_cast<int>(j);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(A.nonZeros());
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseSym::InnerIterator it(A, k); it; ++it) {
            const int r = rmap[it.row()], c = cmap[it.col()];
            if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
        }
    SparseSym B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    return B;
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
    return out;
}

void write_tensor_csv(std::ostream& os, const std::vector<std::string>& index_names, const std::vector<int>& dims,
                      const std::vector<double>& data) {
    for (const auto& n : index_names) os << n << ',';
    os << "value\n";
    os << std::setprecision(17);
    std::vector<int> idx(dims.size(), 0);
    for (double v : data) {
        for (int i : idx) os << i << ',';
        os << v << '\n';
        for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
            if (++idx[k] < dims[k]) break;
            idx[k] = 0;
        }
    }
}

}  // namespace ratfe
