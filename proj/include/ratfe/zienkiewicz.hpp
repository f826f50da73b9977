#pragma once
// Singular Zienkiewicz element (C^1, 12 dofs) and its reduced 9-dof variant:
// reference tables, local matrices, global assembly with clamped boundary
// conditions and the smallest biharmonic eigenpair.

#include "ratfe/fe_core.hpp"
#include "ratfe/mesh.hpp"
#include "ratfe/solvers.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>

namespace ratfe {

enum class Variant { Full, Reduced };

// "exact" or "gauss:N".
struct QuadratureMode {
    bool exact = true;
    int n = 0;

    static QuadratureMode parse(const std::string& s);
    std::string str() const;
};

Variant parse_variant(const std::string& s);
std::string variant_name(Variant v);

struct ZienkiewiczTables {
    int lagrange_degree = 2;
    std::vector<RatCombo> basis;  // b_1..b_12
    std::vector<double> Ahat;     // (r,s,i,j,k,l), row-major 12x12x3x3x3x3
    Eigen::Matrix<double, 12, 12> mass;
    Eigen::Matrix<double, 3, 12> T_v;
    std::array<Eigen::Matrix<double, 3, 12>, 3> T_gv;  // [vertex](k, j) = d_k b_j
    std::array<Eigen::Matrix<double, 3, 12>, 3> T_ge;  // [edge midpoint](k, j)
    Eigen::MatrixXd bhat;                              // J x 12
    std::vector<std::array<double, 3>> nodes;          // Lagrange nodes

    // Floating-point evaluators for interior points.
    std::vector<CompiledCombo> val;
    std::vector<std::array<CompiledCombo, 3>> grad;
    std::vector<std::array<std::array<CompiledCombo, 3>, 3>> hess;

    double A(int r, int s, int i, int j, int k, int l) const {
        return Ahat[((((r * 12 + s) * 3 + i) * 3 + j) * 3 + k) * 3 + l];
    }
};

std::vector<RatCombo> zienkiewicz_basis();
ZienkiewiczTables build_zienkiewicz_tables(int lagrange_degree, MemoCache* cache);
// Built once per degree and shared.
const ZienkiewiczTables& zienkiewicz_tables(int lagrange_degree = 2);

using Mat12 = Eigen::Matrix<double, 12, 12>;

Mat12 local_stiffness_biharmonic(const ElementGeometry& g, const ZienkiewiczTables& tab);
Mat12 local_mass_biharmonic(const ElementGeometry& g, const ZienkiewiczTables& tab);
// Same integrals by the n-point Fubini-Gauss rule.
Mat12 local_stiffness_biharmonic_gauss(const ElementGeometry& g, const ZienkiewiczTables& tab, int n);
Mat12 local_mass_biharmonic_gauss(const ElementGeometry& g, const ZienkiewiczTables& tab, int n);

// psi_l(b_k) with edge dofs taken along g.side_normal.
Mat12 local_vandermonde(const ElementGeometry& g, const ZienkiewiczTables& tab);
// 12 x 9 coefficients of the reduced shape functions.
Eigen::Matrix<double, 12, 9> reduce_to_Zred(const Mat12& V, const ElementGeometry& g);
// Coefficient matrix C (12 x 12 or 12 x 9): shape function m = sum_k C(k,m) b_k.
Eigen::MatrixXd zienkiewicz_coefficients(const ElementGeometry& g, const ZienkiewiczTables& tab, Variant v);

// Value, physical gradient and Hessian of the 12 raw basis functions at an
// interior or edge point (not a vertex).
struct ZienkiewiczPointValues {
    Eigen::Matrix<double, 12, 1> val;
    Eigen::Matrix<double, 2, 12> grad;
    std::array<Eigen::Matrix2d, 12> hess;
};
ZienkiewiczPointValues zienkiewicz_point_values(const ElementGeometry& g, const ZienkiewiczTables& tab,
                                                const std::array<double, 3>& lam);

DofMap zienkiewicz_dofmap(const Triangulation& t, Variant v);

struct BiharmonicSystem {
    SparseSym A, M;
    Eigen::VectorXd b;
    DofMap dofs;
};

using ScalarField = std::function<double(double, double)>;

BiharmonicSystem assemble_biharmonic(const Triangulation& t, const ScalarField& f, Variant v,
                                     QuadratureMode q = {}, int lagrange_degree = 2);

// Dof vector of a smooth function given its value and gradient.
Eigen::VectorXd zienkiewicz_interpolate(const Triangulation& t, Variant v, const ScalarField& p,
                                        const std::function<Eigen::Vector2d(double, double)>& grad_p);

EigenPair solve_biharmonic_eigen(const SparseSym& A, const SparseSym& M, const DofMap& dofs, double tol = 1e-10);

// Hermite functional 6 p(mid) - 2 sum p(v_j) + sum grad p(v_k).(v_k - mid) of
// every basis function, evaluated exactly on the reference element.
std::array<BigRational, 12> hermite_functional_reference();

}  // namespace ratfe
