#pragma once
// Guzman-Neilan Stokes pair: velocity P1^2 + curl of the singular
// Zienkiewicz space, piecewise-constant pressure. Full (12 velocity dofs per
// element) and reduced (9) variants.

#include "ratfe/fe_core.hpp"
#include "ratfe/mesh.hpp"
#include "ratfe/zienkiewicz.hpp"

#include <functional>

namespace ratfe {

struct GuzmanNeilanTables {
    int lagrange_degree = 1;
    std::vector<RatCombo> rho;  // six potentials
    std::vector<double> Rhat;   // (r,s,i,j,k,l): 6x6x3x3x3x3, mean of d_i d_k rho_r * d_j d_l rho_s
    std::vector<double> Mhat;   // (r,s,i,j,k,l): 6x6x2x3x3x3, mean of d_k (b_r)_i * d_j d_l rho_s
    std::array<Eigen::Matrix<double, 3, 6>, 3> T_gv;  // [vertex](k, s) = d_k rho_s
    std::array<Eigen::Matrix<double, 3, 6>, 3> T_ge;  // [edge midpoint](k, s)
    Eigen::Matrix3d val_mid;                          // (i, k) = lambda_k(mid f_i)
    Eigen::MatrixXd bhat1;                            // J x 3: mean of phi_j lambda_k
    std::array<Eigen::MatrixXd, 3> bhat2;             // [k] J x 6: mean of phi_j d_k rho_r
    std::vector<std::array<double, 3>> nodes;

    std::vector<std::array<CompiledCombo, 3>> grad;
    std::vector<std::array<std::array<CompiledCombo, 3>, 3>> hess;

    double R(int r, int s, int i, int j, int k, int l) const {
        return Rhat[((((r * 6 + s) * 3 + i) * 3 + j) * 3 + k) * 3 + l];
    }
    double M(int r, int s, int i, int j, int k, int l) const {
        return Mhat[((((r * 6 + s) * 2 + i) * 3 + j) * 3 + k) * 3 + l];
    }
};

std::vector<RatCombo> guzman_neilan_potentials();
GuzmanNeilanTables build_guzman_neilan_tables(int lagrange_degree, MemoCache* cache);
const GuzmanNeilanTables& guzman_neilan_tables(int lagrange_degree = 1);

using Vec12 = Eigen::Matrix<double, 12, 1>;

struct GNLocal {
    Mat12 A;
    Vec12 B;
};

GNLocal local_matrices(const ElementGeometry& g, const GuzmanNeilanTables& tab);
GNLocal local_matrices_gauss(const ElementGeometry& g, const GuzmanNeilanTables& tab, int n);

Mat12 local_vandermonde_gn(const ElementGeometry& g, const GuzmanNeilanTables& tab);
Eigen::Matrix<double, 12, 9> reduce_to_Vred(const Mat12& V, const ElementGeometry& g);
Eigen::MatrixXd guzman_neilan_coefficients(const ElementGeometry& g, const GuzmanNeilanTables& tab, Variant v);

// Values, gradients ((i,a) = d_a v_i) and divergences of the 12 raw velocity
// basis functions at a non-vertex point.
struct GNPointValues {
    Eigen::Matrix<double, 2, 12> val;
    std::array<Eigen::Matrix2d, 12> grad;
    Vec12 div;
};
GNPointValues gn_point_values(const ElementGeometry& g, const GuzmanNeilanTables& tab, const std::array<double, 3>& lam);

DofMap guzman_neilan_dofmap(const Triangulation& t, Variant v);

using VectorField = std::function<Eigen::Vector2d(double, double)>;

struct StokesSystem {
    SparseSym A;         // velocity stiffness (quadrature as requested)
    SparseSym A_exact;   // exact stiffness, used to measure errors
    SparseSym B;         // ndof x #elements, B(r, e) = int_T div of shape r
    SparseSym B_exact;
    Eigen::VectorXd b;
    DofMap dofs;
    std::vector<double> area;
};

StokesSystem assemble_stokes(const Triangulation& t, const VectorField& f, Variant v, QuadratureMode q = {},
                             int lagrange_degree = 1);

struct StokesSolution {
    Eigen::VectorXd u;  // all velocity dofs (zeros on the boundary)
    Eigen::VectorXd p;  // element values, zero mean
};

// Pins the pressure on element 0, solves, then shifts p to zero mean.
StokesSolution solve_stokes(const StokesSystem& sys);

// |grad u_h| in L2 with the exact stiffness; assumes exact velocity 0.
double velocity_gradient_norm(const StokesSystem& sys, const Eigen::VectorXd& u);
// ||div u_h||_{L2}, from the exact divergence table.
double divergence_norm(const StokesSystem& sys, const Eigen::VectorXd& u);
// ||p - p_h||_{L2} by a Gauss rule exact for polynomial p of degree <= 5.
double pressure_error(const Triangulation& t, const Eigen::VectorXd& p_h, const ScalarField& p);

}  // namespace ratfe
