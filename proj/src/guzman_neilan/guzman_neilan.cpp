#include "ratfe/guzman_neilan.hpp"

#include "ratfe/errors.hpp"
#include "ratfe/solvers.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace ratfe {

std::vector<RatCombo> guzman_neilan_potentials() {
    const auto L = [](int j) { return RatCombo::lambda(j); };
    std::vector<RatCombo> rho{
        L(0) * L(0) * L(1) - L(1) * L(1) * L(0),
        L(1) * L(1) * L(2) - L(2) * L(2) * L(1),
        L(2) * L(2) * L(0) - L(0) * L(0) * L(2),
    };
    for (int j = 0; j < 3; ++j) rho.push_back(rational_bubble(j));
    return rho;
}

namespace {

// Components of the affine velocity basis b_r = lambda_r e1, lambda_{r-3} e2.
RatCombo affine_component(int r, int i) {
    if ((r < 3 && i == 0) || (r >= 3 && i == 1)) return RatCombo::lambda(r % 3);
    return {};
}

Eigen::Matrix<double, 3, 6> grad_table(const std::vector<RatCombo>& rho, const BaryPoint& p) {
    Eigen::Matrix<double, 3, 6> T;
    for (int s = 0; s < 6; ++s) {
        const auto g = grad_lambda(rho[s]);
        for (int k = 0; k < 3; ++k) T(k, s) = evaluate(g[k], p).to_double();
    }
    return T;
}

}  // namespace

GuzmanNeilanTables build_guzman_neilan_tables(int lagrange_degree, MemoCache* cache) {
    GuzmanNeilanTables tab;
    tab.lagrange_degree = lagrange_degree;
    tab.rho = guzman_neilan_potentials();

    const std::vector<RatCombo> H = hessian_family(tab.rho);
    const Eigen::MatrixXd P = moment_matrix_sym(H, cache);
    tab.Rhat.resize(6 * 6 * 81);
    for (int r = 0; r < 6; ++r)
        for (int s = 0; s < 6; ++s)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l)
                            tab.Rhat[((((r * 6 + s) * 3 + i) * 3 + j) * 3 + k) * 3 + l] =
                                P(r * 9 + 3 * i + k, s * 9 + 3 * j + l);

    // d_k (b_r)_i for the affine part, flattened as (r, i, k).
    std::vector<RatCombo> Db;
    for (int r = 0; r < 6; ++r)
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 3; ++k) Db.push_back(diff_lambda(affine_component(r, i), k));
    const Eigen::MatrixXd Q = moment_matrix(Db, H, cache);
    tab.Mhat.resize(6 * 6 * 2 * 27);
    for (int r = 0; r < 6; ++r)
        for (int s = 0; s < 6; ++s)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l)
                            tab.Mhat[((((r * 6 + s) * 2 + i) * 3 + j) * 3 + k) * 3 + l] =
                                Q((r * 2 + i) * 3 + k, s * 9 + 3 * j + l);

    for (int i = 0; i < 3; ++i) {
        tab.T_gv[i] = grad_table(tab.rho, BaryPoint::vertex(i));
        tab.T_ge[i] = grad_table(tab.rho, BaryPoint::edge_midpoint(i));
        for (int k = 0; k < 3; ++k)
            tab.val_mid(i, k) = evaluate(RatCombo::lambda(k), BaryPoint::edge_midpoint(i)).to_double();
    }

    const std::vector<RatCombo> lam{RatCombo::lambda(0), RatCombo::lambda(1), RatCombo::lambda(2)};
    tab.bhat1 = rhs_moments(lagrange_degree, lam, cache);
    for (int k = 0; k < 3; ++k) {
        std::vector<RatCombo> d;
        for (const auto& r : tab.rho) d.push_back(diff_lambda(r, k));
        tab.bhat2[k] = rhs_moments(lagrange_degree, d, cache);
    }
    tab.nodes = lagrange_nodes(lagrange_degree);

    for (const auto& r : tab.rho) {
        const auto g = grad_lambda(r);
        tab.grad.push_back({CompiledCombo(g[0]), CompiledCombo(g[1]), CompiledCombo(g[2])});
        const auto h = hessian_lambda(r);
        std::array<std::array<CompiledCombo, 3>, 3> hc;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) hc[i][j] = CompiledCombo(h[i][j]);
        tab.hess.push_back(hc);
    }
    return tab;
}

const GuzmanNeilanTables& guzman_neilan_tables(int lagrange_degree) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GuzmanNeilanTables>> built;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = built[lagrange_degree];
    if (!slot)
        slot = std::make_unique<GuzmanNeilanTables>(build_guzman_neilan_tables(lagrange_degree, &global_cache()));
    return *slot;
}

GNLocal local_matrices(const ElementGeometry& g, const GuzmanNeilanTables& tab) {
    const Eigen::Matrix3d GG = g.G * g.G.transpose();
    const Eigen::Matrix<double, 2, 3> W = rotation_R() * g.G.transpose();
    GNLocal out;
    out.A.setZero();
    out.A.block<3, 3>(0, 0) = g.area * GG;
    out.A.block<3, 3>(3, 3) = g.area * GG;
    for (int r = 0; r < 6; ++r)
        for (int s = r; s < 6; ++s) {
            double sum = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l) sum += tab.R(r, s, i, j, k, l) * GG(i, j) * GG(k, l);
            out.A(6 + r, 6 + s) = out.A(6 + s, 6 + r) = g.area * sum;
        }
    for (int r = 0; r < 6; ++r)
        for (int s = 0; s < 6; ++s) {
            double sum = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l) sum += tab.M(r, s, i, j, k, l) * W(i, j) * GG(k, l);
            out.A(r, 6 + s) = out.A(6 + s, r) = g.area * sum;
        }
    out.B.setZero();
    for (int r = 0; r < 3; ++r) {
        out.B(r) = g.area * g.G(r, 0);
        out.B(3 + r) = g.area * g.G(r, 1);
    }
    return out;
}

GNPointValues gn_point_values(const ElementGeometry& g, const GuzmanNeilanTables& tab, const std::array<double, 3>& lam) {
    GNPointValues pv;
    pv.val.setZero();
    const Eigen::Matrix2d R = rotation_R();
    for (int r = 0; r < 3; ++r) {
        pv.val(0, r) = lam[r];
        pv.val(1, 3 + r) = lam[r];
        pv.grad[r].setZero();
        pv.grad[r].row(0) = g.G.row(r);
        pv.grad[3 + r].setZero();
        pv.grad[3 + r].row(1) = g.G.row(r);
    }
    for (int s = 0; s < 6; ++s) {
        Eigen::Vector3d gl;
        Eigen::Matrix3d hl;
        for (int i = 0; i < 3; ++i) {
            gl(i) = tab.grad[s][i](lam);
            for (int j = 0; j < 3; ++j) hl(i, j) = tab.hess[s][i][j](lam);
        }
        pv.val.col(6 + s) = R * to_physical_grad(g.G, gl);
        pv.grad[6 + s] = R * to_physical_hess(g.G, hl);
    }
    for (int r = 0; r < 12; ++r) pv.div(r) = pv.grad[r].trace();
    return pv;
}

namespace {

struct GNGaussData {
    GaussRule2D rule;
    std::vector<std::array<double, 3>> lam;
};

const GNGaussData& gn_gauss_data(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GNGaussData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<GNGaussData>();
        slot->rule = gauss_rule(n);
        for (const auto& p : slot->rule.points) slot->lam.push_back({1.0 - p[0] - p[1], p[0], p[1]});
    }
    return *slot;
}

}  // namespace

GNLocal local_matrices_gauss(const ElementGeometry& g, const GuzmanNeilanTables& tab, int n) {
    const GNGaussData& d = gn_gauss_data(n);
    GNLocal out;
    out.A.setZero();
    out.B.setZero();
    for (size_t q = 0; q < d.lam.size(); ++q) {
        const GNPointValues pv = gn_point_values(g, tab, d.lam[q]);
        const double w = d.rule.weights[q] * 2.0 * g.area;
        for (int r = 0; r < 12; ++r) {
            for (int s = r; s < 12; ++s) out.A(r, s) += w * pv.grad[r].cwiseProduct(pv.grad[s]).sum();
            out.B(r) += w * pv.div(r);
        }
    }
    for (int r = 0; r < 12; ++r)
        for (int s = 0; s < r; ++s) out.A(r, s) = out.A(s, r);
    return out;
}

Mat12 local_vandermonde_gn(const ElementGeometry& g, const GuzmanNeilanTables& tab) {
    Mat12 V = Mat12::Zero();
    V.block<6, 6>(0, 0).setIdentity();
    for (int i = 0; i < 3; ++i) {
        const Eigen::Vector2d nu = g.side_normal[i], tau = g.side_tangent[i];
        for (int k = 0; k < 3; ++k) {
            const double lk = tab.val_mid(i, k);
            V(6 + i, k) = nu.x() * lk;
            V(6 + i, 3 + k) = nu.y() * lk;
            V(9 + i, k) = tau.x() * lk;
            V(9 + i, 3 + k) = tau.y() * lk;
        }
    }
    const Eigen::Matrix2d R = rotation_R();
    const Eigen::Matrix<double, 2, 3> Gt = g.G.transpose();
    for (int i = 0; i < 3; ++i) {
        const Eigen::Matrix<double, 2, 6> gv = Gt * tab.T_gv[i];
        V.block<1, 6>(i, 6) = gv.row(1);
        V.block<1, 6>(3 + i, 6) = -gv.row(0);
        const Eigen::Matrix<double, 2, 6> curl_mid = R * (Gt * tab.T_ge[i]);
        V.block<1, 6>(6 + i, 6) = g.side_normal[i].transpose() * curl_mid;
        V.block<1, 6>(9 + i, 6) = g.side_tangent[i].transpose() * curl_mid;
    }
    return V;
}

Eigen::Matrix<double, 12, 9> reduce_to_Vred(const Mat12& V, const ElementGeometry& g) {
    Eigen::Matrix<double, 12, 9> red = Eigen::Matrix<double, 12, 9>::Zero();
    red.topRows<9>().setIdentity();
    for (int j = 0; j < 3; ++j) {
        const double d = V(9 + j, 9 + j);
        if (!(std::abs(d) > 1e-14 * V.cwiseAbs().maxCoeff()))
            throw ZeroBubbleTangentialTrace("bubble curl has zero tangential trace");
        const int a = (j + 1) % 3, b = (j + 2) % 3;
        const Eigen::Vector2d tau = g.side_tangent[j];
        Eigen::Matrix<double, 1, 3> gam = V.block<1, 3>(9 + j, 6);
        for (int c = 0; c < 3; ++c) {
            const double va = tau.x() * V(a, 6 + c) + tau.y() * V(3 + a, 6 + c);
            const double vb = tau.x() * V(b, 6 + c) + tau.y() * V(3 + b, 6 + c);
            gam(c) -= 0.5 * (va + vb);
        }
        red.block<1, 3>(9 + j, 6) = -gam / d;
    }
    return red * vandermonde_invert(V.topLeftCorner<9, 9>());
}

Eigen::MatrixXd guzman_neilan_coefficients(const ElementGeometry& g, const GuzmanNeilanTables& tab, Variant v) {
    const Mat12 V = local_vandermonde_gn(g, tab);
    if (v == Variant::Full) return vandermonde_invert(V);
    return reduce_to_Vred(V, g);
}

DofMap guzman_neilan_dofmap(const Triangulation& t, Variant v) {
    const int m = t.num_nodes(), n = t.num_sides();
    DofMap d;
    d.ndof = v == Variant::Full ? 2 * m + 2 * n : 2 * m + n;
    d.fixed.assign(d.ndof, 0);
    for (int k = 0; k < m; ++k)
        if (t.bnd_node[k]) d.fixed[k] = d.fixed[m + k] = 1;
    for (int s = 0; s < n; ++s)
        if (t.bnd_side[s]) {
            d.fixed[2 * m + s] = 1;
            if (v == Variant::Full) d.fixed[2 * m + n + s] = 1;
        }
    for (int e = 0; e < t.num_elements(); ++e) {
        const auto& nd = t.n4e[e];
        const auto& sd = t.s4e[e];
        std::vector<int> l2g{nd[0], nd[1], nd[2], m + nd[0], m + nd[1], m + nd[2], 2 * m + sd[0], 2 * m + sd[1], 2 * m + sd[2]};
        if (v == Variant::Full)
            for (int j = 0; j < 3; ++j) l2g.push_back(2 * m + n + sd[j]);
        d.l2g.push_back(std::move(l2g));
    }
    return d;
}

StokesSystem assemble_stokes(const Triangulation& t, const VectorField& f, Variant v, QuadratureMode q,
                             int lagrange_degree) {
    const GuzmanNeilanTables& tab = guzman_neilan_tables(lagrange_degree);
    StokesSystem sys;
    sys.dofs = guzman_neilan_dofmap(t, v);
    const int nd = sys.dofs.ndof, ne = t.num_elements();
    Assembler A(nd), Aex(nd);
    std::vector<Eigen::Triplet<double>> tB, tBex;
    sys.area.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const ElementGeometry g = element_geometry(t, e);
        sys.area[e] = g.area;
        const Eigen::MatrixXd C = guzman_neilan_coefficients(g, tab, v);
        const auto& l2g = sys.dofs.l2g[e];
        const GNLocal ex = local_matrices(g, tab);
        Vec12 load;
        GNLocal used = ex;
        if (q.exact) {
            const auto J = static_cast<Eigen::Index>(tab.nodes.size());
            Eigen::VectorXd fx(J), fy(J);
            for (Eigen::Index k = 0; k < J; ++k) {
                const auto& l = tab.nodes[static_cast<size_t>(k)];
                const Eigen::Vector2d x = l[0] * g.v[0] + l[1] * g.v[1] + l[2] * g.v[2];
                const Eigen::Vector2d fv = f(x.x(), x.y());
                fx(k) = fv.x();
                fy(k) = fv.y();
            }
            load.head<3>() = tab.bhat1.transpose() * fx;
            load.segment<3>(3) = tab.bhat1.transpose() * fy;
            // mean of phi_j * d_{x_m} rho_r, m = 0, 1
            Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(J, 6), dy = Eigen::MatrixXd::Zero(J, 6);
            for (int k = 0; k < 3; ++k) {
                dx += g.G(k, 0) * tab.bhat2[k];
                dy += g.G(k, 1) * tab.bhat2[k];
            }
            load.tail<6>() = dy.transpose() * fx - dx.transpose() * fy;
            load *= g.area;
        } else {
            used = local_matrices_gauss(g, tab, q.n);
            const GNGaussData& d = gn_gauss_data(q.n);
            load.setZero();
            for (size_t k = 0; k < d.lam.size(); ++k) {
                const auto& l = d.lam[k];
                const Eigen::Vector2d x = l[0] * g.v[0] + l[1] * g.v[1] + l[2] * g.v[2];
                const GNPointValues pv = gn_point_values(g, tab, l);
                load += (d.rule.weights[k] * 2.0 * g.area) * (pv.val.transpose() * f(x.x(), x.y()));
            }
        }
        A.add_matrix(l2g, C.transpose() * used.A * C);
        Aex.add_matrix(l2g, C.transpose() * ex.A * C);
        A.add_vector(l2g, C.transpose() * load);
        const Eigen::VectorXd bu = C.transpose() * used.B, bx = C.transpose() * ex.B;
        for (size_t i = 0; i < l2g.size(); ++i) {
            tB.emplace_back(l2g[i], e, bu(static_cast<Eigen::Index>(i)));
            tBex.emplace_back(l2g[i], e, bx(static_cast<Eigen::Index>(i)));
        }
    }
    sys.A = A.matrix();
    sys.A_exact = Aex.matrix();
    sys.b = A.vector();
    sys.B.resize(nd, ne);
    sys.B.setFromTriplets(tB.begin(), tB.end());
    sys.B_exact.resize(nd, ne);
    sys.B_exact.setFromTriplets(tBex.begin(), tBex.end());
    return sys;
}

StokesSolution solve_stokes(const StokesSystem& sys) {
    const std::vector<int> fr = sys.dofs.free_dofs();
    const int nu = static_cast<int>(fr.size());
    const int ne = static_cast<int>(sys.B.cols());
    std::vector<int> pres;
    for (int e = 1; e < ne; ++e) pres.push_back(e);
    const SparseSym Aff = restrict_matrix(sys.A, fr, fr);
    const SparseSym Bfp = restrict_matrix(sys.B, fr, pres);
    const int np = static_cast<int>(pres.size());

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(Aff.nonZeros() + 2 * Bfp.nonZeros());
    for (int k = 0; k < Aff.outerSize(); ++k)
        for (SparseSym::InnerIterator it(Aff, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < Bfp.outerSize(); ++k)
        for (SparseSym::InnerIterator it(Bfp, k); it; ++it) {
            trip.emplace_back(it.row(), nu + it.col(), -it.value());
            trip.emplace_back(nu + it.col(), it.row(), -it.value());
        }
    SparseSym K(nu + np, nu + np);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + np);
    rhs.head(nu) = restrict_vector(sys.b, fr);

    const Eigen::VectorXd x = sym_indef_solve(K, rhs);
    StokesSolution sol;
    sol.u = Eigen::VectorXd::Zero(sys.dofs.ndof);
    for (int i = 0; i < nu; ++i) sol.u(fr[i]) = x(i);
    sol.p = Eigen::VectorXd::Zero(ne);
    for (int i = 0; i < np; ++i) sol.p(pres[i]) = x(nu + i);
    double mean = 0.0, total = 0.0;
    for (int e = 0; e < ne; ++e) {
        mean += sys.area[e] * sol.p(e);
        total += sys.area[e];
    }
    sol.p.array() -= mean / total;
    return sol;
}

double velocity_gradient_norm(const StokesSystem& sys, const Eigen::VectorXd& u) {
    return std::sqrt(std::max(0.0, u.dot(sys.A_exact * u)));
}

double divergence_norm(const StokesSystem& sys, const Eigen::VectorXd& u) {
    const Eigen::VectorXd d = sys.B_exact.transpose() * u;  // integral of div over each element
    double s = 0.0;
    for (Eigen::Index e = 0; e < d.size(); ++e) s += d(e) * d(e) / sys.area[static_cast<size_t>(e)];
    return std::sqrt(s);
}

double pressure_error(const Triangulation& t, const Eigen::VectorXd& p_h, const ScalarField& p) {
    const GaussRule2D rule = gauss_rule(5);
    double s = 0.0;
    for (int e = 0; e < t.num_elements(); ++e) {
        std::array<std::array<double, 2>, 3> tri;
        for (int k = 0; k < 3; ++k) tri[k] = t.c4n[t.n4e[e][k]];
        const double ph = p_h(e);
        s += gauss_integrate([&](double x, double y) { return std::pow(p(x, y) - ph, 2); }, rule, tri);
    }
    return std::sqrt(s);
}

}  // namespace ratfe
