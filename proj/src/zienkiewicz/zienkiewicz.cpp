#include "ratfe/zienkiewicz.hpp"

#include "ratfe/errors.hpp"

#include <mutex>
#include <regex>

namespace ratfe {

QuadratureMode QuadratureMode::parse(const std::string& s) {
    if (s == "exact") return {};
    static const std::regex re(R"(gauss:(\d+))");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw ConfigError("quadrature must be 'exact' or 'gauss:N', got '" + s + "'");
    const int n = std::stoi(m[1].str());
    if (n < 1 || n > 64) throw ConfigError("gauss:N needs 1 <= N <= 64");
    return {false, n};
}

std::string QuadratureMode::str() const { return exact ? "exact" : "gauss:" + std::to_string(n); }

Variant parse_variant(const std::string& s) {
    if (s == "full") return Variant::Full;
    if (s == "reduced") return Variant::Reduced;
    throw ConfigError("variant must be 'full' or 'reduced', got '" + s + "'");
}

std::string variant_name(Variant v) { return v == Variant::Full ? "full" : "reduced"; }

std::vector<RatCombo> zienkiewicz_basis() {
    const auto L = [](int j) { return RatCombo::lambda(j); };
    std::vector<RatCombo> b{
        L(2) * L(2), L(1) * L(2), L(1) * L(1), L(0) * L(2), L(0) * L(1), L(0) * L(0),
        L(0) * L(0) * L(1) - L(0) * L(1) * L(1),
        L(1) * L(1) * L(2) - L(1) * L(2) * L(2),
        L(2) * L(2) * L(0) - L(2) * L(0) * L(0),
    };
    for (int j = 0; j < 3; ++j) b.push_back(rational_bubble(j));
    return b;
}

namespace {

Eigen::Matrix<double, 3, 12> eval_table(const std::vector<RatCombo>& f, const BaryPoint& p) {
    Eigen::Matrix<double, 3, 12> T;
    for (int j = 0; j < 12; ++j) {
        const auto g = grad_lambda(f[j]);
        for (int k = 0; k < 3; ++k) T(k, j) = evaluate(g[k], p).to_double();
    }
    return T;
}

}  // namespace

ZienkiewiczTables build_zienkiewicz_tables(int lagrange_degree, MemoCache* cache) {
    ZienkiewiczTables tab;
    tab.lagrange_degree = lagrange_degree;
    tab.basis = zienkiewicz_basis();

    const std::vector<RatCombo> H = hessian_family(tab.basis);
    const Eigen::MatrixXd P = moment_matrix_sym(H, cache);
    tab.Ahat.resize(12 * 12 * 81);
    for (int r = 0; r < 12; ++r)
        for (int s = 0; s < 12; ++s)
            for (int ij = 0; ij < 9; ++ij)
                for (int kl = 0; kl < 9; ++kl)
                    tab.Ahat[((r * 12 + s) * 9 + ij) * 9 + kl] = P(r * 9 + ij, s * 9 + kl);

    tab.mass = moment_matrix_sym(tab.basis, cache);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 12; ++j) tab.T_v(i, j) = evaluate(tab.basis[j], BaryPoint::vertex(i)).to_double();
        tab.T_gv[i] = eval_table(tab.basis, BaryPoint::vertex(i));
        tab.T_ge[i] = eval_table(tab.basis, BaryPoint::edge_midpoint(i));
    }
    tab.bhat = rhs_moments(lagrange_degree, tab.basis, cache);
    tab.nodes = lagrange_nodes(lagrange_degree);

    for (const auto& b : tab.basis) {
        tab.val.emplace_back(b);
        const auto g = grad_lambda(b);
        tab.grad.push_back({CompiledCombo(g[0]), CompiledCombo(g[1]), CompiledCombo(g[2])});
        const auto h = hessian_lambda(b);
        std::array<std::array<CompiledCombo, 3>, 3> hc;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) hc[i][j] = CompiledCombo(h[i][j]);
        tab.hess.push_back(hc);
    }
    return tab;
}

const ZienkiewiczTables& zienkiewicz_tables(int lagrange_degree) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<ZienkiewiczTables>> built;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = built[lagrange_degree];
    if (!slot) slot = std::make_unique<ZienkiewiczTables>(build_zienkiewicz_tables(lagrange_degree, &global_cache()));
    return *slot;
}

Mat12 local_stiffness_biharmonic(const ElementGeometry& g, const ZienkiewiczTables& tab) {
    const Eigen::Matrix3d GG = g.G * g.G.transpose();
    double q[9];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q[3 * i + j] = GG(i, j);
    Mat12 A;
    for (int r = 0; r < 12; ++r)
        for (int s = r; s < 12; ++s) {
            const double* a = &tab.Ahat[(r * 12 + s) * 81];
            double sum = 0.0;
            for (int ij = 0; ij < 9; ++ij) {
                double inner = 0.0;
                for (int kl = 0; kl < 9; ++kl) inner += a[ij * 9 + kl] * q[kl];
                sum += q[ij] * inner;
            }
            A(r, s) = A(s, r) = g.area * sum;
        }
    return A;
}

Mat12 local_mass_biharmonic(const ElementGeometry& g, const ZienkiewiczTables& tab) { return g.area * tab.mass; }

namespace {

// Basis values and lambda-Hessians at the nodes of one Gauss rule.
struct ZGaussData {
    GaussRule2D rule;
    std::vector<Eigen::Matrix<double, 12, 1>> val;
    std::vector<std::array<Eigen::Matrix3d, 12>> hess;
};

const ZGaussData& z_gauss_data(const ZienkiewiczTables& tab, int n) {
    static std::mutex mu;
    static std::map<std::pair<const ZienkiewiczTables*, int>, std::unique_ptr<ZGaussData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{&tab, n}];
    if (slot) return *slot;
    auto d = std::make_unique<ZGaussData>();
    d->rule = gauss_rule(n);
    for (const auto& p : d->rule.points) {
        const std::array<double, 3> lam{1.0 - p[0] - p[1], p[0], p[1]};
        Eigen::Matrix<double, 12, 1> v;
        std::array<Eigen::Matrix3d, 12> h;
        for (int r = 0; r < 12; ++r) {
            v(r) = tab.val[r](lam);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) h[r](i, j) = tab.hess[r][i][j](lam);
        }
        d->val.push_back(v);
        d->hess.push_back(h);
    }
    slot = std::move(d);
    return *slot;
}

}  // namespace

Mat12 local_stiffness_biharmonic_gauss(const ElementGeometry& g, const ZienkiewiczTables& tab, int n) {
    const ZGaussData& d = z_gauss_data(tab, n);
    const Eigen::Matrix3d GG = g.G * g.G.transpose();
    Mat12 A = Mat12::Zero();
    for (size_t q = 0; q < d.rule.points.size(); ++q) {
        Eigen::Matrix<double, 12, 1> lap;
        for (int r = 0; r < 12; ++r) lap(r) = (d.hess[q][r].cwiseProduct(GG)).sum();
        A += (d.rule.weights[q] * 2.0 * g.area) * lap * lap.transpose();
    }
    return A;
}

Mat12 local_mass_biharmonic_gauss(const ElementGeometry& g, const ZienkiewiczTables& tab, int n) {
    const ZGaussData& d = z_gauss_data(tab, n);
    Mat12 M = Mat12::Zero();
    for (size_t q = 0; q < d.rule.points.size(); ++q)
        M += (d.rule.weights[q] * 2.0 * g.area) * d.val[q] * d.val[q].transpose();
    return M;
}

Mat12 local_vandermonde(const ElementGeometry& g, const ZienkiewiczTables& tab) {
    Mat12 V;
    const Eigen::Matrix<double, 2, 3> Gt = g.G.transpose();
    V.topRows<3>() = tab.T_v;
    for (int i = 0; i < 3; ++i) {
        const Eigen::Matrix<double, 2, 12> gv = Gt * tab.T_gv[i];
        V.row(3 + i) = gv.row(0);
        V.row(6 + i) = gv.row(1);
        const Eigen::Matrix<double, 2, 12> ge = Gt * tab.T_ge[i];
        V.row(9 + i) = g.side_normal[i].transpose() * ge;
    }
    return V;
}

Eigen::Matrix<double, 12, 9> reduce_to_Zred(const Mat12& V, const ElementGeometry& g) {
    Eigen::Matrix<double, 12, 9> red = Eigen::Matrix<double, 12, 9>::Zero();
    red.topRows<9>().setIdentity();
    for (int j = 0; j < 3; ++j) {
        const double d = V(9 + j, 9 + j);
        if (!(std::abs(d) > 1e-14 * V.cwiseAbs().maxCoeff())) throw ZeroBubbleNormalDerivative("zero bubble normal derivative");
        const int a = (j + 1) % 3, b = (j + 2) % 3;
        const Eigen::Vector2d nu = g.side_normal[j];
        // gradient rows at vertex a are (3+a, 6+a)
        Eigen::Matrix<double, 1, 3> gam = V.block<1, 3>(9 + j, 6);
        for (int c = 0; c < 3; ++c) {
            const double ga = nu.x() * V(3 + a, 6 + c) + nu.y() * V(6 + a, 6 + c);
            const double gb = nu.x() * V(3 + b, 6 + c) + nu.y() * V(6 + b, 6 + c);
            gam(c) -= 0.5 * (ga + gb);
        }
        red.block<1, 3>(9 + j, 6) = -gam / d;
    }
    const Eigen::MatrixXd Vinv9 = vandermonde_invert(V.topLeftCorner<9, 9>());
    return red * Vinv9;
}

Eigen::MatrixXd zienkiewicz_coefficients(const ElementGeometry& g, const ZienkiewiczTables& tab, Variant v) {
    const Mat12 V = local_vandermonde(g, tab);
    if (v == Variant::Full) return vandermonde_invert(V);
    return reduce_to_Zred(V, g);
}

ZienkiewiczPointValues zienkiewicz_point_values(const ElementGeometry& g, const ZienkiewiczTables& tab,
                                                const std::array<double, 3>& lam) {
    ZienkiewiczPointValues pv;
    for (int r = 0; r < 12; ++r) {
        pv.val(r) = tab.val[r](lam);
        Eigen::Vector3d gl;
        Eigen::Matrix3d hl;
        for (int i = 0; i < 3; ++i) {
            gl(i) = tab.grad[r][i](lam);
            for (int j = 0; j < 3; ++j) hl(i, j) = tab.hess[r][i][j](lam);
        }
        pv.grad.col(r) = to_physical_grad(g.G, gl);
        pv.hess[r] = to_physical_hess(g.G, hl);
    }
    return pv;
}

DofMap zienkiewicz_dofmap(const Triangulation& t, Variant v) {
    const int m = t.num_nodes(), n = t.num_sides();
    DofMap d;
    d.ndof = v == Variant::Full ? 3 * m + n : 3 * m;
    d.fixed.assign(d.ndof, 0);
    for (int k = 0; k < m; ++k)
        if (t.bnd_node[k]) d.fixed[k] = d.fixed[m + k] = d.fixed[2 * m + k] = 1;
    if (v == Variant::Full)
        for (int s = 0; s < n; ++s)
            if (t.bnd_side[s]) d.fixed[3 * m + s] = 1;
    for (int e = 0; e < t.num_elements(); ++e) {
        const auto& nd = t.n4e[e];
        std::vector<int> l2g{nd[0], nd[1], nd[2], m + nd[0], m + nd[1], m + nd[2], 2 * m + nd[0], 2 * m + nd[1], 2 * m + nd[2]};
        if (v == Variant::Full)
            for (int j = 0; j < 3; ++j) l2g.push_back(3 * m + t.s4e[e][j]);
        d.l2g.push_back(std::move(l2g));
    }
    return d;
}

BiharmonicSystem assemble_biharmonic(const Triangulation& t, const ScalarField& f, Variant v, QuadratureMode q,
                                     int lagrange_degree) {
    const ZienkiewiczTables& tab = zienkiewicz_tables(lagrange_degree);
    BiharmonicSystem sys;
    sys.dofs = zienkiewicz_dofmap(t, v);
    Assembler A(sys.dofs.ndof), M(sys.dofs.ndof);
    const GaussRule2D rule = q.exact ? GaussRule2D{} : gauss_rule(q.n);
    for (int e = 0; e < t.num_elements(); ++e) {
        const ElementGeometry g = element_geometry(t, e);
        const Eigen::MatrixXd C = zienkiewicz_coefficients(g, tab, v);
        Mat12 At, Mt;
        Eigen::Matrix<double, 12, 1> load;
        if (q.exact) {
            At = local_stiffness_biharmonic(g, tab);
            Mt = local_mass_biharmonic(g, tab);
            Eigen::VectorXd fn(tab.nodes.size());
            for (size_t k = 0; k < tab.nodes.size(); ++k) {
                const auto& l = tab.nodes[k];
                const Eigen::Vector2d x = l[0] * g.v[0] + l[1] * g.v[1] + l[2] * g.v[2];
                fn(static_cast<Eigen::Index>(k)) = f(x.x(), x.y());
            }
            load = g.area * (tab.bhat.transpose() * fn);
        } else {
            At = local_stiffness_biharmonic_gauss(g, tab, q.n);
            Mt = local_mass_biharmonic_gauss(g, tab, q.n);
            const ZGaussData& d = z_gauss_data(tab, q.n);
            load.setZero();
            for (size_t k = 0; k < rule.points.size(); ++k) {
                const auto& p = rule.points[k];
                const Eigen::Vector2d x = g.v[0] + g.DF * Eigen::Vector2d(p[0], p[1]);
                load += (rule.weights[k] * 2.0 * g.area * f(x.x(), x.y())) * d.val[k];
            }
        }
        const auto& l2g = sys.dofs.l2g[e];
        A.add_matrix(l2g, C.transpose() * At * C);
        M.add_matrix(l2g, C.transpose() * Mt * C);
        A.add_vector(l2g, C.transpose() * load);
    }
    sys.A = A.matrix();
    sys.M = M.matrix();
    sys.b = A.vector();
    return sys;
}

Eigen::VectorXd zienkiewicz_interpolate(const Triangulation& t, Variant v, const ScalarField& p,
                                        const std::function<Eigen::Vector2d(double, double)>& grad_p) {
    const int m = t.num_nodes();
    const DofMap d = zienkiewicz_dofmap(t, v);
    Eigen::VectorXd x(d.ndof);
    for (int k = 0; k < m; ++k) {
        const auto& c = t.c4n[k];
        const Eigen::Vector2d gp = grad_p(c[0], c[1]);
        x(k) = p(c[0], c[1]);
        x(m + k) = gp.x();
        x(2 * m + k) = gp.y();
    }
    if (v == Variant::Full)
        for (int s = 0; s < t.num_sides(); ++s) {
            const auto& a = t.c4n[t.n4s[s][0]];
            const auto& b = t.c4n[t.n4s[s][1]];
            x(3 * m + s) = grad_p(0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])).dot(t.side_normal(s));
        }
    return x;
}

EigenPair solve_biharmonic_eigen(const SparseSym& A, const SparseSym& M, const DofMap& dofs, double tol) {
    const std::vector<int> fr = dofs.free_dofs();
    EigenPair ep = gen_eig_smallest(restrict_matrix(A, fr, fr), restrict_matrix(M, fr, fr), tol);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(dofs.ndof);
    for (size_t i = 0; i < fr.size(); ++i) full(fr[i]) = ep.x(static_cast<Eigen::Index>(i));
    ep.x = full;
    return ep;
}

std::array<BigRational, 12> hermite_functional_reference() {
    const auto basis = zienkiewicz_basis();
    // reference vertices and barycenter
    const std::array<std::array<BigRational, 2>, 3> v{{{0, 0}, {1, 0}, {0, 1}}};
    const BigRational third(1, 3);
    std::array<BigRational, 12> out;
    for (int r = 0; r < 12; ++r) {
        BigRational psi = BigRational(6) * evaluate(basis[r], BaryPoint::barycenter());
        const auto gl = grad_lambda(basis[r]);
        for (int k = 0; k < 3; ++k) {
            const BaryPoint vk = BaryPoint::vertex(k);
            psi -= BigRational(2) * evaluate(basis[r], vk);
            const BigRational g0 = evaluate(gl[0], vk), g1 = evaluate(gl[1], vk), g2 = evaluate(gl[2], vk);
            // grad_x = G^T grad_lambda with G = [-1 -1; 1 0; 0 1]
            const BigRational gx = g1 - g0, gy = g2 - g0;
            psi += gx * (v[k][0] - third) + gy * (v[k][1] - third);
        }
        out[r] = psi;
    }
    return out;
}

}  // namespace ratfe
