#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratfe/errors.hpp"
#include "ratfe/zienkiewicz.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace ratfe;

namespace {

const ZienkiewiczTables& tab() { return zienkiewicz_tables(2); }

// Shape-regular random triangle: perturbed equilateral, random scale and rotation.
ElementGeometry random_element(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-0.25, 0.25), sc(0.01, 3.0), ang(0.0, 6.283185307179586), sh(-5, 5);
    const double s = sc(rng), a = ang(rng);
    Eigen::Matrix2d Rot;
    Rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    const Eigen::Vector2d shift(sh(rng), sh(rng));
    std::array<Eigen::Vector2d, 3> v{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0.5, 0.8660254037844386)};
    for (auto& p : v) p = shift + s * Rot * (p + Eigen::Vector2d(u(rng), u(rng)));
    return triangle_geometry(v[0], v[1], v[2]);
}

std::array<double, 3> lam_of(const ElementGeometry& g, const Eigen::Vector2d& x) {
    std::array<double, 3> l;
    for (int i = 0; i < 3; ++i) l[i] = 1.0 + g.G.row(i).dot(x - g.v[i]);
    return l;
}

// Local dof values (Full layout) of a function with known value and gradient.
template <class P, class GP>
Eigen::Matrix<double, 12, 1> local_dofs(const ElementGeometry& g, P p, GP gp) {
    Eigen::Matrix<double, 12, 1> d;
    for (int i = 0; i < 3; ++i) {
        d(i) = p(g.v[i]);
        const Eigen::Vector2d gr = gp(g.v[i]);
        d(3 + i) = gr.x();
        d(6 + i) = gr.y();
        const Eigen::Vector2d mid = 0.5 * (g.v[(i + 1) % 3] + g.v[(i + 2) % 3]);
        d(9 + i) = gp(mid).dot(g.side_normal[i]);
    }
    return d;
}

struct ValGrad {
    double v;
    Eigen::Vector2d g;
};

ValGrad eval_global(const Triangulation& t, Variant var, const Eigen::VectorXd& x, int e, const Eigen::Vector2d& pt) {
    const ElementGeometry g = element_geometry(t, e);
    const Eigen::MatrixXd C = zienkiewicz_coefficients(g, tab(), var);
    const DofMap d = zienkiewicz_dofmap(t, var);
    Eigen::VectorXd loc(C.cols());
    for (Eigen::Index k = 0; k < loc.size(); ++k) loc(k) = x(d.l2g[e][k]);
    const Eigen::VectorXd raw = C * loc;
    const ZienkiewiczPointValues pv = zienkiewicz_point_values(g, tab(), lam_of(g, pt));
    return {pv.val.dot(raw), pv.grad * raw};
}

double sparse_max_abs(const SparseSym& A) {
    double m = 0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseSym::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

}  // namespace

TEST_CASE("local stiffness") {
    std::mt19937 rng(3);
    for (int k = 0; k < 50; ++k) {
        const ElementGeometry g = random_element(rng);
        const Mat12 A = local_stiffness_biharmonic(g, tab());
        // Laplacian of lambda_0^2 is 2 |grad lambda_0|^2.
        const double lap = 2.0 * g.G.row(0).squaredNorm();
        CHECK(A(5, 5) == doctest::Approx(g.area * lap * lap).epsilon(1e-12));
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * A.cwiseAbs().maxCoeff());

        const Eigen::MatrixXd C = zienkiewicz_coefficients(g, tab(), Variant::Full);
        for (int comp = 0; comp < 2; ++comp) {
            const auto d = local_dofs(
                g, [&](const Eigen::Vector2d& x) { return x(comp); },
                [&](const Eigen::Vector2d&) { return Eigen::Vector2d(comp == 0, comp == 1); });
            const Eigen::VectorXd c = C * d;
            CHECK((A * c).cwiseAbs().maxCoeff() <= 1e-10 * A.cwiseAbs().maxCoeff() * c.cwiseAbs().maxCoeff());
        }
    }
    const ElementGeometry ref = triangle_geometry({0, 0}, {1, 0}, {0, 1});
    const Mat12 A = local_stiffness_biharmonic(ref, tab());
    const Eigen::SelfAdjointEigenSolver<Mat12> es(A);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * A.cwiseAbs().maxCoeff());

    const Mat12 M = local_mass_biharmonic(ref, tab());
    CHECK(Eigen::SelfAdjointEigenSolver<Mat12>(M).eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("Gauss stiffness converges to the exact one") {
    const ElementGeometry g = triangle_geometry({0.1, 0.2}, {1.3, 0.1}, {0.4, 1.1});
    const Mat12 A = local_stiffness_biharmonic(g, tab());
    double prev = 1e300;
    for (int n : {2, 4, 8, 16}) {
        const double err = (local_stiffness_biharmonic_gauss(g, tab(), n) - A).cwiseAbs().maxCoeff();
        CHECK(err < prev);
        prev = err;
    }
    // Polynomial block is integrated exactly once n is large enough.
    CHECK((local_stiffness_biharmonic_gauss(g, tab(), 3) - A).topLeftCorner<9, 9>().cwiseAbs().maxCoeff() <=
          1e-11 * A.cwiseAbs().maxCoeff());
}

TEST_CASE("local Vandermonde") {
    std::mt19937 rng(5);
    for (int k = 0; k < 20; ++k) {
        const ElementGeometry g = random_element(rng);
        const Mat12 V = local_vandermonde(g, tab());
        CHECK(V(0, 5) == 1.0);
        CHECK(V(1, 5) == 0.0);
        CHECK(V(2, 5) == 0.0);
        for (int j = 0; j < 3; ++j)
            for (int kk = 0; kk < 3; ++kk) {
                if (j != kk) CHECK(std::abs(V(9 + j, 9 + kk)) <= 1e-14 * V.cwiseAbs().maxCoeff());
            }
        for (int j = 0; j < 3; ++j) CHECK(std::abs(V(9 + j, 9 + j)) > 0.0);
        CHECK(V.block<9, 3>(0, 9).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("unisolvence and P2 reproduction on random elements") {
    std::mt19937 rng(200);
    std::uniform_real_distribution<double> c(-1, 1), w(0.0, 1.0);
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
        const ElementGeometry g = random_element(rng);
        const Eigen::MatrixXd C = zienkiewicz_coefficients(g, tab(), Variant::Full);
        // p = a0 + a1 x + a2 y + a3 x^2 + a4 xy + a5 y^2 in coordinates centered at mid.
        std::array<double, 6> a;
        for (auto& x : a) x = c(rng);
        const Eigen::Vector2d o = g.mid();
        auto p = [&](const Eigen::Vector2d& x) {
            const Eigen::Vector2d z = x - o;
            return a[0] + a[1] * z.x() + a[2] * z.y() + a[3] * z.x() * z.x() + a[4] * z.x() * z.y() + a[5] * z.y() * z.y();
        };
        auto gp = [&](const Eigen::Vector2d& x) {
            const Eigen::Vector2d z = x - o;
            return Eigen::Vector2d(a[1] + 2 * a[3] * z.x() + a[4] * z.y(), a[2] + a[4] * z.x() + 2 * a[5] * z.y());
        };
        const Eigen::VectorXd raw = C * local_dofs(g, p, gp);
        double scale = 0;
        for (int q = 0; q < 20; ++q) {
            double l1 = w(rng), l2 = w(rng);
            if (l1 + l2 > 1) {
                l1 = 1 - l1;
                l2 = 1 - l2;
            }
            const std::array<double, 3> lam{1 - l1 - l2, l1, l2};
            const Eigen::Vector2d x = lam[0] * g.v[0] + lam[1] * g.v[1] + lam[2] * g.v[2];
            const ZienkiewiczPointValues pv = zienkiewicz_point_values(g, tab(), lam);
            worst = std::max(worst, std::abs(pv.val.dot(raw) - p(x)));
            scale = std::max(scale, std::abs(p(x)));
        }
        (void)scale;
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("bubble gradient on its own edge") {
    std::mt19937 rng(7);
    for (int k = 0; k < 20; ++k) {
        const ElementGeometry g = random_element(rng);
        for (int j = 0; j < 3; ++j) {
            const int a = (j + 1) % 3, b = (j + 2) % 3;
            for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                std::array<double, 3> lam{};
                lam[a] = s;
                lam[b] = 1 - s;
                const ZienkiewiczPointValues pv = zienkiewicz_point_values(g, tab(), lam);
                const Eigen::Vector2d grad = pv.grad.col(9 + j);
                const double scale = g.G.row(j).norm();
                CHECK(std::abs(grad.dot(g.tangent[j])) <= 1e-10 * scale);
                CHECK(grad.dot(g.normal[j]) == doctest::Approx(-scale * lam[a] * lam[b]).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("reduced element") {
    std::mt19937 rng(11);
    for (int k = 0; k < 30; ++k) {
        const ElementGeometry g = random_element(rng);
        const Mat12 V = local_vandermonde(g, tab());
        const Eigen::Matrix<double, 12, 9> C = reduce_to_Zred(V, g);
        const Eigen::MatrixXd VC = V * C;
        // First nine functionals keep their delta property.
        CHECK((VC.topRows(9) - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-10);
        // Midpoint normal derivative is the mean of the endpoint normal derivatives.
        for (int j = 0; j < 3; ++j) {
            const int a = (j + 1) % 3, b = (j + 2) % 3;
            const Eigen::Vector2d nu = g.side_normal[j];
            for (int m = 0; m < 9; ++m) {
                const double ga = nu.x() * VC(3 + a, m) + nu.y() * VC(6 + a, m);
                const double gb = nu.x() * VC(3 + b, m) + nu.y() * VC(6 + b, m);
                CHECK(std::abs(VC(9 + j, m) - 0.5 * (ga + gb)) <= 1e-10 * (1.0 + std::abs(VC(9 + j, m))));
            }
        }
        // Quadratic raw functions need no bubble correction.
        const Eigen::MatrixXd Vinv9 = vandermonde_invert(V.topLeftCorner<9, 9>());
        const Eigen::MatrixXd corr = C.bottomRows(3) * V.topLeftCorner<9, 9>();
        CHECK(corr.leftCols(6).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + Vinv9.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("global matrices") {
    const Triangulation t = refine_uniform(refine_uniform(unit_square_mesh()));
    for (Variant v : {Variant::Full, Variant::Reduced}) {
        const BiharmonicSystem sys = assemble_biharmonic(t, [](double, double) { return 1.0; }, v);
        CHECK(sys.dofs.ndof == (v == Variant::Full ? 3 * t.num_nodes() + t.num_sides() : 3 * t.num_nodes()));
        const Eigen::MatrixXd A = Eigen::MatrixXd(sys.A);
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * A.cwiseAbs().maxCoeff());

        const std::vector<int> fr = sys.dofs.free_dofs();
        const Eigen::MatrixXd Af = Eigen::MatrixXd(restrict_matrix(sys.A, fr, fr));
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Af).eigenvalues().minCoeff() > 0.0);

        const Eigen::VectorXd one = zienkiewicz_interpolate(
            t, v, [](double, double) { return 1.0; }, [](double, double) { return Eigen::Vector2d(0, 0); });
        const Eigen::VectorXd xx = zienkiewicz_interpolate(
            t, v, [](double x, double) { return x; }, [](double, double) { return Eigen::Vector2d(1, 0); });
        const double amax = sparse_max_abs(sys.A);
        CHECK((sys.A * one).cwiseAbs().maxCoeff() <= 1e-9 * amax);
        CHECK((sys.A * xx).cwiseAbs().maxCoeff() <= 1e-9 * amax);
    }
}

TEST_CASE("global functions are C1 across a shared edge") {
    const Triangulation t = make_triangulation({{0, 0}, {1, 0.1}, {0.2, 1}, {1.1, 1.2}}, {{{0, 1, 2}}, {{3, 2, 1}}});
    REQUIRE(t.num_elements() == 2);
    for (Variant v : {Variant::Full, Variant::Reduced}) {
        const DofMap d = zienkiewicz_dofmap(t, v);
        for (int k = 0; k < d.ndof; ++k) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(d.ndof);
            x(k) = 1.0;
            const Eigen::Vector2d p(t.c4n[1][0], t.c4n[1][1]), q(t.c4n[2][0], t.c4n[2][1]);
            for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const Eigen::Vector2d pt = (1 - s) * p + s * q;
                const ValGrad a = eval_global(t, v, x, 0, pt), b = eval_global(t, v, x, 1, pt);
                CHECK(std::abs(a.v - b.v) <= 1e-10);
                CHECK((a.g - b.g).norm() <= 1e-10);
            }
        }
    }
}

TEST_CASE("reduced solutions have affine normal derivatives on every edge") {
    const Triangulation t = refine_uniform(refine_uniform(unit_square_mesh()));
    const BiharmonicSystem sys =
        assemble_biharmonic(t, [](double x, double y) { return 1.0 + x * y; }, Variant::Reduced);
    const std::vector<int> fr = sys.dofs.free_dofs();
    const Eigen::VectorXd uf = spd_solve(restrict_matrix(sys.A, fr, fr), restrict_vector(sys.b, fr));
    Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.dofs.ndof);
    for (size_t i = 0; i < fr.size(); ++i) u(fr[i]) = uf(static_cast<Eigen::Index>(i));
    const int m = t.num_nodes();
    double scale = u.cwiseAbs().maxCoeff();
    for (int e = 0; e < t.num_elements(); ++e)
        for (int j = 0; j < 3; ++j) {
            const int s = t.s4e[e][j];
            const int a = t.n4s[s][0], b = t.n4s[s][1];
            const Eigen::Vector2d nu = t.side_normal(s);
            const Eigen::Vector2d mid(0.5 * (t.c4n[a][0] + t.c4n[b][0]), 0.5 * (t.c4n[a][1] + t.c4n[b][1]));
            const double dm = eval_global(t, Variant::Reduced, u, e, mid).g.dot(nu);
            const double da = nu.x() * u(m + a) + nu.y() * u(2 * m + a);
            const double db = nu.x() * u(m + b) + nu.y() * u(2 * m + b);
            CHECK(std::abs(dm - 0.5 * (da + db)) <= 1e-10 * scale);
        }
}

TEST_CASE("biharmonic eigenvalues") {
    const Triangulation t1 = refine_uniform(unit_square_mesh());
    const BiharmonicSystem s1 = assemble_biharmonic(t1, [](double, double) { return 0.0; }, Variant::Full);
    const EigenPair self = solve_biharmonic_eigen(s1.M, s1.M, s1.dofs);
    CHECK(self.lambda == doctest::Approx(1.0).epsilon(1e-10));

    double prev = 1e300;
    Triangulation t = unit_square_mesh();
    for (int level = 1; level <= 4; ++level) {
        t = refine_uniform(t);
        const BiharmonicSystem s = assemble_biharmonic(t, [](double, double) { return 0.0; }, Variant::Full);
        const EigenPair p = solve_biharmonic_eigen(s.A, s.M, s.dofs, 1e-12);
        CHECK(p.lambda <= prev + 1e-8);
        // Conforming approximation from above; the clamped-plate value is about 1294.93.
        CHECK(p.lambda > 1294.0);
        CHECK(p.x.dot(s.M * p.x) == doctest::Approx(1.0).epsilon(1e-10));
        prev = p.lambda;
    }
}

TEST_CASE("quadrature mode and variant parsing") {
    CHECK(QuadratureMode::parse("exact").exact);
    const QuadratureMode g = QuadratureMode::parse("gauss:7");
    CHECK_FALSE(g.exact);
    CHECK(g.n == 7);
    CHECK(g.str() == "gauss:7");
    CHECK_THROWS_AS(QuadratureMode::parse("gauss:0"), ConfigError);
    CHECK_THROWS_AS(QuadratureMode::parse("simpson"), ConfigError);
    CHECK(parse_variant("reduced") == Variant::Reduced);
    CHECK(variant_name(Variant::Full) == "full");
    CHECK_THROWS_AS(parse_variant("half"), ConfigError);
}
