#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratfe/errors.hpp"
#include "ratfe/mesh.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace ratfe;

namespace {

double signed_area(const Triangulation& t, int e) {
    const auto& n = t.n4e[e];
    const auto &a = t.c4n[n[0]], &b = t.c4n[n[1]], &c = t.c4n[n[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

// Conformity from scratch: every edge of n4e is used once (boundary) or
// twice (interior), no vertex lies in the interior of an edge, orientation is
// positive and the derived tables agree with n4e.
void check_conforming(const Triangulation& t) {
    std::map<std::pair<int, int>, int> count;
    for (int e = 0; e < t.num_elements(); ++e) {
        CHECK(signed_area(t, e) > 0.0);
        for (int j = 0; j < 3; ++j) {
            const int a = t.n4e[e][(j + 1) % 3], b = t.n4e[e][(j + 2) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
            const int s = t.s4e[e][j];
            CHECK(t.n4s[s][0] == std::min(a, b));
            CHECK(t.n4s[s][1] == std::max(a, b));
        }
    }
    CHECK(static_cast<int>(count.size()) == t.num_sides());
    for (const auto& [edge, c] : count) CHECK((c == 1 || c == 2));
    for (int s = 0; s < t.num_sides(); ++s) {
        const bool boundary = count[{t.n4s[s][0], t.n4s[s][1]}] == 1;
        CHECK(static_cast<bool>(t.bnd_side[s]) == boundary);
        CHECK((t.e4s[s][1] < 0) == boundary);
    }
    // Hanging nodes would sit strictly inside some edge.
    for (const auto& [edge, c] : count) {
        if (c != 1) continue;
        const auto &p = t.c4n[edge.first], &q = t.c4n[edge.second];
        for (int v = 0; v < t.num_nodes(); ++v) {
            if (v == edge.first || v == edge.second) continue;
            const auto& x = t.c4n[v];
            const double cross = (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0]);
            const double dot = (x[0] - p[0]) * (q[0] - p[0]) + (x[1] - p[1]) * (q[1] - p[1]);
            const double len2 = (q[0] - p[0]) * (q[0] - p[0]) + (q[1] - p[1]) * (q[1] - p[1]);
            const bool inside = std::abs(cross) < 1e-12 && dot > 1e-12 && dot < len2 - 1e-12;
            CHECK_FALSE(inside);
        }
    }
}

}  // namespace

TEST_CASE("coarse meshes") {
    for (bool cc : {false, true}) {
        const Triangulation sq = unit_square_mesh(cc);
        CHECK(sq.num_nodes() >= 4);
        CHECK(sq.total_area() == doctest::Approx(1.0).epsilon(1e-15));
        check_conforming(sq);
    }
    const Triangulation l = lshape_mesh();
    CHECK(l.num_elements() == 6);
    CHECK(l.total_area() == doctest::Approx(3.0).epsilon(1e-15));
    check_conforming(l);
}

TEST_CASE("refine_uniform") {
    const Triangulation sq = unit_square_mesh(true);
    const Triangulation r = refine_uniform(sq);
    CHECK(r.num_elements() == 16);
    CHECK(r.num_nodes() == sq.num_nodes() + sq.num_sides());
    CHECK(r.total_area() == doctest::Approx(1.0).epsilon(1e-12));
    check_conforming(r);

    Triangulation l = lshape_mesh();
    for (int k = 0; k < 3; ++k) {
        const Triangulation c = refine_uniform(l);
        CHECK(c.num_nodes() == l.num_nodes() + l.num_sides());
        CHECK(c.num_elements() == 4 * l.num_elements());
        // Children are written four per parent.
        for (int e = 0; e < l.num_elements(); ++e)
            for (int k2 = 0; k2 < 4; ++k2)
                CHECK(signed_area(c, 4 * e + k2) == doctest::Approx(signed_area(l, e) / 4).epsilon(1e-12));
        CHECK(c.total_area() == doctest::Approx(3.0).epsilon(1e-12));
        check_conforming(c);
        l = c;
    }
}

TEST_CASE("grading_indicator") {
    // Right isosceles triangle with barycenter (-1/2,-1/2), scaled to area 1/2.
    const double s = std::sqrt(0.5 / 0.375);
    const Triangulation ex = make_triangulation(
        {{-0.5 + s * (-0.5), -0.5 + s * (-0.5)}, {-0.5 + s * 0.5, -0.5 + s * 0.0}, {-0.5 + s * 0.0, -0.5 + s * 0.5}},
        {{{0, 1, 2}}});
    REQUIRE(ex.total_area() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(grading_indicator(ex)[0] == doctest::Approx(2.0 * std::pow(0.5, 5.0 / 7.0)).epsilon(1e-14));

    // Homogeneity under x -> 2x.
    const Triangulation l = refine_uniform(lshape_mesh());
    Triangulation l2 = l;
    for (auto& p : l2.c4n) p = {2 * p[0], 2 * p[1]};
    l2 = make_triangulation(l2.c4n, l2.n4e);
    const auto e1 = grading_indicator(l), e2 = grading_indicator(l2);
    for (size_t k = 0; k < e1.size(); ++k)
        CHECK(e2[k] == doctest::Approx(e1[k] * std::pow(2.0, -2.0) * std::pow(2.0, 10.0 / 7.0)).epsilon(1e-13));

    // Mirror-symmetric pair.
    const Triangulation m = make_triangulation({{-1, 0}, {-0.5, 0.5}, {-1, 1}, {-0.5, -0.5}, {-1, -1}},
                                               {{{0, 1, 2}}, {{0, 4, 3}}});
    const auto em = grading_indicator(m);
    CHECK(em[0] == doctest::Approx(em[1]).epsilon(1e-15));

    const Triangulation origin = make_triangulation({{-1, -1}, {1, -1}, {0, 2}}, {{{0, 1, 2}}});
    CHECK_THROWS_AS(grading_indicator(origin), DegenerateBarycenter);
}

TEST_CASE("dorfler_mark") {
    CHECK(dorfler_mark({4, 1, 1, 1, 1}, 0.5) == std::vector<int>{0});
    const auto all = dorfler_mark({1, 2, 3}, 1.0);
    CHECK(std::set<int>(all.begin(), all.end()) == std::set<int>{0, 1, 2});
    CHECK(dorfler_mark({1, 1}, 0.5) == std::vector<int>{0});
    const auto m = dorfler_mark({1, 3, 2, 3}, 0.6);  // 9 * 0.6 = 5.4 <= 3 + 3
    CHECK(std::set<int>(m.begin(), m.end()) == std::set<int>{1, 3});
}

TEST_CASE("refine_bisect") {
    const Triangulation l = lshape_mesh();
    const Triangulation same = refine_bisect(l, {});
    CHECK(same.c4n == l.c4n);
    CHECK(same.n4e == l.n4e);

    std::vector<int> every(l.num_elements());
    for (int e = 0; e < l.num_elements(); ++e) every[e] = e;
    const Triangulation b = refine_bisect(l, every);
    CHECK(b.num_elements() >= 2 * l.num_elements());
    CHECK(b.total_area() == doctest::Approx(3.0).epsilon(1e-12));
    check_conforming(b);

    const double angle0 = min_angle(l);
    Triangulation t = l;
    for (int round = 0; round < 10; ++round) {
        const auto marked = dorfler_mark(grading_indicator(t, 7.0 / 5.0), 0.5);
        const Triangulation next = refine_bisect(t, marked);
        CHECK(next.num_elements() > t.num_elements());
        t = next;
        check_conforming(t);
        CHECK(t.total_area() == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(min_angle(t) >= 0.5 * angle0);
    }
}

TEST_CASE("element_geometry") {
    const ElementGeometry g = triangle_geometry({0, 0}, {1, 0}, {0, 1});
    CHECK(g.DF.isApprox(Eigen::Matrix2d::Identity()));
    Eigen::Matrix<double, 3, 2> G;
    G << -1, -1, 1, 0, 0, 1;
    CHECK(g.G.isApprox(G));
    CHECK(g.area == doctest::Approx(0.5));
    CHECK_THROWS_AS(triangle_geometry({0, 0}, {1, 1}, {2, 2}), DegenerateElement);

    Triangulation t = refine_uniform(lshape_mesh());
    for (int e = 0; e < t.num_elements(); ++e) {
        const ElementGeometry ge = element_geometry(t, e);
        CHECK(ge.G.colwise().sum().norm() < 1e-13);
        const Eigen::Vector3d d = ge.G * (ge.v[1] - ge.v[0]);
        CHECK((d - Eigen::Vector3d(-1, 1, 0)).norm() < 1e-13);
        CHECK(ge.area == doctest::Approx(std::abs(ge.DF.determinant()) / 2));
        for (int j = 0; j < 3; ++j) {
            CHECK(ge.tangent[j].isApprox(rotation_R().transpose() * ge.normal[j]));
            // Outward: normal points away from the opposite vertex.
            const Eigen::Vector2d edge_mid = (ge.v[(j + 1) % 3] + ge.v[(j + 2) % 3]) / 2;
            CHECK(ge.normal[j].dot(edge_mid - ge.v[j]) > 0);
            CHECK(std::abs(std::abs(ge.side_normal[j].dot(ge.normal[j])) - 1.0) < 1e-13);
            // Both neighbours see the same global normal.
            const int s = t.s4e[e][j];
            CHECK(ge.side_normal[j].isApprox(t.side_normal(s)));
        }
    }
    // Global normal: tangent min -> max rotated clockwise.
    for (int s = 0; s < t.num_sides(); ++s) {
        const auto &a = t.c4n[t.n4s[s][0]], &b = t.c4n[t.n4s[s][1]];
        Eigen::Vector2d tau(b[0] - a[0], b[1] - a[1]);
        tau.normalize();
        CHECK(t.side_normal(s).isApprox(Eigen::Vector2d(tau.y(), -tau.x())));
    }
}

TEST_CASE("mesh text round trip") {
    const Triangulation t = refine_bisect(lshape_mesh(), {0, 3});
    std::stringstream ss;
    write_mesh(ss, t);
    CHECK(ss.str().rfind("nodes ", 0) == 0);
    const Triangulation r = read_mesh(ss);
    CHECK(r.c4n == t.c4n);
    CHECK(r.n4e == t.n4e);
    CHECK(r.n4s == t.n4s);

    std::istringstream bad("nodes 3 elements 1 edges 0\n0 0 1\n1 0 1\n");
    CHECK_THROWS_AS(read_mesh(bad), MeshFormatError);
}
