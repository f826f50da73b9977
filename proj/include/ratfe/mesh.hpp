#pragma once
// Conforming triangulations, refinement (red and newest-vertex bisection),
// Doerfler marking for geometric grading, and per-element geometry.

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace ratfe {

using Point2 = std::array<double, 2>;

// Element vertex order doubles as the bisection data: vertex 0 is the newest
// vertex and edge 0 (opposite it) is the refinement edge.
struct Triangulation {
    std::vector<Point2> c4n;
    std::vector<std::array<int, 3>> n4e;
    std::vector<std::array<int, 2>> n4s;  // (min, max) vertex index
    std::vector<std::array<int, 3>> s4e;  // edge j joins local vertices j+1, j+2
    std::vector<std::array<int, 2>> e4s;  // adjacent elements, -1 on the boundary
    std::vector<char> bnd_node, bnd_side;

    int num_nodes() const { return static_cast<int>(c4n.size()); }
    int num_elements() const { return static_cast<int>(n4e.size()); }
    int num_sides() const { return static_cast<int>(n4s.size()); }

    // Unit tangent min -> max and its clockwise rotation, shared by both neighbours.
    Eigen::Vector2d side_tangent(int s) const;
    Eigen::Vector2d side_normal(int s) const;

    double total_area() const;
};

// Derives n4s, s4e, e4s and boundary flags from c4n and n4e.
Triangulation make_triangulation(std::vector<Point2> c4n, std::vector<std::array<int, 3>> n4e);

// Two triangles split along the (0,0)-(1,1) diagonal, or four around the centre.
Triangulation unit_square_mesh(bool crisscross = false);
// (-1,1)^2 minus [0,1)^2 with six triangles.
Triangulation lshape_mesh();

Triangulation refine_uniform(const Triangulation& t);
Triangulation refine_bisect(const Triangulation& t, const std::vector<int>& marked);

// eta^2(T) = |mid T|^-2 |T|^q with q = 5/7 by default. With q = 5/7 the
// corner elements carry eta^2 ~ h^(-4/7), so marking never leaves the corner;
// q = 7/5 equidistributes to h ~ r^(5/7) instead.
std::vector<double> grading_indicator(const Triangulation& t, double area_exponent = 5.0 / 7.0);
std::vector<int> dorfler_mark(const std::vector<double>& eta2, double theta);

struct ElementGeometry {
    std::array<Eigen::Vector2d, 3> v;
    Eigen::Matrix2d DF;
    double area = 0.0;
    Eigen::Matrix<double, 3, 2> G;  // row i is grad lambda_i
    // Outward unit normals of the local edges and the tangents R^T * normal.
    std::array<Eigen::Vector2d, 3> normal, tangent;
    // Global normal/tangent of the edges s4e(e, j).
    std::array<Eigen::Vector2d, 3> side_normal, side_tangent;
    Eigen::Vector2d mid() const { return (v[0] + v[1] + v[2]) / 3.0; }
};

ElementGeometry element_geometry(const Triangulation& t, int e);
ElementGeometry triangle_geometry(const Eigen::Vector2d& v0, const Eigen::Vector2d& v1, const Eigen::Vector2d& v2);

// Rotation R = (0 1; -1 0); curl g = R grad g.
inline Eigen::Matrix2d rotation_R() {
    Eigen::Matrix2d R;
    R << 0.0, 1.0, -1.0, 0.0;
    return R;
}

double min_angle(const Triangulation& t);

// Text format: "nodes N elements P edges S", then N lines "x y bflag",
// P lines "i j k" and S lines "i j".
void write_mesh(std::ostream& os, const Triangulation& t);
Triangulation read_mesh(std::istream& is);

}  // namespace ratfe
