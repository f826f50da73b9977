#include "ratfe/mesh.hpp"

#include "ratfe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ratfe {

Eigen::Vector2d Triangulation::side_tangent(int s) const {
    const auto& a = c4n[n4s[s][0]];
    const auto& b = c4n[n4s[s][1]];
    Eigen::Vector2d t(b[0] - a[0], b[1] - a[1]);
    return t / t.norm();
}

Eigen::Vector2d Triangulation::side_normal(int s) const {
    const Eigen::Vector2d t = side_tangent(s);
    return {t.y(), -t.x()};
}

double Triangulation::total_area() const {
    double a = 0.0;
    for (int e = 0; e < num_elements(); ++e) a += element_geometry(*this, e).area;
    return a;
}

Triangulation make_triangulation(std::vector<Point2> c4n, std::vector<std::array<int, 3>> n4e) {
    Triangulation t;
    t.c4n = std::move(c4n);
    t.n4e = std::move(n4e);
    const int m = t.num_nodes();
    std::map<std::pair<int, int>, int> side_of;
    t.s4e.resize(t.n4e.size());
    for (int e = 0; e < t.num_elements(); ++e) {
        for (int k : t.n4e[e])
            if (k < 0 || k >= m) throw IndexOutOfRange("element references missing vertex");
        for (int j = 0; j < 3; ++j) {
            int a = t.n4e[e][(j + 1) % 3], b = t.n4e[e][(j + 2) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = side_of.try_emplace({a, b}, t.num_sides());
            if (inserted) {
                t.n4s.push_back({a, b});
                t.e4s.push_back({e, -1});
            } else {
                auto& adj = t.e4s[it->second];
                if (adj[1] != -1) throw MeshFormatError("edge shared by more than two elements");
                adj[1] = e;
            }
            t.s4e[e][j] = it->second;
        }
    }
    t.bnd_node.assign(m, 0);
    t.bnd_side.assign(t.n4s.size(), 0);
    for (int s = 0; s < t.num_sides(); ++s) {
        if (t.e4s[s][1] == -1) {
            t.bnd_side[s] = 1;
            t.bnd_node[t.n4s[s][0]] = 1;
            t.bnd_node[t.n4s[s][1]] = 1;
        }
    }
    return t;
}

Triangulation unit_square_mesh(bool crisscross) {
    if (crisscross) {
        return make_triangulation({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}},
                                  {{{4, 0, 1}}, {{4, 1, 2}}, {{4, 2, 3}}, {{4, 3, 0}}});
    }
    return make_triangulation({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{1, 2, 0}}, {{3, 0, 2}}});
}

Triangulation lshape_mesh() {
    std::vector<Point2> c4n{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {0, 0}, {1, 0}, {-1, 1}, {0, 1}};
    // Right angle first, so every refinement edge is a hypotenuse.
    std::vector<std::array<int, 3>> n4e{{{3, 4, 6}}, {{7, 6, 4}}, {{1, 4, 0}},
                                        {{3, 0, 4}}, {{1, 2, 4}}, {{5, 4, 2}}};
    return make_triangulation(std::move(c4n), std::move(n4e));
}

Triangulation refine_uniform(const Triangulation& t) {
    std::vector<Point2> c4n = t.c4n;
    const int m = t.num_nodes();
    for (const auto& s : t.n4s) {
        const auto& a = t.c4n[s[0]];
        const auto& b = t.c4n[s[1]];
        c4n.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
    }
    std::vector<std::array<int, 3>> n4e;
    n4e.reserve(4 * t.n4e.size());
    for (int e = 0; e < t.num_elements(); ++e) {
        const auto& v = t.n4e[e];
        const int m0 = m + t.s4e[e][0], m1 = m + t.s4e[e][1], m2 = m + t.s4e[e][2];
        n4e.push_back({v[0], m2, m1});
        n4e.push_back({m2, v[1], m0});
        n4e.push_back({m1, m0, v[2]});
        n4e.push_back({m0, m1, m2});
    }
    return make_triangulation(std::move(c4n), std::move(n4e));
}

Triangulation refine_bisect(const Triangulation& t, const std::vector<int>& marked) {
    std::vector<char> split(t.n4s.size(), 0);
    for (int e : marked) {
        if (e < 0 || e >= t.num_elements()) throw IndexOutOfRange("marked element out of range");
        split[t.s4e[e][0]] = 1;
    }
    // Closure: an element with any split edge must split its refinement edge.
    for (bool changed = true; changed;) {
        changed = false;
        for (int e = 0; e < t.num_elements(); ++e) {
            const auto& s = t.s4e[e];
            if (!split[s[0]] && (split[s[1]] || split[s[2]])) {
                split[s[0]] = 1;
                changed = true;
            }
        }
    }
    std::vector<Point2> c4n = t.c4n;
    std::map<std::pair<int, int>, int> mid;
    for (int s = 0; s < t.num_sides(); ++s) {
        if (!split[s]) continue;
        const auto& a = t.c4n[t.n4s[s][0]];
        const auto& b = t.c4n[t.n4s[s][1]];
        mid[{t.n4s[s][0], t.n4s[s][1]}] = static_cast<int>(c4n.size());
        c4n.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
    }
    std::vector<std::array<int, 3>> n4e;
    auto bisect = [&](auto&& self, const std::array<int, 3>& v) -> void {
        const auto it = mid.find({std::min(v[1], v[2]), std::max(v[1], v[2])});
        if (it == mid.end()) {
            n4e.push_back(v);
            return;
        }
        const int mv = it->second;
        self(self, {mv, v[0], v[1]});
        self(self, {mv, v[2], v[0]});
    };
    for (const auto& v : t.n4e) bisect(bisect, v);
    return make_triangulation(std::move(c4n), std::move(n4e));
}

std::vector<double> grading_indicator(const Triangulation& t, double area_exponent) {
    std::vector<double> eta2(t.n4e.size());
    for (int e = 0; e < t.num_elements(); ++e) {
        const ElementGeometry g = element_geometry(t, e);
        const double r2 = g.mid().squaredNorm();
        if (r2 == 0.0) throw DegenerateBarycenter("element barycenter at the origin");
        eta2[e] = std::pow(g.area, area_exponent) / r2;
    }
    return eta2;
}

std::vector<int> dorfler_mark(const std::vector<double>& eta2, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("dorfler_mark: theta must lie in (0,1]");
    std::vector<int> order(eta2.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta2[a] > eta2[b]; });
    const double total = std::accumulate(eta2.begin(), eta2.end(), 0.0);
    std::vector<int> marked;
    double acc = 0.0;
    for (int e : order) {
        if (acc >= theta * total && !marked.empty()) break;
        marked.push_back(e);
        acc += eta2[e];
    }
    // theta = 1 may fall short by rounding; take everything then
    if (theta == 1.0) {
        marked = order;
    }
    std::sort(marked.begin(), marked.end());
    return marked;
}

ElementGeometry triangle_geometry(const Eigen::Vector2d& v0, const Eigen::Vector2d& v1, const Eigen::Vector2d& v2) {
    ElementGeometry g;
    g.v = {v0, v1, v2};
    g.DF.col(0) = v1 - v0;
    g.DF.col(1) = v2 - v0;
    const double det = g.DF.determinant();
    const double scale = std::max({(v1 - v0).norm(), (v2 - v1).norm(), (v0 - v2).norm()});
    if (!(std::abs(det) >= 1e-14 * scale * scale) || scale == 0.0) throw DegenerateElement("degenerate element");
    g.area = std::abs(det) / 2.0;
    Eigen::Matrix<double, 3, 2> ref;
    ref << -1, -1, 1, 0, 0, 1;
    g.G = ref * g.DF.inverse();
    const Eigen::Matrix2d Rt = rotation_R().transpose();
    for (int j = 0; j < 3; ++j) {
        g.normal[j] = -g.G.row(j).transpose() / g.G.row(j).norm();
        g.tangent[j] = Rt * g.normal[j];
        g.side_normal[j] = g.normal[j];
        g.side_tangent[j] = g.tangent[j];
    }
    return g;
}

ElementGeometry element_geometry(const Triangulation& t, int e) {
    if (e < 0 || e >= t.num_elements()) throw IndexOutOfRange("element index out of range");
    const auto& n = t.n4e[e];
    auto P = [&](int k) { return Eigen::Vector2d(t.c4n[n[k]][0], t.c4n[n[k]][1]); };
    ElementGeometry g = triangle_geometry(P(0), P(1), P(2));
    if (g.DF.determinant() <= 0.0) throw DegenerateElement("element is not positively oriented");
    for (int j = 0; j < 3; ++j) {
        g.side_normal[j] = t.side_normal(t.s4e[e][j]);
        g.side_tangent[j] = t.side_tangent(t.s4e[e][j]);
    }
    return g;
}

double min_angle(const Triangulation& t) {
    double best = M_PI;
    for (const auto& n : t.n4e) {
        for (int j = 0; j < 3; ++j) {
            const auto& a = t.c4n[n[j]];
            const auto& b = t.c4n[n[(j + 1) % 3]];
            const auto& c = t.c4n[n[(j + 2) % 3]];
            const Eigen::Vector2d u(b[0] - a[0], b[1] - a[1]), w(c[0] - a[0], c[1] - a[1]);
            best = std::min(best, std::acos(std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0)));
        }
    }
    return best;
}

void write_mesh(std::ostream& os, const Triangulation& t) {
    os << "nodes " << t.num_nodes() << " elements " << t.num_elements() << " edges " << t.num_sides() << '\n';
    os << std::setprecision(17);
    for (int k = 0; k < t.num_nodes(); ++k)
        os << t.c4n[k][0] << ' ' << t.c4n[k][1] << ' ' << int(t.bnd_node[k]) << '\n';
    for (const auto& n : t.n4e) os << n[0] << ' ' << n[1] << ' ' << n[2] << '\n';
    for (const auto& s : t.n4s) os << s[0] << ' ' << s[1] << '\n';
}

Triangulation read_mesh(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw MeshFormatError("empty mesh file");
    std::istringstream hs(line);
    std::string w1, w2, w3;
    long N = -1, P = -1, S = -1;
    hs >> w1 >> N >> w2 >> P;
    if (w1 != "nodes" || w2 != "elements" || N < 0 || P < 0) throw MeshFormatError("bad mesh header: " + line);
    if (hs >> w3) {
        if (w3 != "edges" || !(hs >> S)) throw MeshFormatError("bad mesh header: " + line);
    }
    std::vector<Point2> c4n(N);
    std::vector<int> bflag(N);
    for (long k = 0; k < N; ++k)
        if (!(is >> c4n[k][0] >> c4n[k][1] >> bflag[k])) throw MeshFormatError("truncated node block");
    std::vector<std::array<int, 3>> n4e(P);
    for (long e = 0; e < P; ++e)
        if (!(is >> n4e[e][0] >> n4e[e][1] >> n4e[e][2])) throw MeshFormatError("truncated element block");
    Triangulation t = make_triangulation(std::move(c4n), std::move(n4e));
    for (long k = 0; k < N; ++k)
        if ((bflag[k] != 0) != (t.bnd_node[k] != 0)) throw MeshFormatError("boundary flag disagrees with topology");
    if (S > 0) {
        if (S != t.num_sides()) throw MeshFormatError("edge count disagrees with topology");
        for (long s = 0; s < S; ++s) {
            std::array<int, 2> ab{};
            if (!(is >> ab[0] >> ab[1])) throw MeshFormatError("truncated edge block");
            if (ab != t.n4s[s]) throw MeshFormatError("edge block disagrees with derived numbering");
        }
    }
    return t;
}

}  // namespace ratfe
