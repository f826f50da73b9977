#include "ratfe/quadrature.hpp"

#include "ratfe/errors.hpp"

#include <cmath>
#include <numbers>

namespace ratfe {

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
    GaussLegendre g;
    g.x.resize(n);
    g.w.resize(n);
    // Newton on P_n for the roots in (-1,1), mapped to [0,1] at the end.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // recompute derivative at the converged root
        {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        g.x[i] = 0.5 * (1.0 - z);
        g.x[n - 1 - i] = 0.5 * (1.0 + z);
        g.w[i] = g.w[n - 1 - i] = 0.5 * w;
    }
    if (n % 2 == 1) g.x[n / 2] = 0.5;
    return g;
}

GaussRule2D gauss_rule(int n) {
    const GaussLegendre g = gauss_legendre(n);
    GaussRule2D r;
    r.n = n;
    for (int i = 0; i < n; ++i) {
        const double xi = g.x[i];
        for (int j = 0; j < n; ++j) {
            r.points.push_back({xi, (1.0 - xi) * g.x[j]});
            r.weights.push_back(g.w[i] * g.w[j] * (1.0 - xi));
        }
    }
    return r;
}

double gauss_integrate(const std::function<double(double, double)>& f, const GaussRule2D& rule,
                       const std::array<std::array<double, 2>, 3>& tri) {
    const double ax = tri[1][0] - tri[0][0], ay = tri[1][1] - tri[0][1];
    const double bx = tri[2][0] - tri[0][0], by = tri[2][1] - tri[0][1];
    const double det = std::abs(ax * by - ay * bx);
    double s = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
        const auto& p = rule.points[q];
        s += rule.weights[q] * f(tri[0][0] + ax * p[0] + bx * p[1], tri[0][1] + ay * p[0] + by * p[1]);
    }
    return s * det;
}

}  // namespace ratfe
