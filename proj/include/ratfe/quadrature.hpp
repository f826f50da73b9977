#pragma once
// Exact integral means I(a,b) of R^a_b over a triangle, and the tensorized
// Gauss rule used for the inexact-quadrature comparisons.

#include "ratfe/exact.hpp"
#include "ratfe/ratfun.hpp"

#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

namespace ratfe {

// Permutation-orbit representative: the three (alpha_i, beta_i) pairs sorted.
struct QuadKey {
    std::array<std::pair<int, int>, 3> pairs;

    static QuadKey canonical(const MultiIndex3& alpha, const MultiIndex3& beta);
    friend auto operator<=>(const QuadKey&, const QuadKey&) = default;
};

// Thread-safe map from QuadKey to the exact mean.
class MemoCache {
public:
    bool lookup(const QuadKey& k, ExactValue& out) const;
    void store(const QuadKey& k, const ExactValue& v);
    size_t size() const;
    void clear();

private:
    mutable std::mutex mu_;
    std::map<QuadKey, ExactValue> map_;
};

// d! alpha! / (d + |alpha|)!, the mean of lam^alpha over a d-simplex.
ExactValue integral_mean_poly(const std::vector<int>& alpha, int d);

// Closed form for beta = (0, 0, beta2).
ExactValue integral_mean_beta2(const MultiIndex3& alpha, int beta2);

// 2 * integral over the reference triangle of x^a1 y^a2 / ((1-x)^b1 (1-y)^b2).
ExactValue compute_J(int a1, int a2, int b1, int b2);

// Mean of R^alpha_beta over any triangle. cache may be null.
ExactValue integral_mean_I(const MultiIndex3& alpha, const MultiIndex3& beta, MemoCache* cache);
ExactValue integral_mean_I(const MultiIndex3& alpha, const MultiIndex3& beta);

// Sum of coeff * I over the terms; throws InfiniteTerm on a divergent term.
ExactValue integral_mean_combo(const RatCombo& f, MemoCache* cache);

// Process-wide cache shared by the table builders.
MemoCache& global_cache();

// ---------------------------------------------------------------------------

struct GaussLegendre {
    std::vector<double> x, w;  // nodes and weights on [0,1]
};
GaussLegendre gauss_legendre(int n);

struct GaussRule2D {
    int n = 0;
    std::vector<std::array<double, 2>> points;  // reference triangle (0,0),(1,0),(0,1)
    std::vector<double> weights;                // sum to 1/2
};

GaussRule2D gauss_rule(int n);

// f is evaluated at physical points; tri holds the three vertices.
double gauss_integrate(const std::function<double(double, double)>& f, const GaussRule2D& rule,
                       const std::array<std::array<double, 2>, 3>& tri);

}  // namespace ratfe
