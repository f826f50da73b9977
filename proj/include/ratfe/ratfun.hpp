#pragma once
// Rational barycentric monomials R^a_b = lam^a / (1-lam)^b and their finite
// linear combinations, with exact calculus in the barycentric variables.

#include "ratfe/exact.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ratfe {

// Nonnegative index triple; arithmetic is checked.
struct MultiIndex3 {
    std::array<int, 3> a{0, 0, 0};

    MultiIndex3() = default;
    MultiIndex3(int a0, int a1, int a2);

    int operator[](int i) const { return a[static_cast<size_t>(i)]; }
    int sum() const { return a[0] + a[1] + a[2]; }
    int max() const;
    bool is_zero() const { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

    static MultiIndex3 unit(int j);

    friend MultiIndex3 operator+(const MultiIndex3& x, const MultiIndex3& y);
    friend MultiIndex3 operator-(const MultiIndex3& x, const MultiIndex3& y);  // throws NegativeIndex
    friend auto operator<=>(const MultiIndex3&, const MultiIndex3&) = default;
};

struct BaryPoint {
    std::array<BigRational, 3> l;

    BaryPoint(BigRational l0, BigRational l1, BigRational l2);
    static BaryPoint vertex(int i);
    static BaryPoint edge_midpoint(int j);  // midpoint of the edge opposite vertex j
    static BaryPoint barycenter();
};

struct RatTerm {
    BigRational coeff;
    MultiIndex3 alpha, beta;
};

// Sum of terms with pairwise distinct (alpha, beta); zero coefficients are
// dropped, so structural equality is equality of the term maps.
class RatCombo {
public:
    using Key = std::pair<MultiIndex3, MultiIndex3>;

    RatCombo() = default;
    static RatCombo monomial(const MultiIndex3& alpha, const MultiIndex3& beta = {},
                             const BigRational& c = BigRational(1));
    static RatCombo constant(const BigRational& c);
    static RatCombo lambda(int j);

    void add_term(const BigRational& c, const MultiIndex3& alpha, const MultiIndex3& beta);

    bool is_zero() const { return terms_.empty(); }
    bool is_polynomial() const;
    size_t size() const { return terms_.size(); }
    std::vector<RatTerm> terms() const;
    const std::map<Key, BigRational>& term_map() const { return terms_; }

    friend RatCombo operator+(const RatCombo& f, const RatCombo& g);
    friend RatCombo operator-(const RatCombo& f, const RatCombo& g);
    friend RatCombo operator*(const BigRational& c, const RatCombo& f);
    friend bool operator==(const RatCombo& f, const RatCombo& g) { return f.terms_ == g.terms_; }

    // Debug form, one "c * lam^(..) / (1-lam)^(..)" line per term.
    std::string str() const;

private:
    std::map<Key, BigRational> terms_;
};

RatCombo multiply(const RatCombo& f, const RatCombo& g);
inline RatCombo operator*(const RatCombo& f, const RatCombo& g) { return multiply(f, g); }

RatCombo diff_lambda(const RatCombo& f, int j);
std::array<RatCombo, 3> grad_lambda(const RatCombo& f);
std::array<std::array<RatCombo, 3>, 3> hessian_lambda(const RatCombo& f);

bool sobolev_member(const MultiIndex3& alpha, const MultiIndex3& beta, int m, double p);

// Exact evaluation; removable vertex singularities follow the order rule.
BigRational evaluate(const RatCombo& f, const BaryPoint& p);

// Floating-point evaluation at a point with all lam_i < 1 (no vertex).
class CompiledCombo {
public:
    CompiledCombo() = default;
    explicit CompiledCombo(const RatCombo& f);
    double operator()(const std::array<double, 3>& lam) const;

private:
    struct Term {
        double c;
        std::array<int, 3> alpha, beta;
    };
    std::vector<Term> terms_;
};

// B_{f_j} = R^{(2,2,2)-e_j}_{(1,1,1)-e_j}.
RatCombo rational_bubble(int j);

}  // namespace ratfe
