#include "ratfe/ratfun.hpp"

#include "ratfe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ratfe {

namespace {
constexpr int kMaxIndex = 1 << 20;

int checked(long v) {
    if (v < 0) throw NegativeIndex("negative multi-index entry");
    if (v > kMaxIndex) throw NegativeIndex("multi-index entry overflow");
    return static_cast<int>(v);
}
}  // namespace

MultiIndex3::MultiIndex3(int a0, int a1, int a2) : a{checked(a0), checked(a1), checked(a2)} {}

int MultiIndex3::max() const { return std::max({a[0], a[1], a[2]}); }

MultiIndex3 MultiIndex3::unit(int j) {
    MultiIndex3 e;
    e.a[static_cast<size_t>(j)] = 1;
    return e;
}

MultiIndex3 operator+(const MultiIndex3& x, const MultiIndex3& y) {
    return {x.a[0] + y.a[0], x.a[1] + y.a[1], x.a[2] + y.a[2]};
}

MultiIndex3 operator-(const MultiIndex3& x, const MultiIndex3& y) {
    return {x.a[0] - y.a[0], x.a[1] - y.a[1], x.a[2] - y.a[2]};
}

BaryPoint::BaryPoint(BigRational l0, BigRational l1, BigRational l2) : l{std::move(l0), std::move(l1), std::move(l2)} {
    if (l[0] + l[1] + l[2] != BigRational(1)) throw Error("barycentric coordinates must sum to 1");
    for (const auto& x : l)
        if (x.sign() < 0 || x > BigRational(1)) throw Error("barycentric coordinate outside [0,1]");
}

BaryPoint BaryPoint::vertex(int i) {
    std::array<BigRational, 3> l{0, 0, 0};
    l[static_cast<size_t>(i)] = 1;
    return {l[0], l[1], l[2]};
}

BaryPoint BaryPoint::edge_midpoint(int j) {
    std::array<BigRational, 3> l{BigRational(1, 2), BigRational(1, 2), BigRational(1, 2)};
    l[static_cast<size_t>(j)] = 0;
    return {l[0], l[1], l[2]};
}

BaryPoint BaryPoint::barycenter() { return {BigRational(1, 3), BigRational(1, 3), BigRational(1, 3)}; }

// ---------------------------------------------------------------------------

RatCombo RatCombo::monomial(const MultiIndex3& alpha, const MultiIndex3& beta, const BigRational& c) {
    RatCombo f;
    f.add_term(c, alpha, beta);
    return f;
}

RatCombo RatCombo::constant(const BigRational& c) { return monomial({}, {}, c); }

RatCombo RatCombo::lambda(int j) { return monomial(MultiIndex3::unit(j)); }

void RatCombo::add_term(const BigRational& c, const MultiIndex3& alpha, const MultiIndex3& beta) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace({alpha, beta}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool RatCombo::is_polynomial() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.second.is_zero(); });
}

std::vector<RatTerm> RatCombo::terms() const {
    std::vector<RatTerm> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.push_back({c, k.first, k.second});
    return out;
}

RatCombo operator+(const RatCombo& f, const RatCombo& g) {
    RatCombo h = f;
    for (const auto& [k, c] : g.terms_) h.add_term(c, k.first, k.second);
    return h;
}

RatCombo operator-(const RatCombo& f, const RatCombo& g) {
    RatCombo h = f;
    for (const auto& [k, c] : g.terms_) h.add_term(-c, k.first, k.second);
    return h;
}

RatCombo operator*(const BigRational& c, const RatCombo& f) {
    RatCombo h;
    if (c.is_zero()) return h;
    for (const auto& [k, v] : f.terms_) h.terms_.emplace(k, c * v);
    return h;
}

std::string RatCombo::str() const {
    if (terms_.empty()) return "0\n";
    std::ostringstream os;
    for (const auto& [k, c] : terms_) {
        const auto& [al, be] = k;
        os << c << " * lam^(" << al[0] << ',' << al[1] << ',' << al[2] << ") / (1-lam)^(" << be[0] << ','
           << be[1] << ',' << be[2] << ")\n";
    }
    return os.str();
}

RatCombo multiply(const RatCombo& f, const RatCombo& g) {
    RatCombo h;
    for (const auto& [kf, cf] : f.term_map())
        for (const auto& [kg, cg] : g.term_map()) h.add_term(cf * cg, kf.first + kg.first, kf.second + kg.second);
    return h;
}

RatCombo diff_lambda(const RatCombo& f, int j) {
    RatCombo h;
    const MultiIndex3 e = MultiIndex3::unit(j);
    for (const auto& [k, c] : f.term_map()) {
        const auto& [al, be] = k;
        if (al[j] > 0) h.add_term(c * BigRational(al[j]), al - e, be);
        if (be[j] > 0) h.add_term(c * BigRational(be[j]), al, be + e);
    }
    return h;
}

std::array<RatCombo, 3> grad_lambda(const RatCombo& f) { return {diff_lambda(f, 0), diff_lambda(f, 1), diff_lambda(f, 2)}; }

std::array<std::array<RatCombo, 3>, 3> hessian_lambda(const RatCombo& f) {
    std::array<std::array<RatCombo, 3>, 3> h;
    const auto g = grad_lambda(f);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            h[i][j] = diff_lambda(g[i], j);
            h[j][i] = h[i][j];
        }
    return h;
}

bool sobolev_member(const MultiIndex3& alpha, const MultiIndex3& beta, int m, double p) {
    const double lhs = alpha.sum() - (alpha + beta).max();
    if (std::isinf(p)) return lhs >= m;
    return lhs > m - 2.0 / p;
}

namespace {
BigRational pow_q(const BigRational& x, int k) {
    BigRational r(1);
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}
}  // namespace

BigRational evaluate(const RatCombo& f, const BaryPoint& p) {
    BigRational sum(0);
    const BigRational one(1);
    for (const auto& [k, c] : f.term_map()) {
        const auto& [al, be] = k;
        int vertex = -1;
        for (int i = 0; i < 3; ++i)
            if (p.l[i] == one && be[i] > 0) vertex = i;
        if (vertex >= 0) {
            // At vertex i the other coordinates vanish; the term tends to 0
            // iff its numerator order beats the pole order.
            const int order = al.sum() - al[vertex];
            if (order > be[vertex]) continue;
            throw SingularEvaluation("term not defined at vertex " + std::to_string(vertex));
        }
        BigRational t = c;
        for (int i = 0; i < 3; ++i) {
            t *= pow_q(p.l[i], al[i]);
            if (be[i] > 0) t = t / pow_q(one - p.l[i], be[i]);
        }
        sum += t;
    }
    return sum;
}

CompiledCombo::CompiledCombo(const RatCombo& f) {
    for (const auto& t : f.terms()) terms_.push_back({t.coeff.to_double(), t.alpha.a, t.beta.a});
}

double CompiledCombo::operator()(const std::array<double, 3>& lam) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        double v = t.c;
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < t.alpha[i]; ++k) v *= lam[i];
            const double d = 1.0 - lam[i];
            for (int k = 0; k < t.beta[i]; ++k) v /= d;
        }
        s += v;
    }
    return s;
}

RatCombo rational_bubble(int j) {
    const MultiIndex3 e = MultiIndex3::unit(j);
    return RatCombo::monomial(MultiIndex3(2, 2, 2) - e, MultiIndex3(1, 1, 1) - e);
}

}  // namespace ratfe
