#include "ratfe/errors.hpp"
#include "ratfe/quadrature.hpp"

#include <algorithm>
#include <utility>

namespace ratfe {

namespace {

BigRational fact(long n) { return BigRational(factorial(n)); }

// a!b!/c! style ratios with all arguments nonnegative.
BigRational fact_ratio(std::initializer_list<long> num, std::initializer_list<long> den) {
    BigInt n = 1, d = 1;
    for (long k : num) n *= factorial(k);
    for (long k : den) d *= factorial(k);
    return BigRational(n, d);
}

bool is_finite(const MultiIndex3& alpha, const MultiIndex3& beta) {
    return (alpha + beta).max() <= alpha.sum() + 1;
}

}  // namespace

QuadKey QuadKey::canonical(const MultiIndex3& alpha, const MultiIndex3& beta) {
    QuadKey k;
    for (int i = 0; i < 3; ++i) k.pairs[i] = {alpha[i], beta[i]};
    std::sort(k.pairs.begin(), k.pairs.end());
    return k;
}

bool MemoCache::lookup(const QuadKey& k, ExactValue& out) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(k);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
}

void MemoCache::store(const QuadKey& k, const ExactValue& v) {
    std::lock_guard<std::mutex> lock(mu_);
    map_.emplace(k, v);
}

size_t MemoCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

void MemoCache::clear() {
    std::lock_guard<std::mutex> lock(mu_);
    map_.clear();
}

MemoCache& global_cache() {
    static MemoCache cache;
    return cache;
}

ExactValue integral_mean_poly(const std::vector<int>& alpha, int d) {
    if (d < 1) throw Error("integral_mean_poly: dimension must be >= 1");
    if (alpha.size() != static_cast<size_t>(d) + 1) throw Error("integral_mean_poly: need d+1 indices");
    BigInt num = factorial(d);
    long total = 0;
    for (int a : alpha) {
        if (a < 0) throw NegativeIndex("integral_mean_poly: negative index");
        num *= factorial(a);
        total += a;
    }
    return ExactValue(BigRational(num, factorial(d + total)));
}

ExactValue integral_mean_beta2(const MultiIndex3& alpha, int beta2) {
    if (beta2 < 0) throw NegativeIndex("integral_mean_beta2: negative beta2");
    const MultiIndex3 beta(0, 0, beta2);
    if (!is_finite(alpha, beta)) throw IndexNotFinite("integral_mean_beta2: mean is infinite");
    const long a = alpha.sum();
    const long a01 = alpha[0] + alpha[1];
    return ExactValue(BigRational(2) * fact_ratio({alpha[0], alpha[1], alpha[2]}, {a - beta2 + 2}) *
                      fact_ratio({a01 + 1 - beta2}, {a01 + 1}));
}

ExactValue compute_J(int a1, int a2, int b1, int b2) {
    if (a1 < 0 || a2 < 0 || b1 < 0 || b2 < 0) throw NegativeIndex("compute_J: negative index");
    if (std::max(a1 + b1, a2 + b2) > a1 + a2 + 1) return ExactValue::infinite();
    if (b2 < b1) {
        std::swap(a1, a2);
        std::swap(b1, b2);
    }
    if (b1 == 0) {
        return ExactValue(BigRational(2, a1 + 1) * fact_ratio({a2, a1 - b2 + 1}, {a1 + a2 - b2 + 2}));
    }
    if (b1 == 1) {
        if (b2 == 1) {
            BigRational s(0);
            for (int i = 1; i <= a2; ++i) s -= BigRational(2, static_cast<long>(i) * i);
            for (int j = 1; j <= a1; ++j) s -= BigRational(2, j) * fact_ratio({a2, j - 1}, {a2 + j});
            return ExactValue(s, BigRational(1, 3));
        }
        const ExactValue rec = compute_J(a1, a2, 1, b2 - 1);
        const BigRational tail = BigRational(2, b2 - 1) * fact_ratio({a1 - b2 + 1, a2}, {a1 - b2 + a2 + 2});
        return add(scale(BigRational(b2 - a2 - 2, b2 - 1), rec), ExactValue(tail));
    }
    const ExactValue rec = compute_J(a1, a2, b1 - 1, b2);
    const BigRational tail =
        BigRational(2, b1 - 1) * fact_ratio({a2 - b1 + 1, a1 - b2 + 1}, {a2 - b1 + a1 - b2 + 3});
    return add(scale(BigRational(b1 - a1 - 2, b1 - 1), rec), ExactValue(tail));
}

namespace {

ExactValue compute_I(MultiIndex3 alpha, MultiIndex3 beta, MemoCache* cache);

ExactValue compute_I_uncached(MultiIndex3 alpha, MultiIndex3 beta, MemoCache* cache) {
    if (!is_finite(alpha, beta)) return ExactValue::infinite();

    // Order the (alpha_i, beta_i) pairs so that beta0 <= beta1 <= beta2.
    std::array<int, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return beta[x] < beta[y]; });
    alpha = MultiIndex3(alpha[idx[0]], alpha[idx[1]], alpha[idx[2]]);
    beta = MultiIndex3(beta[idx[0]], beta[idx[1]], beta[idx[2]]);

    const long a = alpha.sum();
    const auto e = [](int j) { return MultiIndex3::unit(j); };
    const BigRational half(1, 2);

    if (beta[0] == 0 && beta[1] == 0) {
        const long b2 = beta[2];
        const long a01 = alpha[0] + alpha[1];
        return ExactValue(BigRational(2) * fact_ratio({alpha[0], alpha[1], alpha[2]}, {a - b2 + 2}) *
                          fact_ratio({a01 + 1 - b2}, {a01 + 1}));
    }
    if (beta[0] >= 1) {
        ExactValue s;
        for (int j = 0; j < 3; ++j) s = add(s, compute_I(alpha, beta - e(j), cache));
        return scale(half, s);
    }
    if (alpha[0] == 0) return compute_J(alpha[1], alpha[2], beta[1], beta[2]);

    const MultiIndex3 a_minus = alpha - e(0);
    if (alpha[1] + beta[1] < a + 1) {
        return subtract(compute_I(a_minus, beta - e(2), cache), compute_I(a_minus + e(1), beta, cache));
    }
    if (alpha[2] + beta[2] < a + 1) {
        return subtract(compute_I(a_minus, beta - e(1), cache), compute_I(a_minus + e(2), beta, cache));
    }
    ExactValue s;
    for (int j = 1; j <= 2; ++j) {
        s = add(s, compute_I(alpha, beta - e(j), cache));
        s = add(s, compute_I(a_minus + e(j), beta - e(j), cache));
    }
    return subtract(scale(half, s), compute_I(a_minus + e(1) + e(2), beta, cache));
}

ExactValue compute_I(MultiIndex3 alpha, MultiIndex3 beta, MemoCache* cache) {
    if (cache == nullptr) return compute_I_uncached(alpha, beta, nullptr);
    const QuadKey key = QuadKey::canonical(alpha, beta);
    ExactValue v;
    if (cache->lookup(key, v)) return v;
    v = compute_I_uncached(alpha, beta, cache);
    cache->store(key, v);
    return v;
}

}  // namespace

ExactValue integral_mean_I(const MultiIndex3& alpha, const MultiIndex3& beta, MemoCache* cache) {
    return compute_I(alpha, beta, cache);
}

ExactValue integral_mean_I(const MultiIndex3& alpha, const MultiIndex3& beta) {
    return compute_I(alpha, beta, &global_cache());
}

ExactValue integral_mean_combo(const RatCombo& f, MemoCache* cache) {
    ExactValue s;
    for (const auto& [k, c] : f.term_map()) {
        const ExactValue v = integral_mean_I(k.first, k.second, cache);
        if (v.is_infinite()) throw InfiniteTerm("integrand term has an infinite mean");
        s = add(s, scale(c, v));
    }
    return s;
}

}  // namespace ratfe
