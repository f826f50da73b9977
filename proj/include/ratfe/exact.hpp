#pragma once
// Exact numbers: GMP-backed rationals and the values q0 + q1*pi^2 (or +inf)
// that every integral mean of a rational barycentric monomial takes.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ratfe {

using BigInt = mpz_class;

// Reduced fraction with positive denominator.
class BigRational {
public:
    BigRational() = default;
    BigRational(long n);  // NOLINT(google-explicit-constructor)
    BigRational(const BigInt& n);  // NOLINT(google-explicit-constructor)
    BigRational(const BigInt& num, const BigInt& den);
    BigRational(long num, long den);

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }
    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }

    // Correctly rounded (round-to-nearest-even) conversion.
    double to_double() const;
    // "n" or "n/d".
    std::string str() const;
    static BigRational parse(const std::string& s);

    const mpq_class& raw() const { return q_; }

    friend BigRational operator+(const BigRational& a, const BigRational& b);
    friend BigRational operator-(const BigRational& a, const BigRational& b);
    friend BigRational operator*(const BigRational& a, const BigRational& b);
    friend BigRational operator/(const BigRational& a, const BigRational& b);
    BigRational operator-() const;
    BigRational& operator+=(const BigRational& o);
    BigRational& operator-=(const BigRational& o);
    BigRational& operator*=(const BigRational& o);

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.q_ != b.q_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.q_ >= b.q_; }

private:
    explicit BigRational(mpq_class q) : q_(std::move(q)) {}
    mpq_class q_{0};
};

std::ostream& operator<<(std::ostream& os, const BigRational& q);

BigInt factorial(long n);

// q0 + q1*pi^2, or +infinity.
class ExactValue {
public:
    ExactValue() = default;
    ExactValue(BigRational q0, BigRational q1 = BigRational(0))  // NOLINT
        : q0_(std::move(q0)), q1_(std::move(q1)) {}

    static ExactValue infinite();
    static ExactValue pi_squared(const BigRational& c = BigRational(1));

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }
    const BigRational& q0() const;
    const BigRational& q1() const;

    friend ExactValue add(const ExactValue& a, const ExactValue& b);
    friend ExactValue scale(const BigRational& c, const ExactValue& v);

    friend bool operator==(const ExactValue& a, const ExactValue& b);
    friend bool operator!=(const ExactValue& a, const ExactValue& b) { return !(a == b); }

    // "q0 + q1*pi^2" or "inf".
    std::string str() const;
    static ExactValue parse(const std::string& s);

private:
    BigRational q0_, q1_;
    bool inf_ = false;
};

ExactValue add(const ExactValue& a, const ExactValue& b);
ExactValue scale(const BigRational& c, const ExactValue& v);
inline ExactValue operator+(const ExactValue& a, const ExactValue& b) { return add(a, b); }
// a - b; fails with ScaleInfiniteByNonpositive if b is infinite.
ExactValue subtract(const ExactValue& a, const ExactValue& b);

double to_float(const ExactValue& v);

std::ostream& operator<<(std::ostream& os, const ExactValue& v);

// pi^2 to 80 significant digits, as an exact decimal fraction.
const BigRational& pi_squared_rational();

}  // namespace ratfe
