#include "ratfe/exact.hpp"

#include "ratfe/errors.hpp"

#include <mpfr.h>

#include <ostream>
#include <regex>

namespace ratfe {

BigRational::BigRational(long n) : q_(n) {}

BigRational::BigRational(const BigInt& n) : q_(n) {}

BigRational::BigRational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw ZeroDenominator("BigRational: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

BigRational::BigRational(long num, long den) : BigRational(BigInt(num), BigInt(den)) {}

double BigRational::to_double() const {
    mpfr_t r;
    mpfr_init2(r, 53);
    mpfr_set_q(r, q_.get_mpq_t(), MPFR_RNDN);
    double d = mpfr_get_d(r, MPFR_RNDN);
    mpfr_clear(r);
    return d;
}

std::string BigRational::str() const { return q_.get_str(); }

BigRational BigRational::parse(const std::string& s) {
    static const std::regex re(R"(\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw ParseError("not a rational: '" + s + "'");
    BigInt num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str());
    BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
    return BigRational(num, den);
}

BigRational operator+(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.q_ + b.q_)); }
BigRational operator-(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.q_ - b.q_)); }
BigRational operator*(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.q_ * b.q_)); }
BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.is_zero()) throw ZeroDenominator("BigRational: division by zero");
    return BigRational(mpq_class(a.q_ / b.q_));
}
BigRational BigRational::operator-() const { return BigRational(mpq_class(-q_)); }
BigRational& BigRational::operator+=(const BigRational& o) {
    q_ += o.q_;
    return *this;
}
BigRational& BigRational::operator-=(const BigRational& o) {
    q_ -= o.q_;
    return *this;
}
BigRational& BigRational::operator*=(const BigRational& o) {
    q_ *= o.q_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const BigRational& q) { return os << q.str(); }

BigInt factorial(long n) {
    if (n < 0) throw NegativeIndex("factorial of negative number");
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

// ---------------------------------------------------------------------------

ExactValue ExactValue::infinite() {
    ExactValue v;
    v.inf_ = true;
    return v;
}

ExactValue ExactValue::pi_squared(const BigRational& c) { return ExactValue(BigRational(0), c); }

const BigRational& ExactValue::q0() const {
    if (inf_) throw InfiniteValue("q0 of infinite value");
    return q0_;
}

const BigRational& ExactValue::q1() const {
    if (inf_) throw InfiniteValue("q1 of infinite value");
    return q1_;
}

ExactValue add(const ExactValue& a, const ExactValue& b) {
    if (a.inf_ || b.inf_) return ExactValue::infinite();
    return ExactValue(a.q0_ + b.q0_, a.q1_ + b.q1_);
}

ExactValue scale(const BigRational& c, const ExactValue& v) {
    if (v.inf_) {
        if (c.sign() <= 0) throw ScaleInfiniteByNonpositive("scaling infinity by " + c.str());
        return v;
    }
    return ExactValue(c * v.q0_, c * v.q1_);
}

ExactValue subtract(const ExactValue& a, const ExactValue& b) { return add(a, scale(BigRational(-1), b)); }

bool operator==(const ExactValue& a, const ExactValue& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.q0_ == b.q0_ && a.q1_ == b.q1_;
}

std::string ExactValue::str() const {
    if (inf_) return "inf";
    return q0_.str() + " + " + q1_.str() + "*pi^2";
}

ExactValue ExactValue::parse(const std::string& s) {
    static const std::regex inf_re(R"(\s*inf\s*)");
    static const std::regex re(R"(\s*([+-]?\d+(?:/\d+)?)\s*\+\s*([+-]?\d+(?:/\d+)?)\s*\*\s*pi\^2\s*)");
    if (std::regex_match(s, inf_re)) return infinite();
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw ParseError("not an exact value: '" + s + "'");
    return ExactValue(BigRational::parse(m[1].str()), BigRational::parse(m[2].str()));
}

std::ostream& operator<<(std::ostream& os, const ExactValue& v) { return os << v.str(); }

const BigRational& pi_squared_rational() {
    static const BigRational value = [] {
        const std::string digits =
            "9869604401089358618834490999876151135313699407240790626413349376220044822419205";
        BigInt num(digits);
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, digits.size() - 1);
        return BigRational(num, den);
    }();
    return value;
}

double to_float(const ExactValue& v) {
    if (v.is_infinite()) throw InfiniteValue("to_float of infinite value");
    // Combine exactly, round once.
    return (v.q0() + v.q1() * pi_squared_rational()).to_double();
}

}  // namespace ratfe
