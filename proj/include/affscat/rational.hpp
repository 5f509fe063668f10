#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "affscat/error.hpp"

namespace affscat {

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT: implicit by design of numeric literals
    Rational(long num, long den) {
        if (den == 0) {
            throw Error(ErrorKind::ZeroDivision, "rational with zero denominator");
        }
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) {
            throw Error(ErrorKind::ZeroDivision, "rational with zero denominator");
        }
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }

    /// Accepts "p", "-p", "p/q".
    static Rational parse(std::string_view text) {
        std::string s(text);
        auto first = s.find_first_not_of(" \t");
        auto last = s.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw Error(ErrorKind::InvalidInput, "empty rational literal");
        }
        s = s.substr(first, last - first + 1);
        if (s.front() == '+') {
            s.erase(0, 1);
        }
        mpq_class q;
        if (q.set_str(s, 10) != 0) {
            throw Error(ErrorKind::InvalidInput, "malformed rational '" + std::string(text) + "'");
        }
        if (q.get_den() == 0) {
            throw Error(ErrorKind::ZeroDivision, "rational with zero denominator");
        }
        return Rational(q);
    }

    const mpq_class& value() const noexcept { return value_; }
    mpz_class num() const { return value_.get_num(); }
    mpz_class den() const { return value_.get_den(); }

    bool is_zero() const noexcept { return sgn(value_) == 0; }
    bool is_integer() const noexcept { return value_.get_den() == 1; }
    int sign() const noexcept { return sgn(value_); }

    long to_long() const {
        mpz_class q = value_.get_num() / value_.get_den();
        return q.get_si();
    }
    double to_double() const { return value_.get_d(); }

    long floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return r.get_si();
    }
    long ceil() const {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return r.get_si();
    }

    std::string str() const {
        if (is_integer()) {
            return value_.get_num().get_str();
        }
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) {
            throw Error(ErrorKind::ZeroDivision, "division by zero rational");
        }
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline long gcd_long(long a, long b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long lcm_long(long a, long b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    return (a / gcd_long(a, b)) * b;
}

} // namespace affscat
