#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "affscat/error.hpp"
#include "affscat/rational.hpp"
#include "affscat/valuation.hpp"

namespace affscat {

inline Valuation val(const Rational& x) { return x.is_zero() ? Valuation::infinity() : Valuation(0); }

inline Rational inverse(const Rational& x) {
    if (x.is_zero()) {
        throw Error(ErrorKind::ZeroDivision, "inverse of zero");
    }
    return Rational(1) / x;
}

/// Truncated formal Laurent series in one parameter t over the rationals,
/// with the t-adic valuation. Terms with exponent >= order() are discarded;
/// truncated() records whether a nonzero term was ever dropped.
///
/// Mixed-order arithmetic truncates to the smaller order.
class ValuedScalar {
public:
    static constexpr long kDefaultOrder = 64;

    ValuedScalar() = default;
    ValuedScalar(long c) : ValuedScalar(Rational(c)) {}  // NOLINT
    ValuedScalar(const Rational& c, long order = kDefaultOrder) : order_(order) {  // NOLINT
        if (!c.is_zero() && 0 < order_) {
            terms_.emplace(0, c);
        }
    }

    static ValuedScalar monomial(const Rational& c, long exponent, long order = kDefaultOrder) {
        ValuedScalar s;
        s.order_ = order;
        if (!c.is_zero()) {
            if (exponent < order) {
                s.terms_.emplace(exponent, c);
            } else {
                s.truncated_ = true;
            }
        }
        return s;
    }
    static ValuedScalar t(long exponent = 1, long order = kDefaultOrder) {
        return monomial(Rational(1), exponent, order);
    }
    static ValuedScalar from_terms(const std::map<long, Rational>& terms, long order) {
        ValuedScalar s;
        s.order_ = order;
        for (const auto& [e, c] : terms) {
            s.add_term(e, c);
        }
        return s;
    }

    long order() const noexcept { return order_; }
    bool truncated() const noexcept { return truncated_; }
    const std::map<long, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    Rational coeff(long exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Valuation valuation() const {
        return terms_.empty() ? Valuation::infinity() : Valuation(terms_.begin()->first);
    }
    const Rational& leading_coeff() const {
        if (terms_.empty()) {
            throw Error(ErrorKind::ZeroDivision, "leading coefficient of zero");
        }
        return terms_.begin()->second;
    }

    ValuedScalar with_order(long order) const {
        ValuedScalar s;
        s.order_ = order;
        s.truncated_ = truncated_;
        for (const auto& [e, c] : terms_) {
            s.add_term(e, c);
        }
        return s;
    }

    ValuedScalar operator-() const {
        ValuedScalar s = *this;
        for (auto& [e, c] : s.terms_) {
            c = -c;
        }
        return s;
    }

    ValuedScalar& operator+=(const ValuedScalar& o) {
        long order = std::min(order_, o.order_);
        if (order < order_) {
            drop_from(order);
        }
        order_ = order;
        truncated_ = truncated_ || o.truncated_;
        for (const auto& [e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    ValuedScalar& operator-=(const ValuedScalar& o) { return *this += -o; }

    friend ValuedScalar operator+(ValuedScalar a, const ValuedScalar& b) { return a += b; }
    friend ValuedScalar operator-(ValuedScalar a, const ValuedScalar& b) { return a -= b; }

    friend ValuedScalar operator*(const ValuedScalar& a, const ValuedScalar& b) {
        ValuedScalar r;
        r.order_ = std::min(a.order_, b.order_);
        r.truncated_ = a.truncated_ || b.truncated_;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                r.add_term(ea + eb, ca * cb);
            }
        }
        return r;
    }
    ValuedScalar& operator*=(const ValuedScalar& o) { return *this = *this * o; }

    /// Equality modulo the smaller of the two truncation orders.
    friend bool operator==(const ValuedScalar& a, const ValuedScalar& b) {
        long order = std::min(a.order_, b.order_);
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        while (true) {
            while (ia != a.terms_.end() && ia->first >= order) ++ia;
            while (ib != b.terms_.end() && ib->first >= order) ++ib;
            if (ia == a.terms_.end() || ib == b.terms_.end()) {
                return ia == a.terms_.end() && ib == b.terms_.end();
            }
            if (ia->first != ib->first || ia->second != ib->second) {
                return false;
            }
            ++ia;
            ++ib;
        }
    }

    std::string str() const {
        std::ostringstream os;
        if (terms_.empty()) {
            os << "0";
        }
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            if (e != 0) os << "t^" << e;
        }
        os << " mod t^" << order_;
        return os.str();
    }

private:
    void add_term(long exponent, const Rational& c) {
        if (c.is_zero()) {
            return;
        }
        if (exponent >= order_) {
            truncated_ = true;
            return;
        }
        auto [it, inserted] = terms_.emplace(exponent, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }
    void drop_from(long order) {
        auto it = terms_.lower_bound(order);
        if (it != terms_.end()) {
            truncated_ = true;
            terms_.erase(it, terms_.end());
        }
    }

    std::map<long, Rational> terms_;
    long order_ = kDefaultOrder;
    bool truncated_ = false;
};

inline Valuation val(const ValuedScalar& x) { return x.valuation(); }

/// s^{-1}, computed by factoring out the leading term c t^v and expanding the
/// geometric series of the remainder. The result is known modulo t^{T-2v}.
inline ValuedScalar inverse(const ValuedScalar& s) {
    if (s.is_zero()) {
        throw Error(ErrorKind::ZeroDivision, "inverse of zero series");
    }
    const long v = s.valuation().value();
    const Rational c = s.leading_coeff();
    const long out_order = s.order() - 2 * v;
    const long rel = s.order() - v;  // relative precision of the unit part

    // u = s / (c t^v) - 1, with positive exponents only
    std::map<long, Rational> u;
    for (const auto& [e, a] : s.terms()) {
        if (e != v) {
            u.emplace(e - v, a / c);
        }
    }
    ValuedScalar unit_u = ValuedScalar::from_terms(u, rel);
    ValuedScalar sum(Rational(1), rel);
    ValuedScalar power(Rational(1), rel);
    while (true) {
        power = power * (-unit_u);
        if (power.is_zero()) {
            break;
        }
        sum += power;
    }
    std::map<long, Rational> shifted;
    const Rational ci = Rational(1) / c;
    for (const auto& [e, a] : sum.terms()) {
        shifted.emplace(e - v, a * ci);
    }
    return ValuedScalar::from_terms(shifted, out_order);
}

inline ValuedScalar pow(const ValuedScalar& s, long n) {
    if (n < 0) {
        return pow(inverse(s), -n);
    }
    ValuedScalar result(Rational(1), s.order());
    ValuedScalar base = s;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

namespace detail {

inline bool exact_integer_root(const mpz_class& x, unsigned long d, mpz_class& root) {
    if (x < 0 && d % 2 == 0) {
        return false;
    }
    mpz_class ax = abs(x);
    int exact = mpz_root(root.get_mpz_t(), ax.get_mpz_t(), d);
    if (!exact) {
        return false;
    }
    if (x < 0) {
        root = -root;
    }
    return true;
}

} // namespace detail

/// All d-th roots of s in Q((t)) at the working truncation (d >= 1). Empty when
/// the leading exponent is not divisible by d or the leading coefficient has
/// no rational d-th root.
inline std::vector<ValuedScalar> nth_roots(const ValuedScalar& s, long d) {
    if (d < 1) {
        throw Error(ErrorKind::InvalidInput, "root degree must be positive");
    }
    if (s.is_zero()) {
        return {s};
    }
    const long v = s.valuation().value();
    if (v % d != 0) {
        return {};
    }
    const Rational& c = s.leading_coeff();
    mpz_class rn, rd;
    if (!detail::exact_integer_root(c.num(), static_cast<unsigned long>(d), rn) ||
        !detail::exact_integer_root(c.den(), static_cast<unsigned long>(d), rd)) {
        return {};
    }
    const Rational c_root(rn, rd);
    const long rel = s.order() - v;
    std::map<long, Rational> u;
    for (const auto& [e, a] : s.terms()) {
        if (e != v) {
            u.emplace(e - v, a / c);
        }
    }
    // (1+u)^{1/d} by the binomial series
    ValuedScalar unit_u = ValuedScalar::from_terms(u, rel);
    ValuedScalar sum(Rational(1), rel);
    ValuedScalar power(Rational(1), rel);
    Rational binom(1);
    const Rational expo(1, d);
    for (long j = 1;; ++j) {
        power = power * unit_u;
        if (power.is_zero()) {
            break;
        }
        binom = binom * (expo - Rational(j - 1)) / Rational(j);
        sum += ValuedScalar(binom, rel) * power;
    }
    std::map<long, Rational> shifted;
    for (const auto& [e, a] : sum.terms()) {
        shifted.emplace(e + v / d, a * c_root);
    }
    ValuedScalar root = ValuedScalar::from_terms(shifted, rel + v / d);
    if (d % 2 == 0) {
        return {root, -root};
    }
    return {root};
}

} // namespace affscat
