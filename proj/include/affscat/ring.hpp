#pragma once

#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "affscat/rational.hpp"
#include "affscat/valuation.hpp"
#include "affscat/valued_scalar.hpp"

namespace affscat {

/// Commutative ring with a valuation. Elements are built from rationals,
/// support exact arithmetic, and can be inverted when they are units.
template <class R>
concept CoefficientRing = std::regular<R> && requires(const R& a, const R& b, const Rational& q) {
    { R(q) } -> std::same_as<R>;
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { val(a) } -> std::same_as<Valuation>;
    { inverse(a) } -> std::convertible_to<R>;
    { a.str() } -> std::convertible_to<std::string>;
};

/// Largest t-exponent the ring can still represent for this element (0 for
/// rings with trivial valuation). Bounds iterations that rely on the valuation
/// to terminate.
inline long precision_bound(const Rational&) { return 0; }
inline long precision_bound(const ValuedScalar& s) { return s.order(); }

struct RingAxiomReport {
    bool passed = true;
    std::string law;     // first violated law
    std::string detail;  // the offending samples
    long checks = 0;
};

template <CoefficientRing R>
RingAxiomReport ring_axiom_suite(const std::vector<R>& samples) {
    RingAxiomReport report;
    const R zero(Rational(0));
    const R one(Rational(1));
    auto fail = [&](const std::string& law, const std::string& detail) {
        if (report.passed) {
            report.passed = false;
            report.law = law;
            report.detail = detail;
        }
    };
    auto check = [&](bool ok, const char* law, const std::string& detail) {
        ++report.checks;
        if (!ok) fail(law, detail);
        return ok;
    };

    check(val(zero).is_infinite(), "val(0) = +inf", "");
    for (const R& x : samples) {
        const std::string sx = x.str();
        check(x + zero == x, "additive identity", sx);
        check(x * one == x, "multiplicative identity", sx);
        check((x + (-x)).is_zero(), "additive inverse", sx);
        check((x * zero).is_zero(), "absorbing zero", sx);
        check(x.is_zero() == val(x).is_infinite(), "val(x) = +inf iff x = 0", sx);
        if (!x.is_zero()) {
            try {
                check(x * inverse(x) == one, "multiplicative inverse", sx);
            } catch (const Error&) {
                // not a unit in this ring; nothing to assert
            }
        }
        for (const R& y : samples) {
            const std::string sxy = sx + ", " + y.str();
            check(x + y == y + x, "commutativity of +", sxy);
            check(x * y == y * x, "commutativity of *", sxy);
            if (!x.is_zero() && !y.is_zero()) {
                check(val(x * y) == val(x) + val(y), "val(xy) = val(x) + val(y)", sxy);
            }
            const Valuation vs = val(x + y);
            check(vs >= min(val(x), val(y)), "val(x+y) >= min(val(x), val(y))", sxy);
            if (val(x) != val(y)) {
                check(vs == min(val(x), val(y)), "val(x+y) = min when valuations differ", sxy);
            }
            for (const R& z : samples) {
                const std::string sxyz = sxy + ", " + z.str();
                check((x + y) + z == x + (y + z), "associativity of +", sxyz);
                check((x * y) * z == x * (y * z), "associativity of *", sxyz);
                check(x * (y + z) == x * y + x * z, "distributivity", sxyz);
            }
        }
    }
    return report;
}

} // namespace affscat
