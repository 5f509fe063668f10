#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "affscat/rational.hpp"

namespace affscat {

/// Integer-or-infinity value returned by ring valuations; val(0) = +inf.
class Valuation {
public:
    constexpr Valuation() = default;  // +inf
    constexpr Valuation(long v) : value_(v) {}  // NOLINT

    static constexpr Valuation infinity() { return Valuation(); }

    constexpr bool is_infinite() const noexcept { return !value_.has_value(); }
    constexpr long value() const { return *value_; }

    friend constexpr Valuation operator+(const Valuation& a, const Valuation& b) {
        if (a.is_infinite() || b.is_infinite()) {
            return infinity();
        }
        return Valuation(*a.value_ + *b.value_);
    }

    friend constexpr bool operator==(const Valuation& a, const Valuation& b) = default;
    friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
        if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
        if (a.is_infinite()) return std::strong_ordering::greater;
        if (b.is_infinite()) return std::strong_ordering::less;
        return *a.value_ <=> *b.value_;
    }

    std::string str() const { return is_infinite() ? std::string("inf") : std::to_string(*value_); }
    friend std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

private:
    std::optional<long> value_;
};

inline Valuation min(const Valuation& a, const Valuation& b) { return a < b ? a : b; }

/// Rational-or-infinity, used where valuations get shifted by rational points.
using ExtRational = std::optional<Rational>;

inline std::string to_string(const ExtRational& v) { return v ? v->str() : std::string("inf"); }

} // namespace affscat
