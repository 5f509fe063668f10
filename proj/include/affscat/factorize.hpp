#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "affscat/error.hpp"
#include "affscat/symp.hpp"

namespace affscat {

/// Coprime non-negative pair (n1, n2), ordered by n2/n1 from (1,0) to (0,1).
struct Slope {
    long n1 = 1;
    long n2 = 0;

    Slope() = default;
    Slope(long a, long b) : n1(a), n2(b) {
        if (a < 0 || b < 0 || (a == 0 && b == 0) || gcd_long(a, b) != 1) {
            throw Error(ErrorKind::InvalidInput,
                        "slope (" + std::to_string(a) + "," + std::to_string(b) + ") is not coprime non-negative");
        }
    }

    friend bool operator==(const Slope&, const Slope&) = default;
    friend bool operator<(const Slope& s, const Slope& t) { return s.n2 * t.n1 < s.n1 * t.n2; }

    std::string str() const { return "(" + std::to_string(n1) + "," + std::to_string(n2) + ")"; }
};

/// f(z) = 1 + c_1 z + c_2 z^2 + ...; coeffs[j-1] = c_j, trailing zeros trimmed.
template <CoefficientRing R>
class WallFunction {
public:
    WallFunction() = default;
    explicit WallFunction(std::vector<R> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    /// 1 + z
    static WallFunction linear(const R& c = R(Rational(1))) { return WallFunction(std::vector<R>{c}); }

    const std::vector<R>& coeffs() const { return coeffs_; }
    bool is_trivial() const { return coeffs_.empty(); }
    /// c_j for j >= 1
    R coeff(std::size_t j) const { return j >= 1 && j <= coeffs_.size() ? coeffs_[j - 1] : R(Rational(0)); }

    /// Keep only c_j with j < length.
    WallFunction truncated(std::size_t length) const {
        std::vector<R> c(coeffs_.begin(), coeffs_.begin() + std::min(coeffs_.size(), length > 0 ? length - 1 : 0));
        return WallFunction(std::move(c));
    }

    friend bool operator==(const WallFunction& x, const WallFunction& y) {
        if (x.coeffs_.size() != y.coeffs_.size()) return false;
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
            if (!(x.coeffs_[i] == y.coeffs_[i])) return false;
        }
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        os << "1";
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (!coeffs_[j].is_zero()) os << " + (" << coeffs_[j].str() << ")z^" << j + 1;
        }
        return os.str();
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }
    std::vector<R> coeffs_;
};

namespace detail {

/// One-variable series 1 + ... truncated to `len` coefficients (index = power).
template <CoefficientRing R>
std::vector<R> poly_mul(const std::vector<R>& x, const std::vector<R>& y, std::size_t len) {
    std::vector<R> r(len, R(Rational(0)));
    for (std::size_t i = 0; i < x.size() && i < len; ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < y.size() && i + j < len; ++j) {
            if (!y[j].is_zero()) r[i + j] = r[i + j] + x[i] * y[j];
        }
    }
    return r;
}

/// f^n for f with constant term 1, n any integer, truncated to len terms.
template <CoefficientRing R>
std::vector<R> poly_pow(const WallFunction<R>& f, long n, std::size_t len) {
    std::vector<R> base(len, R(Rational(0)));
    if (len == 0) return base;
    base[0] = R(Rational(1));
    for (std::size_t j = 1; j < len; ++j) base[j] = f.coeff(j);
    if (n < 0) {
        // 1/(1+u) = sum (-u)^i; u has no constant term so u^len = 0
        std::vector<R> mu(len, R(Rational(0)));
        for (std::size_t j = 1; j < len; ++j) mu[j] = -base[j];
        std::vector<R> sum(len, R(Rational(0)));
        sum[0] = R(Rational(1));
        std::vector<R> power = sum;
        for (std::size_t i = 1; i < len; ++i) {
            power = poly_mul(power, mu, len);
            for (std::size_t j = 0; j < len; ++j) sum[j] = sum[j] + power[j];
        }
        base = std::move(sum);
        n = -n;
    }
    std::vector<R> result(len, R(Rational(0)));
    result[0] = R(Rational(1));
    while (n > 0) {
        if (n & 1) result = poly_mul(result, base, len);
        n >>= 1;
        if (n > 0) base = poly_mul(base, base, len);
    }
    return result;
}

/// Number of powers z^0, z^1, ... of the slope monomial that the grading keeps.
inline std::size_t wall_length(const Grading& g, Exponent2 z) {
    if (!g.has_cutoff() || g.degree_sign(z) <= 0) {
        throw Error(ErrorKind::InvalidInput, "wall length needs a positive-degree monomial under a cutoff");
    }
    std::size_t len = 0;
    while (g.keeps(static_cast<long>(len) * z)) ++len;
    return len;
}

} // namespace detail

/// An automorphism together with its inverse; walls are composed on the left
/// cheaply because the inverse of a wall is the wall of 1/f.
template <CoefficientRing R>
class WallProduct {
public:
    using Series = TruncSeries2<R>;

    explicit WallProduct(GradingPtr g)
        : A_(Series::one(g)), B_(Series::one(g)), Ai_(Series::one(g)), Bi_(Series::one(g)) {}

    /// Replace P by W o P, where W: xi -> xi f(z)^q, eta -> eta f(z)^-p,
    /// z = xi^-p eta^-q, (p, q) = n1 alpha1 + n2 alpha2.
    /// `zscale` multiplies z, so f(s z) is applied; t-adic callers use it to
    /// make the wall small at their evaluation point.
    void apply_left(long n1, long n2, const WallFunction<R>& f, const R& zscale = R(Rational(1))) {
        if (f.is_trivial()) return;
        const Grading& g = A_.grading();
        const Exponent2 ze = g.slope_monomial(n1, n2);
        const long p = -ze.a;
        const long q = -ze.b;
        // Z = z(xi A, eta B) = z * A^-p * B^-q
        Series Z = Series::monomial(A_.grading_ptr(), ze, zscale);
        Z = Z * side_power(A_, Ai_, -p) * side_power(B_, Bi_, -q);
        std::vector<Series> zp{Series::one(A_.grading_ptr())};
        for (long guard = 0;; ++guard) {
            Series next = zp.back() * Z;
            if (next.is_zero()) break;
            if (guard > detail::kMaxSeriesIterations) {
                throw Error(ErrorKind::InvalidInput, "wall powers do not truncate");
            }
            zp.push_back(std::move(next));
        }
        const std::size_t len = zp.size();
        auto eval = [&](long n) {
            std::vector<R> h = detail::poly_pow(f, n, len);
            Series r(A_.grading_ptr());
            for (std::size_t j = 0; j < len; ++j) {
                if (!h[j].is_zero()) r += h[j] * zp[j];
            }
            return r;
        };
        if (q != 0) {
            A_ = A_ * eval(q);
            Ai_ = Ai_ * eval(-q);
        }
        if (p != 0) {
            B_ = B_ * eval(-p);
            Bi_ = Bi_ * eval(p);
        }
    }

    SympAuto<R> automorphism() const { return SympAuto<R>(A_, B_); }

private:
    static Series side_power(const Series& s, const Series& si, long n) {
        return n >= 0 ? pow(s, n) : pow(si, -n);
    }

    Series A_, B_, Ai_, Bi_;
};

/// xi -> xi f(z)^q, eta -> eta f(z)^-p with z = xi^-p eta^-q and
/// (p, q) = n1 alpha1 + n2 alpha2 in the grading basis.
template <CoefficientRing R>
SympAuto<R> slope_auto(const Slope& s, const WallFunction<R>& f, GradingPtr g) {
    WallProduct<R> w(std::move(g));
    w.apply_left(s.n1, s.n2, f);
    return w.automorphism();
}

/// Same for a possibly non-primitive lattice direction (n1, n2).
template <CoefficientRing R>
SympAuto<R> direction_auto(long n1, long n2, const WallFunction<R>& f, GradingPtr g,
                           const R& zscale = R(Rational(1))) {
    WallProduct<R> w(std::move(g));
    w.apply_left(n1, n2, f, zscale);
    return w.automorphism();
}

template <CoefficientRing R>
struct SlopeFactorization {
    GradingPtr grading;
    std::map<Slope, WallFunction<R>> factors;  // trivial walls are never stored

    explicit SlopeFactorization(GradingPtr g) : grading(std::move(g)) {}

    void set(const Slope& s, WallFunction<R> f) {
        if (f.is_trivial()) {
            factors.erase(s);
        } else {
            factors.insert_or_assign(s, std::move(f));
        }
    }
    WallFunction<R> at(const Slope& s) const {
        auto it = factors.find(s);
        return it == factors.end() ? WallFunction<R>() : it->second;
    }

    friend bool operator==(const SlopeFactorization& x, const SlopeFactorization& y) {
        return x.factors == y.factors;
    }
};

/// g_{s1} o g_{s2} o ... o g_{sN} for s1 < s2 < ... < sN: the wall of smallest
/// slope is applied last.
template <CoefficientRing R>
SympAuto<R> ordered_product(const SlopeFactorization<R>& sf) {
    WallProduct<R> w(sf.grading);
    for (auto it = sf.factors.rbegin(); it != sf.factors.rend(); ++it) {
        w.apply_left(it->first.n1, it->first.n2, it->second);
    }
    return w.automorphism();
}

namespace detail {

template <CoefficientRing R>
void require_cone(const TruncSeries2<R>& s) {
    for (const auto& [e, c] : s.terms()) {
        if (!e.is_zero() && !s.grading().in_cone(e)) {
            throw Error(ErrorKind::NotInCone, "term at exponent (" + std::to_string(e.a) + "," +
                                                  std::to_string(e.b) + ") lies outside the cone");
        }
    }
}

} // namespace detail

/// The unique slope factorization with ordered_product(result) = g modulo the
/// grading cutoff. Degree by degree: compare g with the current product, read
/// the lowest-degree defect as a central Hamiltonian and absorb each term
/// c xi^-m(p,q) into the wall at slope (p,q) as a factor 1 + m c z^m.
template <CoefficientRing R>
SlopeFactorization<R> factorize(const SympAuto<R>& g) {
    using Series = TruncSeries2<R>;
    const GradingPtr& gp = g.grading_ptr();
    const Grading& grading = *gp;
    if (!grading.has_cutoff()) {
        throw Error(ErrorKind::InvalidInput, "factorize needs a degree cutoff");
    }
    const Series one = Series::one(gp);
    detail::require_cone(g.xi_multiplier() - one);
    detail::require_cone(g.eta_multiplier() - one);

    SlopeFactorization<R> sf(gp);
    std::optional<Rational> last_degree;
    for (long iter = 0;; ++iter) {
        SympAuto<R> P = ordered_product(sf);
        Series dA = g.xi_multiplier() - P.xi_multiplier();
        Series dB = g.eta_multiplier() - P.eta_multiplier();
        if (dA.is_zero() && dB.is_zero()) {
            break;
        }
        auto la = dA.lowest_degree();
        auto lb = dB.lowest_degree();
        Rational d = !la ? *lb : (!lb ? *la : std::min(*la, *lb));
        if (last_degree && d <= *last_degree) {
            throw Error(ErrorKind::InconsistentDefect, "defect degree did not increase at " + d.str());
        }
        last_degree = d;
        Series F = hamiltonian_from_defect(dA.homogeneous_part(d), dB.homogeneous_part(d));
        for (const auto& [e, c] : F.terms()) {
            if (!grading.in_cone(e)) {
                throw Error(ErrorKind::NotInCone, "defect outside the cone");
            }
            auto [r1, r2] = grading.coords(e);
            long n1 = r1.to_long();
            long n2 = r2.to_long();
            long m = gcd_long(n1, n2);
            Slope s(n1 / m, n2 / m);
            const std::size_t len = detail::wall_length(grading, grading.slope_monomial(s.n1, s.n2));
            WallFunction<R> cur = sf.at(s);
            std::vector<R> full(len, R(Rational(0)));
            if (len > 0) full[0] = R(Rational(1));
            for (std::size_t j = 1; j < len; ++j) full[j] = cur.coeff(j);
            std::vector<R> b(len, R(Rational(0)));
            if (len > 0) b[0] = R(Rational(1));
            if (static_cast<std::size_t>(m) < len) b[m] = R(Rational(m)) * c;
            std::vector<R> prod = detail::poly_mul(full, b, len);
            sf.set(s, WallFunction<R>(std::vector<R>(prod.begin() + (len > 0 ? 1 : 0), prod.end())));
        }
        if (iter > detail::kMaxSeriesIterations) {
            throw Error(ErrorKind::InconsistentDefect, "factorization does not terminate");
        }
    }
    return sf;
}

struct IntegralityReport {
    bool integral = true;
    std::vector<std::pair<Slope, std::vector<Rational>>> table;
    std::string counterexample;
};

/// Factorizes F_inf o F_0 over the rationals and checks that every wall
/// coefficient is an integer.
inline IntegralityReport integrality_probe(const WallFunction<Rational>& f0, const WallFunction<Rational>& finf,
                                           long k) {
    for (const auto& c : f0.coeffs()) {
        if (!c.is_integer()) throw Error(ErrorKind::InvalidInput, "f0 must have integer coefficients");
    }
    for (const auto& c : finf.coeffs()) {
        if (!c.is_integer()) throw Error(ErrorKind::InvalidInput, "finf must have integer coefficients");
    }
    GradingPtr g = make_grading(Grading::standard(k));
    SympAuto<Rational> F0 = slope_auto(Slope(1, 0), f0, g);
    SympAuto<Rational> Finf = slope_auto(Slope(0, 1), finf, g);
    SlopeFactorization<Rational> sf = factorize(compose(Finf, F0));
    IntegralityReport report;
    for (const auto& [s, f] : sf.factors) {
        report.table.emplace_back(s, f.coeffs());
        for (std::size_t j = 0; j < f.coeffs().size(); ++j) {
            if (!f.coeffs()[j].is_integer() && report.integral) {
                report.integral = false;
                report.counterexample = "slope " + s.str() + " c_" + std::to_string(j + 1) + " = " +
                                        f.coeffs()[j].str();
            }
        }
    }
    return report;
}

/// Vector (x, y) direction for cyclic-order checks.
struct Direction {
    long x = 0;
    long y = 0;
};

namespace detail {

inline int half_plane(Direction v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; }

/// Strict angular order in [0, 2pi).
inline bool angle_less(Direction u, Direction v) {
    int hu = half_plane(u), hv = half_plane(v);
    if (hu != hv) return hu < hv;
    return u.x * v.y - u.y * v.x > 0;
}

} // namespace detail

/// True when the directions go once around counterclockwise, all distinct.
inline bool is_ccw_cyclic(const std::vector<Direction>& dirs) {
    const std::size_t n = dirs.size();
    if (n <= 1) return true;
    int descents = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Direction u = dirs[i], v = dirs[(i + 1) % n];
        if (!detail::angle_less(u, v)) {
            if (!detail::angle_less(v, u)) return false;  // same angle
            ++descents;
        }
    }
    return descents == 1;
}

template <CoefficientRing R>
struct VertexWall {
    Direction direction;  // pointing away from the vertex
    SympAuto<R> wall;
    bool incoming = false;
};

/// Composes the walls in the given cyclic order (outgoing as is, incoming
/// inverted) and tests for the identity. Directions must circle the vertex
/// counterclockwise.
template <CoefficientRing R>
bool vertex_consistency(const std::vector<VertexWall<R>>& walls) {
    if (walls.empty()) return true;
    std::vector<Direction> dirs;
    for (const auto& w : walls) dirs.push_back(w.direction);
    if (!is_ccw_cyclic(dirs)) return false;
    SympAuto<R> acc = SympAuto<R>::identity(walls.front().wall.grading_ptr());
    for (const auto& w : walls) {
        acc = compose(acc, w.incoming ? inverse(w.wall) : w.wall);
    }
    return acc.is_identity();
}

} // namespace affscat
