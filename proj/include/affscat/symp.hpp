#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "affscat/error.hpp"
#include "affscat/series2.hpp"

namespace affscat {

/// Formal symplectomorphism (xi, eta) -> (xi*A, eta*B), stored through the
/// multipliers A and B.
template <CoefficientRing R>
class SympAuto {
public:
    using Series = TruncSeries2<R>;

    explicit SympAuto(GradingPtr g) : A_(Series::one(g)), B_(Series::one(g)) {}
    SympAuto(Series A, Series B) : A_(std::move(A)), B_(std::move(B)) { A_.check_compatible(B_); }

    static SympAuto identity(GradingPtr g) { return SympAuto(std::move(g)); }

    const Series& xi_multiplier() const { return A_; }
    const Series& eta_multiplier() const { return B_; }
    Series xi_image() const { return A_.shifted({1, 0}); }
    Series eta_image() const { return B_.shifted({0, 1}); }
    const Grading& grading() const { return A_.grading(); }
    const GradingPtr& grading_ptr() const { return A_.grading_ptr(); }

    bool is_identity() const {
        const Series one = Series::one(grading_ptr());
        return A_ == one && B_ == one;
    }

    SympAuto regraded(GradingPtr g) const { return SympAuto(A_.regraded(g), B_.regraded(g)); }

    friend bool operator==(const SympAuto& x, const SympAuto& y) { return x.A_ == y.A_ && x.B_ == y.B_; }

    std::string str() const { return "(xi*[" + A_.str() + "], eta*[" + B_.str() + "])"; }

private:
    Series A_;
    Series B_;
};

/// exp({F, .}) applied to xi and eta. With m_0 = 1 and
/// m_n = (F_xi m_{n-1} + {F, m_{n-1}}) / n, the xi-multiplier is sum m_n,
/// where {F, xi} = xi F_xi. Same for eta.
template <CoefficientRing R>
SympAuto<R> exp_ham(const TruncSeries2<R>& F) {
    using Series = TruncSeries2<R>;
    const GradingPtr& g = F.grading_ptr();
    Series F_xi(g), F_eta(g);
    for (const auto& [e, c] : F.terms()) {
        if (e.is_zero()) {
            throw Error(ErrorKind::InvalidInput, "Hamiltonian has a constant term");
        }
        F_xi.add_term(e, R(Rational(-e.b)) * c);
        F_eta.add_term(e, R(Rational(e.a)) * c);
    }
    auto flow = [&](const Series& F_coord) {
        Series sum = Series::one(g);
        Series m = sum;
        for (long n = 1;; ++n) {
            m = R(Rational(1, n)) * (F_coord * m + poisson_bracket(F, m));
            if (m.is_zero()) {
                break;
            }
            if (n > detail::kMaxSeriesIterations) {
                throw Error(ErrorKind::InvalidInput, "Hamiltonian flow does not terminate");
            }
            sum += m;
        }
        return sum;
    };
    return SympAuto<R>(flow(F_xi), flow(F_eta));
}

/// g1 o g2 (g2 applied first): A = A2 * A1(xi A2, eta B2).
template <CoefficientRing R>
SympAuto<R> compose(const SympAuto<R>& g1, const SympAuto<R>& g2) {
    g1.xi_multiplier().check_compatible(g2.xi_multiplier());
    PowerCache<R> pa(g2.xi_multiplier()), pb(g2.eta_multiplier());
    auto A = g2.xi_multiplier() * substitute(g1.xi_multiplier(), pa, pb);
    auto B = g2.eta_multiplier() * substitute(g1.eta_multiplier(), pa, pb);
    return SympAuto<R>(std::move(A), std::move(B));
}

/// Two-sided inverse by fixed-point iteration on g o h = id, i.e.
/// A_h = 1 / A_g(xi A_h, eta B_h). Each pass fixes at least one more degree.
template <CoefficientRing R>
SympAuto<R> inverse(const SympAuto<R>& g) {
    using Series = TruncSeries2<R>;
    Series Ah = inverse_unit(g.xi_multiplier());
    Series Bh = inverse_unit(g.eta_multiplier());
    for (long iter = 0;; ++iter) {
        PowerCache<R> pa(Ah), pb(Bh);
        Series nA = inverse_unit(substitute(g.xi_multiplier(), pa, pb));
        Series nB = inverse_unit(substitute(g.eta_multiplier(), pa, pb));
        if (nA == Ah && nB == Bh) {
            break;
        }
        if (iter > detail::kMaxSeriesIterations) {
            throw Error(ErrorKind::NotAUnit, "inverse iteration does not converge");
        }
        Ah = std::move(nA);
        Bh = std::move(nB);
    }
    return SympAuto<R>(std::move(Ah), std::move(Bh));
}

/// Homogeneous Hamiltonian of degree d read off the linear defect of g,
/// assuming g = id modulo degree d. A term c xi^a eta^b of F contributes
/// -b c to A and a c to B at first order.
template <CoefficientRing R>
TruncSeries2<R> hamiltonian_from_defect(const TruncSeries2<R>& dA, const TruncSeries2<R>& dB) {
    TruncSeries2<R> F(dA.grading_ptr());
    std::vector<Exponent2> exps;
    for (const auto& [e, c] : dA.terms()) exps.push_back(e);
    for (const auto& [e, c] : dB.terms()) exps.push_back(e);
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
    for (Exponent2 e : exps) {
        const R a = dA.coeff(e);
        const R b = dB.coeff(e);
        if (e.is_zero()) {
            throw Error(ErrorKind::InconsistentDefect, "defect has a constant term");
        }
        if (!(R(Rational(e.a)) * a + R(Rational(e.b)) * b).is_zero()) {
            throw Error(ErrorKind::InconsistentDefect,
                        "xi and eta readings disagree at exponent (" + std::to_string(e.a) + "," +
                            std::to_string(e.b) + ")");
        }
        R c = e.b != 0 ? R(Rational(-1, e.b)) * a : R(Rational(1, e.a)) * b;
        F.add_term(e, c);
    }
    return F;
}

/// Degree-d Hamiltonian F with g = exp({F,.}) modulo degrees above d.
/// Returns zero when g has no defect at degree d.
template <CoefficientRing R>
TruncSeries2<R> log_ham(const SympAuto<R>& g, const Rational& d) {
    using Series = TruncSeries2<R>;
    const Series one = Series::one(g.grading_ptr());
    Series dA = g.xi_multiplier() - one;
    Series dB = g.eta_multiplier() - one;
    for (const Series* s : {&dA, &dB}) {
        auto low = s->lowest_degree();
        if (low && *low < d) {
            throw Error(ErrorKind::NotInFiltration,
                        "automorphism has terms of degree " + low->str() + " below " + d.str());
        }
    }
    return hamiltonian_from_defect(dA.homogeneous_part(d), dB.homogeneous_part(d));
}

/// Log-Jacobian test: in log coordinates the Jacobian determinant is
/// (1 + th_xi A/A)(1 + th_eta B/B) - (th_eta A/A)(th_xi B/B), which must be 1.
template <CoefficientRing R>
bool preserves_omega(const SympAuto<R>& g) {
    using Series = TruncSeries2<R>;
    const Series& A = g.xi_multiplier();
    const Series& B = g.eta_multiplier();
    const Series one = Series::one(g.grading_ptr());
    const Series Ai = inverse_unit(A);
    const Series Bi = inverse_unit(B);
    Series J = (one + euler_xi(A) * Ai) * (one + euler_eta(B) * Bi) - (euler_eta(A) * Ai) * (euler_xi(B) * Bi);
    return J == one;
}

/// Largest r with g in Symp^{>=r} at the evaluation point x: the minimum of
/// val(c) - <e, x> over the terms of A - 1 and B - 1. nullopt means +inf.
template <CoefficientRing R>
ExtRational symp_filtration_degree(const SympAuto<R>& g, const std::pair<Rational, Rational>& x) {
    using Series = TruncSeries2<R>;
    const Series one = Series::one(g.grading_ptr());
    ExtRational best;
    for (const Series& s : {g.xi_multiplier() - one, g.eta_multiplier() - one}) {
        for (const auto& [e, c] : s.terms()) {
            Rational v = Rational(val(c).value()) - Rational(e.a) * x.first - Rational(e.b) * x.second;
            if (!best || v < *best) best = v;
        }
    }
    return best;
}

/// Constant term with respect to the reference form dxi/xi ^ deta/eta.
template <CoefficientRing R>
R residue(const TruncSeries2<R>& f) {
    return f.constant_term();
}

namespace detail {

/// exp(x) for a scalar with positive valuation (or zero).
template <CoefficientRing R>
R exp_scalar(const R& x) {
    if (x.is_zero()) {
        return R(Rational(1));
    }
    Valuation v = val(x);
    if (v.is_infinite() || v.value() <= 0) {
        throw Error(ErrorKind::NotAUnit, "exp of a scalar with non-positive valuation: " + x.str());
    }
    R sum(Rational(1));
    R term(Rational(1));
    for (long n = 1;; ++n) {
        term = term * x * R(Rational(1, n));
        if (term.is_zero()) {
            break;
        }
        if (n > kMaxSeriesIterations) {
            throw Error(ErrorKind::NotAUnit, "exp series does not terminate");
        }
        sum = sum + term;
    }
    return sum;
}

/// An integer covector positive on every exponent in the list, if one exists.
inline std::optional<Covector> separating_covector(const std::vector<Exponent2>& exps) {
    if (exps.empty()) {
        return Covector{0, 0};
    }
    // The cone is pointed iff some exponent u1 has every other exponent in the
    // open half-turn counterclockwise of it (or on its ray).
    for (Exponent2 u1 : exps) {
        bool ok = true;
        Exponent2 u2 = u1;
        for (Exponent2 e : exps) {
            long cr = u1.a * e.b - u1.b * e.a;
            long dot = u1.a * e.a + u1.b * e.b;
            if (cr < 0 || (cr == 0 && dot <= 0)) {
                ok = false;
                break;
            }
            // track the most counterclockwise ray
            long c2 = u2.a * e.b - u2.b * e.a;
            if (c2 > 0) u2 = e;
        }
        if (!ok) continue;
        // rot90ccw(u1) + rot90cw(u2)
        Covector ell{-u1.b + u2.b, u1.a - u2.a};
        if (ell.a == 0 && ell.b == 0) {
            ell = {u1.a, u1.b};
        }
        return ell;
    }
    return std::nullopt;
}

} // namespace detail

/// p_Omega(f) = a * exp(Res(w log(1+r)) / Res(w)) for f = a(1 + r), with the
/// volume form w * dxi/xi ^ deta/eta. The logarithm is expanded formally along a
/// direction in which r is small.
template <CoefficientRing R>
R p_omega(const TruncSeries2<R>& f, const TruncSeries2<R>& w) {
    using Series = TruncSeries2<R>;
    f.check_compatible(w);
    const R a = f.constant_term();
    if (a.is_zero() || val(a) != Valuation(0)) {
        throw Error(ErrorKind::NotAUnit, "constant term is not a unit: " + f.str());
    }
    const R res_w = residue(w);
    if (res_w.is_zero()) {
        throw Error(ErrorKind::NotAUnit, "volume form has zero residue");
    }
    const R ai = inverse(a);
    Series r(f.grading_ptr());
    std::vector<Exponent2> big;
    long val_bound = 0;   // largest coefficient precision among valuation-small terms
    long ell_spread = 0;  // largest |<ell, e>| among valuation-small terms
    std::vector<std::pair<Exponent2, R>> small_by_val;
    for (const auto& [e, c] : f.terms()) {
        if (e.is_zero()) continue;
        R rc = ai * c;
        if (rc.is_zero()) continue;
        r.add_term(e, rc);
        Valuation v = val(rc);
        if (v.value() > 0) {
            small_by_val.emplace_back(e, rc);
            val_bound = std::max(val_bound, precision_bound(rc));
        } else if (v.value() < 0) {
            throw Error(ErrorKind::NotAUnit, "term with negative valuation: " + f.str());
        } else {
            big.push_back(e);
        }
    }
    auto ell = detail::separating_covector(big);
    if (!ell) {
        throw Error(ErrorKind::NotAUnit, "no direction in which f/a - 1 is small: " + f.str());
    }
    auto pairing = [&](Exponent2 e) { return ell->a * e.a + ell->b * e.b; };
    for (const auto& [e, c] : small_by_val) {
        ell_spread = std::max(ell_spread, std::abs(pairing(e)));
    }
    long w_spread = 0;
    for (const auto& [e, c] : w.terms()) {
        w_spread = std::max(w_spread, std::abs(pairing(e)));
    }
    // A term of r^n made of j valuation-small and n-j pairing-small factors has
    // valuation >= j and pairing >= (n - j) - j*ell_spread; it can reach the
    // residue only while both stay within range.
    const long max_n = w_spread + val_bound * (1 + ell_spread) + 1;

    R acc(Rational(0));
    Series power = Series::one(f.grading_ptr());
    for (long n = 1; n <= max_n; ++n) {
        power = power * r;
        if (power.is_zero()) {
            break;
        }
        R rn(Rational(0));
        for (const auto& [e, c] : power.terms()) {
            R wc = w.coeff(-e);
            if (!wc.is_zero()) rn = rn + wc * c;
        }
        acc = acc + R(Rational(n % 2 == 1 ? 1 : -1, n)) * rn;
    }
    return a * detail::exp_scalar(acc * inverse(res_w));
}

template <CoefficientRing R>
R p_omega(const TruncSeries2<R>& f) {
    return p_omega(f, TruncSeries2<R>::one(f.grading_ptr()));
}

} // namespace affscat
