#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "affscat/error.hpp"
#include "affscat/rational.hpp"
#include "affscat/ring.hpp"

namespace affscat {

/// Exponent (a, b) of the monomial xi^a eta^b.
struct Exponent2 {
    long a = 0;
    long b = 0;

    friend auto operator<=>(const Exponent2&, const Exponent2&) = default;
    friend Exponent2 operator+(Exponent2 x, Exponent2 y) { return {x.a + y.a, x.b + y.b}; }
    friend Exponent2 operator-(Exponent2 x, Exponent2 y) { return {x.a - y.a, x.b - y.b}; }
    Exponent2 operator-() const { return {-a, -b}; }
    friend Exponent2 operator*(long n, Exponent2 x) { return {n * x.a, n * x.b}; }
    bool is_zero() const { return a == 0 && b == 0; }
};

/// Integer covector a dx + b dy.
struct Covector {
    long a = 0;
    long b = 0;

    friend auto operator<=>(const Covector&, const Covector&) = default;
    friend Covector operator+(Covector x, Covector y) { return {x.a + y.a, x.b + y.b}; }
    friend Covector operator*(long n, Covector x) { return {n * x.a, n * x.b}; }
    Covector operator-() const { return {-a, -b}; }
    bool is_primitive() const { return gcd_long(a, b) == 1; }
};

inline long wedge(Covector x, Covector y) { return x.a * y.b - x.b * y.a; }

/// Degree bookkeeping for two-variable series. An exponent e is written as
/// -e = n1*alpha1 + n2*alpha2 and gets degree n1*w1 + n2*w2. Terms whose degree
/// reaches the cutoff are dropped (or exceed it, for an inclusive cutoff).
/// Without a cutoff only the coefficient ring truncates.
class Grading {
public:
    Grading(Covector alpha1, Covector alpha2, Rational w1, Rational w2,
            std::optional<Rational> cutoff, bool inclusive = false)
        : alpha1_(alpha1), alpha2_(alpha2), w1_(std::move(w1)), w2_(std::move(w2)),
          cutoff_(std::move(cutoff)), inclusive_(inclusive) {
        det_ = wedge(alpha1_, alpha2_);
        if (det_ <= 0) {
            throw Error(ErrorKind::InvalidInput, "grading basis must be positively oriented");
        }
        if (w1_.sign() <= 0 || w2_.sign() <= 0) {
            throw Error(ErrorKind::InvalidInput, "grading weights must be positive");
        }
        mpz_class wd = lcm_mpz(w1_.den(), w2_.den());
        mpz_class W1 = w1_.num() * (wd / w1_.den());
        mpz_class W2 = w2_.num() * (wd / w2_.den());
        if (!W1.fits_slong_p() || !W2.fits_slong_p() || !wd.fits_slong_p()) {
            throw Error(ErrorKind::InvalidInput, "grading weights too large");
        }
        W1_ = W1.get_si();
        W2_ = W2.get_si();
        Wd_ = wd.get_si();
        if (cutoff_) {
            mpz_class lim = cutoff_->num() * det_ * Wd_;
            mpz_class cd = cutoff_->den();
            if (!lim.fits_slong_p() || !cd.fits_slong_p()) {
                throw Error(ErrorKind::InvalidInput, "grading cutoff too large");
            }
            limit_ = lim.get_si();
            cutoff_den_ = cd.get_si();
        }
    }

    /// Basis dx, dy, unit weights, exclusive cutoff k.
    static Grading standard(long k) { return Grading({1, 0}, {0, 1}, 1, 1, Rational(k)); }
    /// Basis dx, dy, unit weights and no degree cutoff.
    static Grading unbounded() { return Grading({1, 0}, {0, 1}, 1, 1, std::nullopt); }

    Covector alpha1() const { return alpha1_; }
    Covector alpha2() const { return alpha2_; }
    const Rational& weight1() const { return w1_; }
    const Rational& weight2() const { return w2_; }
    const std::optional<Rational>& cutoff() const { return cutoff_; }
    bool inclusive() const { return inclusive_; }
    long det() const { return det_; }

    /// det * (n1, n2) for the exponent e.
    std::pair<long, long> scaled_coords(Exponent2 e) const {
        long s1 = -(e.a * alpha2_.b - e.b * alpha2_.a);
        long s2 = -(alpha1_.a * e.b - alpha1_.b * e.a);
        return {s1, s2};
    }
    std::pair<Rational, Rational> coords(Exponent2 e) const {
        auto [s1, s2] = scaled_coords(e);
        return {Rational(s1, det_), Rational(s2, det_)};
    }
    /// True when -e is a non-negative integer combination of the basis.
    bool in_cone(Exponent2 e) const {
        auto [s1, s2] = scaled_coords(e);
        return s1 >= 0 && s2 >= 0 && s1 % det_ == 0 && s2 % det_ == 0;
    }
    Rational degree(Exponent2 e) const {
        auto [s1, s2] = scaled_coords(e);
        return Rational(s1) * w1_ / Rational(det_) + Rational(s2) * w2_ / Rational(det_);
    }
    /// Sign of the degree, computed without rational arithmetic.
    int degree_sign(Exponent2 e) const {
        __int128 d = scaled_degree(e);
        return d > 0 ? 1 : (d < 0 ? -1 : 0);
    }
    bool keeps(Exponent2 e) const {
        if (!cutoff_) {
            return true;
        }
        __int128 lhs = scaled_degree(e) * cutoff_den_;
        return inclusive_ ? lhs <= limit_ : lhs < limit_;
    }
    bool has_cutoff() const { return cutoff_.has_value(); }

    /// Exponent of z = xi^-p eta^-q where (p, q) = n1*alpha1 + n2*alpha2.
    Exponent2 slope_monomial(long n1, long n2) const {
        return {-(n1 * alpha1_.a + n2 * alpha2_.a), -(n1 * alpha1_.b + n2 * alpha2_.b)};
    }

    friend bool operator==(const Grading& x, const Grading& y) {
        return x.alpha1_ == y.alpha1_ && x.alpha2_ == y.alpha2_ && x.w1_ == y.w1_ && x.w2_ == y.w2_ &&
               x.cutoff_ == y.cutoff_ && x.inclusive_ == y.inclusive_;
    }

    std::string str() const {
        std::ostringstream os;
        os << "basis (" << alpha1_.a << "," << alpha1_.b << "),(" << alpha2_.a << "," << alpha2_.b
           << ") weights " << w1_ << "," << w2_ << " cutoff ";
        os << (cutoff_ ? cutoff_->str() : std::string("none")) << (inclusive_ ? " inclusive" : "");
        return os.str();
    }

private:
    static mpz_class lcm_mpz(const mpz_class& x, const mpz_class& y) {
        mpz_class r;
        mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        return r;
    }
    __int128 scaled_degree(Exponent2 e) const {
        auto [s1, s2] = scaled_coords(e);
        return static_cast<__int128>(s1) * W1_ + static_cast<__int128>(s2) * W2_;
    }

    Covector alpha1_, alpha2_;
    Rational w1_, w2_;
    std::optional<Rational> cutoff_;
    bool inclusive_ = false;
    long det_ = 1;
    long W1_ = 1, W2_ = 1, Wd_ = 1;
    __int128 limit_ = 0;
    long cutoff_den_ = 1;
};

using GradingPtr = std::shared_ptr<const Grading>;

inline GradingPtr make_grading(Grading g) { return std::make_shared<const Grading>(std::move(g)); }

/// Truncated Laurent series in xi, eta with coefficients in R. Truncation is
/// governed by the shared grading and by the coefficient ring itself.
template <CoefficientRing R>
class TruncSeries2 {
public:
    using Terms = std::map<Exponent2, R>;

    explicit TruncSeries2(GradingPtr grading) : grading_(std::move(grading)) {}

    static TruncSeries2 constant(GradingPtr g, const R& c) {
        TruncSeries2 s(std::move(g));
        s.add_term({0, 0}, c);
        return s;
    }
    static TruncSeries2 one(GradingPtr g) { return constant(std::move(g), R(Rational(1))); }
    static TruncSeries2 monomial(GradingPtr g, Exponent2 e, const R& c) {
        TruncSeries2 s(std::move(g));
        s.add_term(e, c);
        return s;
    }

    const Grading& grading() const { return *grading_; }
    const GradingPtr& grading_ptr() const { return grading_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    R coeff(Exponent2 e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? R(Rational(0)) : it->second;
    }
    R constant_term() const { return coeff({0, 0}); }

    void add_term(Exponent2 e, const R& c) {
        if (c.is_zero() || !grading_->keeps(e)) {
            return;
        }
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    void check_compatible(const TruncSeries2& o) const {
        if (grading_ != o.grading_ && !(*grading_ == *o.grading_)) {
            throw Error(ErrorKind::BasisMismatch,
                        "series graded by " + grading_->str() + " vs " + o.grading_->str());
        }
    }

    TruncSeries2 operator-() const {
        TruncSeries2 r(grading_);
        for (const auto& [e, c] : terms_) {
            r.terms_.emplace(e, -c);
        }
        return r;
    }
    TruncSeries2& operator+=(const TruncSeries2& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    TruncSeries2& operator-=(const TruncSeries2& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }
    friend TruncSeries2 operator+(TruncSeries2 x, const TruncSeries2& y) { return x += y; }
    friend TruncSeries2 operator-(TruncSeries2 x, const TruncSeries2& y) { return x -= y; }

    friend TruncSeries2 operator*(const TruncSeries2& x, const TruncSeries2& y) {
        x.check_compatible(y);
        TruncSeries2 r(x.grading_);
        for (const auto& [ex, cx] : x.terms_) {
            for (const auto& [ey, cy] : y.terms_) {
                r.add_term(ex + ey, cx * cy);
            }
        }
        return r;
    }
    TruncSeries2& operator*=(const TruncSeries2& o) { return *this = *this * o; }

    friend TruncSeries2 operator*(const R& c, const TruncSeries2& x) {
        TruncSeries2 r(x.grading_);
        for (const auto& [e, v] : x.terms_) {
            r.add_term(e, c * v);
        }
        return r;
    }

    /// Multiply by the monomial xi^e.a eta^e.b.
    TruncSeries2 shifted(Exponent2 s) const {
        TruncSeries2 r(grading_);
        for (const auto& [e, c] : terms_) {
            r.add_term(e + s, c);
        }
        return r;
    }

    /// Same terms under another grading (terms the new grading drops are lost).
    TruncSeries2 regraded(GradingPtr g) const {
        TruncSeries2 r(std::move(g));
        for (const auto& [e, c] : terms_) {
            r.add_term(e, c);
        }
        return r;
    }

    friend bool operator==(const TruncSeries2& x, const TruncSeries2& y) {
        if (x.terms_.size() != y.terms_.size()) {
            return false;
        }
        auto iy = y.terms_.begin();
        for (const auto& [e, c] : x.terms_) {
            if (iy->first != e || !(iy->second == c)) {
                return false;
            }
            ++iy;
        }
        return true;
    }

    std::optional<Rational> lowest_degree() const {
        std::optional<Rational> best;
        for (const auto& [e, c] : terms_) {
            Rational d = grading_->degree(e);
            if (!best || d < *best) best = d;
        }
        return best;
    }
    TruncSeries2 homogeneous_part(const Rational& d) const {
        TruncSeries2 r(grading_);
        for (const auto& [e, c] : terms_) {
            if (grading_->degree(e) == d) r.terms_.emplace(e, c);
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            if (e.a != 0) os << "*x^" << e.a;
            if (e.b != 0) os << "*y^" << e.b;
        }
        return os.str();
    }

private:
    GradingPtr grading_;
    Terms terms_;
};

/// {xi^a eta^b, xi^c eta^d} = (ad - bc) xi^(a+c) eta^(b+d), extended bilinearly.
template <CoefficientRing R>
TruncSeries2<R> poisson_bracket(const TruncSeries2<R>& f, const TruncSeries2<R>& g) {
    f.check_compatible(g);
    TruncSeries2<R> r(f.grading_ptr());
    for (const auto& [ef, cf] : f.terms()) {
        for (const auto& [eg, cg] : g.terms()) {
            long w = ef.a * eg.b - ef.b * eg.a;
            if (w != 0) {
                r.add_term(ef + eg, R(Rational(w)) * cf * cg);
            }
        }
    }
    return r;
}

/// xi d/dxi
template <CoefficientRing R>
TruncSeries2<R> euler_xi(const TruncSeries2<R>& f) {
    TruncSeries2<R> r(f.grading_ptr());
    for (const auto& [e, c] : f.terms()) {
        r.add_term(e, R(Rational(e.a)) * c);
    }
    return r;
}

/// eta d/deta
template <CoefficientRing R>
TruncSeries2<R> euler_eta(const TruncSeries2<R>& f) {
    TruncSeries2<R> r(f.grading_ptr());
    for (const auto& [e, c] : f.terms()) {
        r.add_term(e, R(Rational(e.b)) * c);
    }
    return r;
}

namespace detail {

inline constexpr long kMaxSeriesIterations = 100000;

/// A term is small when its powers eventually truncate: positive degree under
/// a cutoff, or positive valuation of the coefficient.
template <CoefficientRing R>
bool is_small_term(const Grading& g, Exponent2 e, const R& c) {
    if (g.has_cutoff() && g.degree_sign(e) > 0) {
        return true;
    }
    Valuation v = val(c);
    return !v.is_infinite() && v.value() > 0;
}

} // namespace detail

/// 1/s for a unit s = c(1 + u) with c an invertible constant and u small.
template <CoefficientRing R>
TruncSeries2<R> inverse_unit(const TruncSeries2<R>& s) {
    const R c = s.constant_term();
    if (c.is_zero()) {
        throw Error(ErrorKind::NotAUnit, "series has no constant term: " + s.str());
    }
    const R ci = inverse(c);
    TruncSeries2<R> u(s.grading_ptr());
    for (const auto& [e, a] : s.terms()) {
        if (!e.is_zero()) {
            if (!detail::is_small_term(s.grading(), e, a)) {
                throw Error(ErrorKind::NotAUnit, "term does not vanish under truncation: " + s.str());
            }
            u.add_term(e, -(ci * a));
        }
    }
    // 1/(1+u') = sum (-u')^n, with u already negated
    TruncSeries2<R> sum = TruncSeries2<R>::one(s.grading_ptr());
    TruncSeries2<R> power = sum;
    for (long n = 1;; ++n) {
        power = power * u;
        if (power.is_zero()) {
            break;
        }
        if (n > detail::kMaxSeriesIterations) {
            throw Error(ErrorKind::NotAUnit, "geometric series does not terminate");
        }
        sum += power;
    }
    return ci * sum;
}

template <CoefficientRing R>
TruncSeries2<R> pow(const TruncSeries2<R>& s, long n) {
    if (n < 0) {
        return pow(inverse_unit(s), -n);
    }
    TruncSeries2<R> result = TruncSeries2<R>::one(s.grading_ptr());
    TruncSeries2<R> base = s;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

/// Caches s^n for integer n, computing the inverse lazily.
template <CoefficientRing R>
class PowerCache {
public:
    explicit PowerCache(TruncSeries2<R> base) : pos_{TruncSeries2<R>::one(base.grading_ptr()), base} {}

    const TruncSeries2<R>& get(long n) {
        if (n >= 0) {
            while (static_cast<long>(pos_.size()) <= n) {
                pos_.push_back(pos_.back() * pos_[1]);
            }
            return pos_[n];
        }
        if (neg_.empty()) {
            neg_.push_back(pos_[0]);
            neg_.push_back(inverse_unit(pos_[1]));
        }
        while (static_cast<long>(neg_.size()) <= -n) {
            neg_.push_back(neg_.back() * neg_[1]);
        }
        return neg_[-n];
    }

private:
    std::vector<TruncSeries2<R>> pos_;
    std::vector<TruncSeries2<R>> neg_;
};

/// f(xi*A, eta*B): each monomial xi^a eta^b becomes xi^a eta^b A^a B^b.
template <CoefficientRing R>
TruncSeries2<R> substitute(const TruncSeries2<R>& f, PowerCache<R>& A, PowerCache<R>& B) {
    TruncSeries2<R> r(f.grading_ptr());
    for (const auto& [e, c] : f.terms()) {
        TruncSeries2<R> t = A.get(e.a) * B.get(e.b);
        for (const auto& [et, ct] : t.terms()) {
            r.add_term(e + et, c * ct);
        }
    }
    return r;
}

template <CoefficientRing R>
TruncSeries2<R> substitute(const TruncSeries2<R>& f, const TruncSeries2<R>& A, const TruncSeries2<R>& B) {
    PowerCache<R> pa(A), pb(B);
    return substitute(f, pa, pb);
}

} // namespace affscat
