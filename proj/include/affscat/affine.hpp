#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affscat/error.hpp"
#include "affscat/rational.hpp"
#include "affscat/valued_scalar.hpp"

namespace affscat {

/// 2x2 integer matrix, row-major.
struct Mat2 {
    long a = 1, b = 0, c = 0, d = 1;

    static Mat2 identity() { return {}; }
    long det() const { return a * d - b * c; }
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    /// Inverse of a unimodular matrix.
    Mat2 inverse() const {
        long D = det();
        if (D != 1 && D != -1) throw Error(ErrorKind::InvalidInput, "matrix is not unimodular");
        return {d * D, -b * D, -c * D, a * D};
    }
    Mat2 pow(long n) const {
        Mat2 base = n < 0 ? inverse() : *this;
        Mat2 r;
        for (long i = 0; i < (n < 0 ? -n : n); ++i) r = r * base;
        return r;
    }
    std::string str() const {
        return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
               std::to_string(d) + "]]";
    }
};

using RatVec2 = std::array<Rational, 2>;

inline RatVec2 operator*(const Mat2& m, const RatVec2& v) {
    return {Rational(m.a) * v[0] + Rational(m.b) * v[1], Rational(m.c) * v[0] + Rational(m.d) * v[1]};
}
inline RatVec2 operator+(const RatVec2& x, const RatVec2& y) { return {x[0] + y[0], x[1] + y[1]}; }
inline RatVec2 operator-(const RatVec2& x, const RatVec2& y) { return {x[0] - y[0], x[1] - y[1]}; }

/// x -> A x + b with A in GL(2, Z).
struct AffineTransform {
    Mat2 A;
    RatVec2 b{Rational(0), Rational(0)};

    AffineTransform() = default;
    AffineTransform(Mat2 m, RatVec2 t) : A(m), b(std::move(t)) {
        if (A.det() != 1 && A.det() != -1) throw Error(ErrorKind::InvalidInput, "linear part must have det +-1");
    }
    explicit AffineTransform(Mat2 m) : AffineTransform(m, {Rational(0), Rational(0)}) {}

    RatVec2 operator()(const RatVec2& x) const { return A * x + b; }
    /// (*this) o other
    AffineTransform after(const AffineTransform& other) const { return {A * other.A, A * other.b + b}; }
    AffineTransform inverse() const {
        Mat2 Ai = A.inverse();
        RatVec2 t = Ai * b;
        return {Ai, {-t[0], -t[1]}};
    }
    friend bool operator==(const AffineTransform&, const AffineTransform&) = default;
};

/// Loop presented by the chart transitions met along it, in order.
using LoopWord = std::vector<AffineTransform>;

/// t_1 o ... o t_n, so that monodromy(w w') = monodromy(w) o monodromy(w').
inline AffineTransform monodromy(const LoopWord& w) {
    AffineTransform r;
    for (const auto& t : w) r = r.after(t);
    return r;
}

/// The transition (x, y) -> (x + y, y) across the cut of the focus-focus model.
inline AffineTransform focus_focus_transition() { return AffineTransform(Mat2{1, 1, 0, 1}); }

/// Chart of the focus-focus model with the cut along the positive x-axis side:
/// coordinates (y, x + max(y, 0)).
inline RatVec2 focus_focus_chart(const RatVec2& p) {
    if (p[0].is_zero() && p[1].is_zero()) throw Error(ErrorKind::AtSingularPoint, "chart undefined at the singular point");
    Rational shift = p[1].sign() > 0 ? p[1] : Rational(0);
    return {p[1], p[0] + shift};
}

/// If M = g [[1,n],[0,1]] g^-1 for some g in SL(2,Z) with n != 0, returns n.
inline std::optional<long> unipotent_class(const Mat2& M) {
    if (M.det() != 1 || M.a + M.d != 2) return std::nullopt;
    Mat2 N{M.a - 1, M.b, M.c, M.d - 1};
    if (N == Mat2{0, 0, 0, 0}) return std::nullopt;
    // N = n [[-ac, a^2], [-c^2, ac]] with gcd(a, c) = 1
    long g = gcd_long(N.b, N.c);
    long sign = N.b != 0 ? (N.b > 0 ? 1 : -1) : (N.c < 0 ? 1 : -1);
    return sign * g;
}

struct ChainSegment {
    RatVec2 displacement;        // straight step, in the current chart
    AffineTransform transition;  // into the next chart
};

struct ChainWithCovector {
    std::array<long, 2> alpha0{0, 1};
    std::vector<ChainSegment> segments;
};

/// Develops the chain into the tangent space of the first chart and pairs the
/// endpoint with alpha0. The covector alpha0 o L_i is what the step in chart i
/// sees, with L_{i+1} = L_i A_i^-1.
inline Rational rho_pairing(const ChainWithCovector& chain) {
    std::array<Rational, 2> alpha{Rational(chain.alpha0[0]), Rational(chain.alpha0[1])};
    Rational j(0);
    for (const auto& s : chain.segments) {
        j += alpha[0] * s.displacement[0] + alpha[1] * s.displacement[1];
        Mat2 Ai = s.transition.A.inverse();
        alpha = {alpha[0] * Rational(Ai.a) + alpha[1] * Rational(Ai.c),
                 alpha[0] * Rational(Ai.b) + alpha[1] * Rational(Ai.d)};
    }
    if (alpha[0] != Rational(chain.alpha0[0]) || alpha[1] != Rational(chain.alpha0[1])) {
        throw Error(ErrorKind::NotClosed, "transported covector does not return to itself");
    }
    return j;
}

/// Word in a2^{+-1}, a3^{+-1}, generators of the universal cover of SL(2, Z).
struct LiftedWord {
    enum Letter { A2, A2Inv, A3, A3Inv };
    std::vector<Letter> letters;

    static LiftedWord power(Letter base, long n) {
        LiftedWord w;
        Letter inv = base == A2 ? A2Inv : (base == A3 ? A3Inv : (base == A2Inv ? A2 : A3));
        for (long i = 0; i < (n < 0 ? -n : n); ++i) w.letters.push_back(n < 0 ? inv : base);
        return w;
    }
    /// u = a3^6
    static LiftedWord u(long n = 1) { return power(A3, 6 * n); }

    LiftedWord& operator*=(const LiftedWord& o) {
        letters.insert(letters.end(), o.letters.begin(), o.letters.end());
        return *this;
    }
    friend LiftedWord operator*(LiftedWord x, const LiftedWord& y) { return x *= y; }
    LiftedWord pow(long n) const {
        LiftedWord r;
        if (n >= 0) {
            for (long i = 0; i < n; ++i) r *= *this;
            return r;
        }
        LiftedWord inv;
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
            inv.letters.push_back(*it == A2 ? A2Inv : *it == A2Inv ? A2 : *it == A3 ? A3Inv : A3);
        }
        return inv.pow(-n);
    }
    friend bool operator==(const LiftedWord&, const LiftedWord&) = default;

    /// Tokens separated by spaces or '*': a2, a3, u, each with an optional ^n.
    static LiftedWord parse(std::string_view text);
    std::string str() const;
};

inline LiftedWord LiftedWord::parse(std::string_view text) {
    LiftedWord w;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::InvalidInput, "word '" + std::string(text) + "' at position " + std::to_string(i) +
                                                 ": " + why);
    };
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*') {
            ++i;
            continue;
        }
        Letter base;
        long mult = 1;
        if (text.substr(i, 2) == "a2") {
            base = A2;
            i += 2;
        } else if (text.substr(i, 2) == "a3") {
            base = A3;
            i += 2;
        } else if (text[i] == 'u') {
            base = A3;
            mult = 6;
            i += 1;
        } else {
            fail("expected a2, a3 or u");
        }
        long n = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            std::size_t start = i;
            if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            std::string num(text.substr(start, i - start));
            if (num.empty() || num == "-" || num == "+") fail("expected an exponent");
            n = std::stol(num);
        }
        w *= power(base, n * mult);
    }
    return w;
}

inline std::string LiftedWord::str() const {
    std::ostringstream os;
    std::size_t i = 0;
    bool first = true;
    while (i < letters.size()) {
        std::size_t j = i;
        while (j < letters.size() && letters[j] == letters[i]) ++j;
        long n = static_cast<long>(j - i);
        Letter l = letters[i];
        bool inv = l == A2Inv || l == A3Inv;
        if (!first) os << ' ';
        first = false;
        os << ((l == A2 || l == A2Inv) ? "a2" : "a3");
        if (inv || n != 1) os << '^' << (inv ? -n : n);
        i = j;
    }
    return os.str();
}

/// Exponent sums e2, e3 give i(w) = (3 e2 + 2 e3) / 12.
inline Rational i_homomorphism(const LiftedWord& w) {
    long e2 = 0, e3 = 0;
    for (auto l : w.letters) {
        switch (l) {
        case LiftedWord::A2: ++e2; break;
        case LiftedWord::A2Inv: --e2; break;
        case LiftedWord::A3: ++e3; break;
        case LiftedWord::A3Inv: --e3; break;
        }
    }
    return Rational(3 * e2 + 2 * e3, 12);
}

/// Images in SL(2, Z): a2 -> [[0,1],[-1,0]], a3 -> [[0,1],[-1,1]].
inline Mat2 project(const LiftedWord& w) {
    const Mat2 s2{0, 1, -1, 0}, s3{0, 1, -1, 1};
    Mat2 r;
    for (auto l : w.letters) {
        switch (l) {
        case LiftedWord::A2: r = r * s2; break;
        case LiftedWord::A2Inv: r = r * s2.inverse(); break;
        case LiftedWord::A3: r = r * s3; break;
        case LiftedWord::A3Inv: r = r * s3.inverse(); break;
        }
    }
    return r;
}

/// Lift of the focus-focus monodromy [[1,1],[0,1]]: a3^-1 a2, with i = 1/12.
inline LiftedWord focus_focus_lift() { return LiftedWord::parse("a3^-1 a2"); }

/// Writes M (det 1) as a word in T = [[1,1],[0,1]] and S0 = [[0,-1],[1,0]] by
/// the Euclidean algorithm, lifts T -> a3^-1 a2 and S0 -> a2^-1, and appends
/// u^winding. The projection of the result is exactly M.
inline LiftedWord matrix_to_lift(const Mat2& M, long winding) {
    if (M.det() != 1) throw Error(ErrorKind::InvalidInput, "matrix must have determinant 1");
    const LiftedWord liftT = focus_focus_lift();
    const LiftedWord liftS0 = LiftedWord::parse("a2^-1");
    const Mat2 S0inv{0, 1, -1, 0};
    LiftedWord w;
    Mat2 cur = M;
    while (cur.c != 0) {
        // cur = T^q S0 (S0^-1 T^-q cur), with |new c| < |c|
        long q = cur.a / cur.c;
        if (cur.a - q * cur.c < 0) q += (cur.c > 0 ? -1 : 1);
        Mat2 Tq_inv{1, -q, 0, 1};
        cur = S0inv * (Tq_inv * cur);
        w *= liftT.pow(q);
        w *= liftS0;
    }
    if (cur.a == 1) {
        w *= liftT.pow(cur.b);
    } else {
        // -T^-b = S0^2 T^-b
        w *= liftS0;
        w *= liftS0;
        w *= liftT.pow(-cur.b);
    }
    w *= LiftedWord::u(winding);
    return w;
}

struct GaussBonnetReport {
    Rational sum;
    Rational euler_characteristic;
    bool passed = false;
};

inline GaussBonnetReport gauss_bonnet_check(const std::vector<LiftedWord>& singularities, long genus) {
    GaussBonnetReport r;
    for (const auto& w : singularities) r.sum += i_homomorphism(w);
    r.euler_characteristic = Rational(2 - 2 * genus);
    r.passed = r.sum == r.euler_characteristic;
    return r;
}

/// A in GL(2, Z) with multiplicative translation lambda in (K^x)^2, acting by
/// v -> lambda * A(v) where A(v)_i = prod_j v_j^{A_ij}.
struct KAffineTransform {
    Mat2 A;
    std::array<ValuedScalar, 2> lambda{ValuedScalar(Rational(1)), ValuedScalar(Rational(1))};

    std::array<ValuedScalar, 2> operator()(const std::array<ValuedScalar, 2>& v) const {
        return {lambda[0] * pow(v[0], A.a) * pow(v[1], A.b), lambda[1] * pow(v[0], A.c) * pow(v[1], A.d)};
    }
    /// x -> A x + val(lambda)
    AffineTransform real_part() const {
        return AffineTransform(A, {Rational(val(lambda[0]).value()), Rational(val(lambda[1]).value())});
    }
};

namespace detail {

/// N = U D W with U, W unimodular and D = diag(d1, d2), d1 | d2, d_i >= 0.
struct Smith2 {
    Mat2 U, W;
    long d1 = 0, d2 = 0;
};

inline Smith2 smith_normal_form(const Mat2& N) {
    // P N Q = D; track P^-1 and Q^-1 directly
    Mat2 D = N, Pinv, Qinv;
    auto swap_rows = [&] {
        D = Mat2{0, 1, 1, 0} * D;
        Pinv = Pinv * Mat2{0, 1, 1, 0};
    };
    auto swap_cols = [&] {
        D = D * Mat2{0, 1, 1, 0};
        Qinv = Mat2{0, 1, 1, 0} * Qinv;
    };
    auto add_row0_to_row1 = [&](long k) {  // row1 -= k row0
        D = Mat2{1, 0, -k, 1} * D;
        Pinv = Pinv * Mat2{1, 0, k, 1};
    };
    auto add_col0_to_col1 = [&](long k) {  // col1 -= k col0
        D = D * Mat2{1, -k, 0, 1};
        Qinv = Mat2{1, k, 0, 1} * Qinv;
    };
    auto add_row1_to_row0 = [&] {
        D = Mat2{1, 1, 0, 1} * D;
        Pinv = Pinv * Mat2{1, -1, 0, 1};
    };
    for (int guard = 0; guard < 1000; ++guard) {
        if (D == Mat2{0, 0, 0, 0}) break;
        // bring the smallest nonzero entry to (0,0)
        long best = 0;
        int pos = -1;
        long e[4] = {D.a, D.b, D.c, D.d};
        for (int i = 0; i < 4; ++i) {
            if (e[i] != 0 && (pos < 0 || std::abs(e[i]) < best)) {
                best = std::abs(e[i]);
                pos = i;
            }
        }
        if (pos == 1 || pos == 3) swap_cols();
        if (pos == 2 || pos == 3) swap_rows();
        if (D.c % D.a != 0 || D.b % D.a != 0) {
            add_row0_to_row1(D.c / D.a);
            add_col0_to_col1(D.b / D.a);
            continue;
        }
        add_row0_to_row1(D.c / D.a);
        add_col0_to_col1(D.b / D.a);
        if (D.d % D.a != 0) {
            add_row1_to_row0();
            continue;
        }
        break;
    }
    if (D.a < 0) {
        D.a = -D.a;
        Pinv = Pinv * Mat2{-1, 0, 0, 1};
    }
    if (D.d < 0) {
        D.d = -D.d;
        Pinv = Pinv * Mat2{1, 0, 0, -1};
    }
    return {Pinv, Qinv, D.a, D.d};
}

/// (v^M)_i = prod_j v_j^{M_ij}
inline std::array<ValuedScalar, 2> mono_apply(const Mat2& M, const std::array<ValuedScalar, 2>& v) {
    return {pow(v[0], M.a) * pow(v[1], M.b), pow(v[0], M.c) * pow(v[1], M.d)};
}

} // namespace detail

/// One branch of solutions: v = w^{Winv} where w_i is fixed or a free unit.
struct FixedVectorFamily {
    Mat2 Winv;
    std::array<std::optional<ValuedScalar>, 2> w;  // nullopt = free parameter

    int free_dims() const { return (w[0] ? 0 : 1) + (w[1] ? 0 : 1); }
    std::array<ValuedScalar, 2> evaluate(const std::array<ValuedScalar, 2>& params) const {
        std::array<ValuedScalar, 2> ww{w[0] ? *w[0] : params[0], w[1] ? *w[1] : params[1]};
        return detail::mono_apply(Winv, ww);
    }
};

/// Solutions v in (K^x)^2 of lambda * A(v) = v at the working truncation:
/// v^{A - I} = lambda^-1, solved through the Smith form of A - I.
inline std::vector<FixedVectorFamily> k_fixed_vectors(const KAffineTransform& m) {
    const Mat2 N{m.A.a - 1, m.A.b, m.A.c, m.A.d - 1};
    const detail::Smith2 snf = detail::smith_normal_form(N);
    const std::array<ValuedScalar, 2> mu{inverse(m.lambda[0]), inverse(m.lambda[1])};
    // (w^D)^U = mu  =>  w^D = mu^{U^-1}
    const std::array<ValuedScalar, 2> nu = detail::mono_apply(snf.U.inverse(), mu);
    const long d[2] = {snf.d1, snf.d2};
    std::vector<std::vector<std::optional<ValuedScalar>>> choices(2);
    for (int i = 0; i < 2; ++i) {
        if (d[i] == 0) {
            if (!(nu[i] == ValuedScalar(Rational(1), nu[i].order()))) return {};
            choices[i].push_back(std::nullopt);
        } else {
            for (auto& r : nth_roots(nu[i], d[i])) choices[i].push_back(r);
            if (choices[i].empty()) return {};
        }
    }
    std::vector<FixedVectorFamily> out;
    const Mat2 Winv = snf.W.inverse();
    for (const auto& c0 : choices[0]) {
        for (const auto& c1 : choices[1]) out.push_back({Winv, {c0, c1}});
    }
    return out;
}

/// Affine subspace point + span(directions) of Q^2.
struct AffineSubspace {
    RatVec2 point;
    std::vector<RatVec2> directions;  // linearly independent

    bool contains(const RatVec2& x) const {
        RatVec2 v = x - point;
        if (directions.empty()) return v[0].is_zero() && v[1].is_zero();
        if (directions.size() == 2) return true;
        const auto& u = directions[0];
        return (u[0] * v[1] - u[1] * v[0]).is_zero();
    }
    friend bool operator==(const AffineSubspace& x, const AffineSubspace& y) {
        if (x.directions.size() != y.directions.size() || !x.contains(y.point)) return false;
        for (const auto& d : y.directions) {
            if (!x.contains(x.point + d)) return false;
        }
        return true;
    }
};

/// Real fixed points of x -> A x + b, or nullopt when there are none.
inline std::optional<AffineSubspace> fixed_points(const AffineTransform& t) {
    // (A - I) x = -b
    const Rational n11(t.A.a - 1), n12(t.A.b), n21(t.A.c), n22(t.A.d - 1);
    const RatVec2 rhs{-t.b[0], -t.b[1]};
    const Rational det = n11 * n22 - n12 * n21;
    if (!det.is_zero()) {
        return AffineSubspace{{(rhs[0] * n22 - n12 * rhs[1]) / det, (n11 * rhs[1] - n21 * rhs[0]) / det}, {}};
    }
    if (n11.is_zero() && n12.is_zero() && n21.is_zero() && n22.is_zero()) {
        if (!rhs[0].is_zero() || !rhs[1].is_zero()) return std::nullopt;
        return AffineSubspace{{Rational(0), Rational(0)}, {RatVec2{1, 0}, RatVec2{0, 1}}};
    }
    // rank one: use a nonzero row r, check the other row is consistent
    bool first = !(n11.is_zero() && n12.is_zero());
    Rational r1 = first ? n11 : n21, r2 = first ? n12 : n22, c = first ? rhs[0] : rhs[1];
    Rational o1 = first ? n21 : n11, o2 = first ? n22 : n12, oc = first ? rhs[1] : rhs[0];
    // the other row is k times this one
    Rational k = !r1.is_zero() ? o1 / r1 : o2 / r2;
    if (oc != k * c) return std::nullopt;
    RatVec2 p = !r1.is_zero() ? RatVec2{c / r1, Rational(0)} : RatVec2{Rational(0), c / r2};
    return AffineSubspace{p, {RatVec2{-r2, r1}}};
}

/// val of a solution family: val(base) + span of the free directions.
inline AffineSubspace val_span(const FixedVectorFamily& f) {
    std::array<ValuedScalar, 2> ones{ValuedScalar(Rational(1)), ValuedScalar(Rational(1))};
    auto base = f.evaluate(ones);
    AffineSubspace s{{Rational(val(base[0]).value()), Rational(val(base[1]).value())}, {}};
    for (int i = 0; i < 2; ++i) {
        if (!f.w[i]) {
            // w_i = t contributes the column i of Winv to val(v)
            long c0 = i == 0 ? f.Winv.a : f.Winv.b;
            long c1 = i == 0 ? f.Winv.c : f.Winv.d;
            s.directions.push_back({Rational(c0), Rational(c1)});
        }
    }
    return s;
}

} // namespace affscat
