#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "affscat/error.hpp"
#include "affscat/valued_scalar.hpp"

namespace affscat {

using IntVec = std::vector<long>;
using RatPoint = std::vector<Rational>;

/// Laurent polynomial in n = 1 or 2 variables with ValuedScalar coefficients.
class LaurentPoly {
public:
    explicit LaurentPoly(std::size_t dim) : dim_(dim) {
        if (dim < 1 || dim > 2) throw Error(ErrorKind::InvalidInput, "dimension must be 1 or 2");
    }

    std::size_t dim() const { return dim_; }
    const std::map<IntVec, ValuedScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const IntVec& I, const ValuedScalar& c) {
        if (I.size() != dim_) throw Error(ErrorKind::InvalidInput, "exponent has wrong dimension");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(I, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g) {
        if (f.dim_ != g.dim_) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
        LaurentPoly r(f.dim_);
        for (const auto& [I, c] : f.terms_) {
            for (const auto& [J, d] : g.terms_) {
                IntVec K(I.size());
                for (std::size_t i = 0; i < K.size(); ++i) K[i] = I[i] + J[i];
                r.add_term(K, c * d);
            }
        }
        return r;
    }
    friend LaurentPoly operator+(const LaurentPoly& f, const LaurentPoly& g) {
        if (f.dim_ != g.dim_) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
        LaurentPoly r = f;
        for (const auto& [J, d] : g.terms_) r.add_term(J, d);
        return r;
    }
    friend bool operator==(const LaurentPoly& f, const LaurentPoly& g) {
        return f.dim_ == g.dim_ && f.terms_ == g.terms_;
    }

private:
    std::size_t dim_;
    std::map<IntVec, ValuedScalar> terms_;
};

/// Affine function x -> q - <I, x>.
struct AffinePiece {
    IntVec I;
    Rational q;

    Rational operator()(const RatPoint& x) const {
        Rational v = q;
        for (std::size_t i = 0; i < I.size(); ++i) v -= Rational(I[i]) * x[i];
        return v;
    }
    friend auto operator<=>(const AffinePiece& a, const AffinePiece& b) {
        if (auto c = a.I <=> b.I; c != 0) return c;
        return a.q <=> b.q;
    }
    friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// Concave piecewise-linear function given as the minimum of affine pieces.
class PLFunction {
public:
    PLFunction(std::size_t dim, std::vector<AffinePiece> pieces) : dim_(dim), pieces_(std::move(pieces)) {
        for (const auto& p : pieces_) {
            if (p.I.size() != dim_) throw Error(ErrorKind::InvalidInput, "piece has wrong dimension");
        }
        if (pieces_.empty()) throw Error(ErrorKind::ZeroPolynomial, "PL function needs at least one piece");
    }

    std::size_t dim() const { return dim_; }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }

    Rational operator()(const RatPoint& x) const {
        if (x.size() != dim_) throw Error(ErrorKind::InvalidInput, "point has wrong dimension");
        Rational best = pieces_.front()(x);
        for (std::size_t i = 1; i < pieces_.size(); ++i) {
            Rational v = pieces_[i](x);
            if (v < best) best = v;
        }
        return best;
    }

    /// Drops pieces that are never strictly minimal: those whose point (I, q)
    /// is not a vertex of the lower hull of all points. Pieces are sorted.
    PLFunction pruned() const;

    friend bool operator==(const PLFunction& a, const PLFunction& b) {
        return a.dim_ == b.dim_ && a.pieces_ == b.pieces_;
    }

    std::string str() const {
        std::ostringstream os;
        os << "min(";
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (i) os << ", ";
            os << pieces_[i].q;
            for (std::size_t j = 0; j < dim_; ++j) {
                long c = pieces_[i].I[j];
                if (c == 0) continue;
                os << (c > 0 ? " - " : " + ") << (std::abs(c) == 1 ? "" : std::to_string(std::abs(c)))
                   << (dim_ == 1 ? "x" : (j == 0 ? "x" : "y"));
            }
        }
        os << ")";
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const PLFunction& u) { return os << u.str(); }

private:
    std::size_t dim_;
    std::vector<AffinePiece> pieces_;
};

namespace detail {

/// Is (I, q) dominated by a convex combination of the points in `others`
/// (same I, interpolated value <= q)? Subsets of size <= dim + 1 suffice.
inline bool dominated(const AffinePiece& p, const std::vector<AffinePiece>& others) {
    const std::size_t n = others.size();
    const long x = p.I[0];
    if (p.I.size() == 1) {
        for (std::size_t a = 0; a < n; ++a) {
            if (others[a].I[0] == x && others[a].q <= p.q) return true;
            for (std::size_t b = a + 1; b < n; ++b) {
                long xa = others[a].I[0], xb = others[b].I[0];
                if (xa == xb || x < std::min(xa, xb) || x > std::max(xa, xb)) continue;
                Rational lam(x - xa, xb - xa);
                Rational v = others[a].q + lam * (others[b].q - others[a].q);
                if (v <= p.q) return true;
            }
        }
        return false;
    }
    const long y = p.I[1];
    for (std::size_t a = 0; a < n; ++a) {
        const auto& A = others[a];
        if (A.I[0] == x && A.I[1] == y && A.q <= p.q) return true;
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto& B = others[b];
            // segment AB
            long ux = B.I[0] - A.I[0], uy = B.I[1] - A.I[1];
            long wx = x - A.I[0], wy = y - A.I[1];
            if (ux * wy - uy * wx == 0 && (ux != 0 || uy != 0)) {
                long dot = ux * wx + uy * wy, len = ux * ux + uy * uy;
                if (dot >= 0 && dot <= len) {
                    Rational lam(dot, len);
                    if (A.q + lam * (B.q - A.q) <= p.q) return true;
                }
            }
            for (std::size_t c = b + 1; c < n; ++c) {
                const auto& C = others[c];
                long vx = C.I[0] - A.I[0], vy = C.I[1] - A.I[1];
                long det = ux * vy - uy * vx;
                if (det == 0) continue;
                // barycentric coordinates of (x, y) in triangle ABC
                long lb = wx * vy - wy * vx;
                long lc = ux * wy - uy * wx;
                long la = det - lb - lc;
                bool inside = det > 0 ? (la >= 0 && lb >= 0 && lc >= 0) : (la <= 0 && lb <= 0 && lc <= 0);
                if (!inside) continue;
                Rational v = (Rational(la) * A.q + Rational(lb) * B.q + Rational(lc) * C.q) / Rational(det);
                if (v <= p.q) return true;
            }
        }
    }
    return false;
}

} // namespace detail

inline PLFunction PLFunction::pruned() const {
    // one piece per exponent, the lowest
    std::map<IntVec, Rational> best;
    for (const auto& p : pieces_) {
        auto it = best.find(p.I);
        if (it == best.end() || p.q < it->second) best[p.I] = p.q;
    }
    std::vector<AffinePiece> uniq;
    for (const auto& [I, q] : best) uniq.push_back({I, q});
    std::vector<AffinePiece> kept;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        std::vector<AffinePiece> others;
        others.reserve(uniq.size() - 1);
        for (std::size_t j = 0; j < uniq.size(); ++j) {
            if (j != i) others.push_back(uniq[j]);
        }
        if (!detail::dominated(uniq[i], others)) kept.push_back(uniq[i]);
    }
    return PLFunction(dim_, std::move(kept));
}

/// Val(f)(x) = min_I (val(c_I) - <I, x>), pruned.
inline PLFunction val_function(const LaurentPoly& f) {
    if (f.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "Val of the zero polynomial");
    std::vector<AffinePiece> pieces;
    for (const auto& [I, c] : f.terms()) pieces.push_back({I, Rational(val(c).value())});
    return PLFunction(f.dim(), std::move(pieces)).pruned();
}

/// Pointwise sum: all pairwise sums of pieces, pruned.
inline PLFunction pl_add(const PLFunction& u, const PLFunction& v) {
    if (u.dim() != v.dim()) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
    std::vector<AffinePiece> pieces;
    for (const auto& a : u.pieces()) {
        for (const auto& b : v.pieces()) {
            IntVec I(a.I.size());
            for (std::size_t i = 0; i < I.size(); ++i) I[i] = a.I[i] + b.I[i];
            pieces.push_back({I, a.q + b.q});
        }
    }
    return PLFunction(u.dim(), std::move(pieces)).pruned();
}

/// True when one piece attains the minimum on the whole convex region given by
/// its vertices (by concavity, checking the vertices suffices).
inline bool is_affine_on(const PLFunction& u, const std::vector<RatPoint>& region) {
    if (region.empty()) throw Error(ErrorKind::EmptyRegion, "region has no vertices");
    for (const auto& v : region) {
        if (v.size() != u.dim()) throw Error(ErrorKind::InvalidInput, "vertex has wrong dimension");
    }
    if (u.dim() == 2 && region.size() >= 3) {
        int sign = 0;
        const std::size_t n = region.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = region[i];
            const auto& b = region[(i + 1) % n];
            const auto& c = region[(i + 2) % n];
            Rational cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            int s = cr.sign();
            if (s == 0) continue;
            if (sign == 0) sign = s;
            if (s != sign) throw Error(ErrorKind::NonConvexRegion, "region is not convex");
        }
        if (sign == 0) throw Error(ErrorKind::EmptyRegion, "region is degenerate");
    }
    std::vector<Rational> mins;
    for (const auto& v : region) mins.push_back(u(v));
    for (const auto& p : u.pieces()) {
        bool all = true;
        for (std::size_t i = 0; i < region.size() && all; ++i) all = p(region[i]) == mins[i];
        if (all) return true;
    }
    return false;
}

/// min_I (val(c_I) - <I, x>)
inline Rational gauss_seminorm(const LaurentPoly& f, const RatPoint& x) { return val_function(f)(x); }

/// Substitutes z -> q^k z in a polynomial in (q, z): q^m z^n -> q^(m + k n) z^n.
inline LaurentPoly tate_deck_transform(const LaurentPoly& f, long k) {
    if (f.dim() != 2) throw Error(ErrorKind::InvalidInput, "deck transform acts on polynomials in (q, z)");
    LaurentPoly r(2);
    for (const auto& [I, c] : f.terms()) r.add_term({I[0] + k * I[1], I[1]}, c);
    return r;
}

/// inf over terms q^m z^n of (val(c) + m + n x); the deck shift k moves it to x + k.
inline Rational tate_functional(const LaurentPoly& f, const Rational& x) {
    if (f.dim() != 2 || f.is_zero()) throw Error(ErrorKind::InvalidInput, "need a nonzero polynomial in (q, z)");
    std::optional<Rational> best;
    for (const auto& [I, c] : f.terms()) {
        Rational v = Rational(val(c).value()) + Rational(I[0]) + Rational(I[1]) * x;
        if (!best || v < *best) best = v;
    }
    return *best;
}

} // namespace affscat
