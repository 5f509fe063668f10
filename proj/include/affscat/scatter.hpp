#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "affscat/affine.hpp"
#include "affscat/factorize.hpp"
#include "affscat/symp.hpp"
#include "affscat/valued_scalar.hpp"

namespace affscat {

/// A focus-focus point. `alpha` is the global covector that plays the role of
/// dy in the standard chart at the point: its two lines leave along +-alpha.
struct SingularPoint {
    RatVec2 point;
    Covector alpha{0, 1};
    friend bool operator==(const SingularPoint&, const SingularPoint&) = default;
};

enum class LineKind { Initial, Composite };

struct Parents {
    long left = 0;
    long right = 0;
    long n1 = 1;
    long n2 = 1;
    friend bool operator==(const Parents&, const Parents&) = default;
};

namespace detail {

inline Rational cross(const RatVec2& u, const RatVec2& v) { return u[0] * v[1] - u[1] * v[0]; }
inline Rational pair(Covector a, const RatVec2& v) { return Rational(a.a) * v[0] + Rational(a.b) * v[1]; }

} // namespace detail

/// Straight ray base + t * alpha / |alpha|^2, t > 0, so that ord(t) = ord0 + t.
struct Line {
    long id = 0;
    RatVec2 base{Rational(0), Rational(0)};
    Covector alpha{0, 1};
    Rational ord0;
    std::optional<Parents> parents;
    WallFunction<Rational> wall;
    long generation = 0;

    LineKind kind() const { return parents ? LineKind::Composite : LineKind::Initial; }
    RatVec2 heading() const { return {Rational(alpha.a), Rational(alpha.b)}; }
    RatVec2 direction() const {
        RatVec2 v = heading();
        Rational n = detail::pair(alpha, v);
        return {v[0] / n, v[1] / n};
    }
    RatVec2 at(const Rational& t) const {
        RatVec2 d = direction();
        return {base[0] + t * d[0], base[1] + t * d[1]};
    }
    /// ord extended affinely to the whole plane
    Rational ord_at(const RatVec2& x) const { return ord0 + detail::pair(alpha, x - base); }
    /// Parameter of x if x lies on the supporting line (any sign).
    std::optional<Rational> param_of(const RatVec2& x) const {
        RatVec2 v = x - base;
        if (!detail::cross(heading(), v).is_zero()) return std::nullopt;
        return detail::pair(alpha, v);
    }
    bool contains(const RatVec2& x) const {
        auto t = param_of(x);
        return t && t->sign() >= 0;
    }
    friend bool operator==(const Line&, const Line&) = default;
};

struct CollisionEvent {
    RatVec2 point;
    long line1 = 0;  // alpha(line1) ^ alpha(line2) > 0
    Rational t1;
    long line2 = 0;
    Rational t2;
    std::vector<long> newborn;  // increasing slope n2/n1
    friend bool operator==(const CollisionEvent&, const CollisionEvent&) = default;
};

struct Window {
    Rational xmin, ymin, xmax, ymax;
    bool contains(const RatVec2& p) const { return p[0] >= xmin && p[0] <= xmax && p[1] >= ymin && p[1] <= ymax; }
    friend bool operator==(const Window&, const Window&) = default;
};

struct Diagram {
    std::vector<SingularPoint> singular_points;
    std::vector<Line> lines;  // lines[i].id == i
    std::vector<CollisionEvent> events;
    Rational order_cutoff;
    long series_order = 0;
    std::optional<Window> window;
    bool walls_attached = false;

    const Line& line(long id) const { return lines.at(static_cast<std::size_t>(id)); }
    friend bool operator==(const Diagram&, const Diagram&) = default;
};

/// l_+ (id 2i) and l_- (id 2i+1) for every point, both with wall 1 + z where
/// z = xi^-a eta^-b for the line's covector (a, b).
inline std::vector<Line> initial_lines(const std::vector<SingularPoint>& points) {
    std::vector<Line> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& s = points[i];
        if (s.alpha.a == 0 && s.alpha.b == 0) throw Error(ErrorKind::InvalidInput, "zero covector at singular point");
        if (!s.alpha.is_primitive()) throw Error(ErrorKind::InvalidInput, "singular point covector must be primitive");
        for (std::size_t j = 0; j < i; ++j) {
            if (points[j].point == s.point) {
                throw Error(ErrorKind::DuplicateSingularPoint,
                            "singular point (" + s.point[0].str() + "," + s.point[1].str() + ") repeated");
            }
        }
        for (int sign : {1, -1}) {
            Line l;
            l.id = static_cast<long>(out.size());
            l.base = s.point;
            l.alpha = sign * s.alpha;
            l.ord0 = Rational(0);
            l.wall = WallFunction<Rational>::linear();
            out.push_back(std::move(l));
        }
    }
    return out;
}

inline Diagram make_diagram(std::vector<SingularPoint> points, Rational order_cutoff, long series_order,
                            std::optional<Window> window = std::nullopt) {
    if (order_cutoff.sign() <= 0) throw Error(ErrorKind::InvalidInput, "order cutoff must be positive");
    if (series_order < 1) throw Error(ErrorKind::InvalidInput, "series order must be positive");
    Diagram d;
    d.lines = initial_lines(points);
    d.singular_points = std::move(points);
    d.order_cutoff = std::move(order_cutoff);
    d.series_order = series_order;
    d.window = std::move(window);
    return d;
}

/// Adds a free initial ray (not attached to a singular point).
inline long add_ray(Diagram& d, const RatVec2& base, Covector alpha, const Rational& ord0,
                    WallFunction<Rational> wall = WallFunction<Rational>::linear()) {
    if (!d.events.empty()) throw Error(ErrorKind::InvalidInput, "rays must be added before evolving");
    if (alpha.a == 0 && alpha.b == 0) throw Error(ErrorKind::InvalidInput, "zero covector");
    if (ord0.sign() < 0) throw Error(ErrorKind::InvalidInput, "birth order must be non-negative");
    Line l;
    l.id = static_cast<long>(d.lines.size());
    l.base = base;
    l.alpha = alpha;
    l.ord0 = ord0;
    l.wall = std::move(wall);
    d.lines.push_back(std::move(l));
    return d.lines.back().id;
}

namespace detail {

struct Hit {
    RatVec2 point;
    Rational t1, t2;
};

/// Crossing of the supporting rays at parameters t1, t2 > 0; overlapping
/// collinear rays are rejected.
inline std::optional<Hit> intersect(const Line& l, const Line& m) {
    const RatVec2 vl = l.heading(), vm = m.heading();
    const RatVec2 bb = m.base - l.base;
    if (wedge(l.alpha, m.alpha) == 0) {
        if (!cross(vl, bb).is_zero()) return std::nullopt;
        // same supporting line
        const long dot = l.alpha.a * m.alpha.a + l.alpha.b * m.alpha.b;
        const int ahead = pair(l.alpha, bb).sign();
        if (dot > 0 || ahead > 0) {
            throw Error(ErrorKind::DegenerateConfiguration,
                        "lines " + std::to_string(l.id) + " and " + std::to_string(m.id) + " overlap");
        }
        return std::nullopt;
    }
    // cheap rejection in floating point before the exact solve
    const double vlx = vl[0].to_double(), vly = vl[1].to_double();
    const double vmx = vm[0].to_double(), vmy = vm[1].to_double();
    const double fw = vlx * vmy - vly * vmx;
    const double bx = bb[0].to_double(), by = bb[1].to_double();
    const double scale = 1.0 + std::abs(bx) + std::abs(by);
    if ((bx * vmy - by * vmx) / fw < -1e-9 * scale || (bx * vly - by * vlx) / fw < -1e-9 * scale) return std::nullopt;
    // base_l + s1 v_l = base_m + s2 v_m
    const Rational w = cross(vl, vm);
    const Rational S1 = cross(bb, vm) / w;
    const Rational S2 = cross(bb, vl) / w;
    if (S1.sign() <= 0 || S2.sign() <= 0) return std::nullopt;
    RatVec2 p{l.base[0] + S1 * vl[0], l.base[1] + S1 * vl[1]};
    return Hit{p, S1 * pair(l.alpha, vl), S2 * pair(m.alpha, vm)};
}

/// Does the ray pass within floating-point reach of x? Exact check follows.
inline bool near_ray(const Line& l, const RatVec2& x) {
    const RatVec2 h = l.heading();
    const double hx = h[0].to_double(), hy = h[1].to_double();
    const double vx = x[0].to_double() - l.base[0].to_double();
    const double vy = x[1].to_double() - l.base[1].to_double();
    const double dist = std::abs(hx * vy - hy * vx) / std::hypot(hx, hy);
    const double scale = 1.0 + std::abs(vx) + std::abs(vy);
    return dist <= 1e-9 * scale && hx * vx + hy * vy >= -1e-9 * scale;
}

inline long slope_cmp(long n1, long n2, long m1, long m2) { return n2 * m1 - n1 * m2; }

} // namespace detail

struct EvolveOptions {
    std::size_t max_lines = 20000;
};

/// Collides lines pairwise (each pair once, in creation order) and emits the
/// newborns of every collision. Newborn walls are left trivial until
/// attach_walls.
inline Diagram evolve(Diagram d, const EvolveOptions& opt = {}) {
    if (!d.events.empty()) throw Error(ErrorKind::InvalidInput, "diagram is already evolved");
    for (std::size_t i = 0; i < d.lines.size(); ++i) {
        if (d.lines[i].id != static_cast<long>(i)) throw Error(ErrorKind::InvalidInput, "line ids must be 0..n-1");
    }
    const Rational& C = d.order_cutoff;
    std::map<RatVec2, std::size_t> event_at;
    std::set<RatVec2> singular;
    for (const auto& s : d.singular_points) singular.insert(s.point);

    for (std::size_t j = 0; j < d.lines.size(); ++j) {
        for (std::size_t m = 0; m < j; ++m) {
            auto hit = detail::intersect(d.lines[m], d.lines[j]);
            if (!hit) continue;
            if (d.window && !d.window->contains(hit->point)) continue;
            if (singular.count(hit->point)) {
                throw Error(ErrorKind::DegenerateConfiguration, "lines collide at a singular point");
            }
            if (event_at.count(hit->point)) {
                throw Error(ErrorKind::TripleCollision, "three lines meet at (" + hit->point[0].str() + "," +
                                                            hit->point[1].str() + ")");
            }
            const Line& a = d.lines[m];
            const Line& b = d.lines[j];
            const bool a_left = wedge(a.alpha, b.alpha) > 0;
            CollisionEvent e;
            e.point = hit->point;
            e.line1 = a_left ? a.id : b.id;
            e.t1 = a_left ? hit->t1 : hit->t2;
            e.line2 = a_left ? b.id : a.id;
            e.t2 = a_left ? hit->t2 : hit->t1;
            const Line& l1 = d.line(e.line1);
            const Line& l2 = d.line(e.line2);
            const Rational o1 = l1.ord0 + e.t1, o2 = l2.ord0 + e.t2;
            std::vector<std::pair<long, long>> ns;
            for (long n1 = 1; Rational(n1) * o1 + o2 <= C; ++n1) {
                for (long n2 = 1; Rational(n1) * o1 + Rational(n2) * o2 <= C; ++n2) {
                    if (gcd_long(n1, n2) == 1) ns.emplace_back(n1, n2);
                }
            }
            std::sort(ns.begin(), ns.end(), [](auto x, auto y) {
                return detail::slope_cmp(x.first, x.second, y.first, y.second) < 0;
            });
            const long gen = std::max(l1.generation, l2.generation) + 1;
            const Covector a1 = l1.alpha, a2 = l2.alpha;
            const long id1 = l1.id, id2 = l2.id;
            for (auto [n1, n2] : ns) {
                Line l;
                l.id = static_cast<long>(d.lines.size());
                l.base = e.point;
                l.alpha = n1 * a1 + n2 * a2;
                l.ord0 = Rational(n1) * o1 + Rational(n2) * o2;
                l.parents = Parents{id1, id2, n1, n2};
                l.generation = gen;
                e.newborn.push_back(l.id);
                d.lines.push_back(std::move(l));
            }
            if (d.lines.size() > opt.max_lines) {
                throw Error(ErrorKind::DegenerateConfiguration, "line budget exceeded");
            }
            event_at.emplace(e.point, d.events.size());
            d.events.push_back(std::move(e));
        }
    }

    // Only a line's own parents may pass through the point it starts from, and
    // nothing passes through a singular point.
    for (const auto& l : d.lines) {
        for (const auto& s : d.singular_points) {
            if (detail::near_ray(l, s.point)) {
                auto t = l.param_of(s.point);
                if (t && t->sign() > 0) {
                    throw Error(ErrorKind::DegenerateConfiguration,
                                "line " + std::to_string(l.id) + " passes through a singular point");
                }
            }
        }
        for (const auto& e : d.events) {
            if (l.id == e.line1 || l.id == e.line2) continue;
            if (!detail::near_ray(l, e.point)) continue;
            auto t = l.param_of(e.point);
            if (!t || t->sign() < 0) continue;
            if (t->sign() > 0 || std::find(e.newborn.begin(), e.newborn.end(), l.id) == e.newborn.end()) {
                throw Error(ErrorKind::TripleCollision, "line " + std::to_string(l.id) + " meets the collision at (" +
                                                            e.point[0].str() + "," + e.point[1].str() + ")");
            }
        }
    }
    return d;
}

/// Local grading at an event: basis (alpha_1, alpha_2), weights the parents'
/// orders at the collision, inclusive cutoff C.
inline GradingPtr event_grading(const Diagram& d, const CollisionEvent& e) {
    const Line& l1 = d.line(e.line1);
    const Line& l2 = d.line(e.line2);
    return make_grading(Grading(l1.alpha, l2.alpha, l1.ord0 + e.t1, l2.ord0 + e.t2, d.order_cutoff, true));
}

/// Factorizes g_right o g_left at every event, in causal order, and gives each
/// newborn the factor at its slope.
inline Diagram attach_walls(Diagram d) {
    for (const auto& e : d.events) {
        if (e.newborn.empty()) continue;
        const auto& f1 = d.line(e.line1).wall;
        const auto& f2 = d.line(e.line2).wall;
        if (f1.is_trivial() || f2.is_trivial()) continue;  // the walls commute
        GradingPtr g = event_grading(d, e);
        auto sf = factorize(compose(slope_auto(Slope(0, 1), f2, g), slope_auto(Slope(1, 0), f1, g)));
        std::size_t used = 0;
        for (long id : e.newborn) {
            Line& l = d.lines[static_cast<std::size_t>(id)];
            Slope s(l.parents->n1, l.parents->n2);
            auto it = sf.factors.find(s);
            if (it != sf.factors.end()) {
                l.wall = it->second;
                ++used;
            }
        }
        // the boundary slopes carry the incoming walls themselves
        std::size_t boundary = sf.factors.count(Slope(1, 0)) + sf.factors.count(Slope(0, 1));
        if (used + boundary != sf.factors.size()) {
            throw Error(ErrorKind::InconsistentDefect, "factorization produced a slope with no newborn line");
        }
    }
    d.walls_attached = true;
    return d;
}

inline Diagram build_diagram(std::vector<SingularPoint> points, Rational C, long k,
                             std::optional<Window> window = std::nullopt) {
    return attach_walls(evolve(make_diagram(std::move(points), std::move(C), k, std::move(window))));
}

/// The walls around an event in counterclockwise order: outgoing left parent,
/// newborns, outgoing right parent, then both incoming halves.
inline std::vector<VertexWall<Rational>> event_vertex(const Diagram& d, const CollisionEvent& e) {
    GradingPtr g = event_grading(d, e);
    const Line& l1 = d.line(e.line1);
    const Line& l2 = d.line(e.line2);
    auto dir = [](Covector a) { return Direction{a.a, a.b}; };
    std::vector<VertexWall<Rational>> out;
    out.push_back({dir(l1.alpha), slope_auto(Slope(1, 0), l1.wall, g), false});
    for (long id : e.newborn) {
        const Line& l = d.line(id);
        out.push_back({dir(l.alpha), slope_auto(Slope(l.parents->n1, l.parents->n2), l.wall, g), false});
    }
    out.push_back({dir(l2.alpha), slope_auto(Slope(0, 1), l2.wall, g), false});
    out.push_back({dir(-l1.alpha), slope_auto(Slope(1, 0), l1.wall, g), true});
    out.push_back({dir(-l2.alpha), slope_auto(Slope(0, 1), l2.wall, g), true});
    return out;
}

/// Same test as vertex_consistency(event_vertex(d, e)), but the cyclic product
/// is accumulated with wall applications (the inverse of the wall of f is the
/// wall of 1/f), which avoids generic composition and inversion.
inline bool event_consistent(const Diagram& d, const CollisionEvent& e) {
    GradingPtr g = event_grading(d, e);
    const Line& l1 = d.line(e.line1);
    const Line& l2 = d.line(e.line2);
    struct Item {
        Covector dir;
        long n1, n2;
        const WallFunction<Rational>* f;
        bool incoming;
    };
    std::vector<Item> items{{l1.alpha, 1, 0, &l1.wall, false}};
    for (long id : e.newborn) {
        const Line& l = d.line(id);
        items.push_back({l.alpha, l.parents->n1, l.parents->n2, &l.wall, false});
    }
    items.push_back({l2.alpha, 0, 1, &l2.wall, false});
    items.push_back({-l1.alpha, 1, 0, &l1.wall, true});
    items.push_back({-l2.alpha, 0, 1, &l2.wall, true});
    std::vector<Direction> dirs;
    for (const auto& it : items) dirs.push_back({it.dir.a, it.dir.b});
    if (!is_ccw_cyclic(dirs)) return false;
    // w_1 o ... o w_n, built by left application from the end
    WallProduct<Rational> acc(g);
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
        if (it->f->is_trivial()) continue;
        if (!it->incoming) {
            acc.apply_left(it->n1, it->n2, *it->f);
            continue;
        }
        const std::size_t len = detail::wall_length(*g, g->slope_monomial(it->n1, it->n2));
        auto h = detail::poly_pow(*it->f, -1, len);
        acc.apply_left(it->n1, it->n2, WallFunction<Rational>(std::vector<Rational>(h.begin() + 1, h.end())));
    }
    return acc.automorphism().is_identity();
}

/// p_omega of f(eta^-m) in the standard grading of order k equals 1.
inline bool kaffine_invariance_check(const WallFunction<Rational>& f, long m, long k, const Rational& perturb = Rational(0)) {
    auto g = make_grading(Grading::standard(k));
    auto s = TruncSeries2<Rational>::one(g);
    for (std::size_t j = 1; j <= f.coeffs().size(); ++j) s.add_term({0, -m * static_cast<long>(j)}, f.coeff(j));
    if (!perturb.is_zero()) s = (Rational(1) + perturb) * s;
    return p_omega(s) == Rational(1);
}

inline bool kaffine_invariance_check(const Line& l, long k) {
    return kaffine_invariance_check(l.wall, gcd_long(l.alpha.a, l.alpha.b), k);
}

// ---------------------------------------------------------------------------
// transport

using Polyline = std::vector<RatVec2>;

struct Crossing {
    long line = 0;
    std::size_t segment = 0;
    Rational u;  // position on the segment, in (0, 1)
    RatVec2 point;
    bool positive = true;  // alpha ^ (segment direction) > 0
};

/// Wall crossings along the path in order.
inline std::vector<Crossing> path_crossings(const Diagram& d, const Polyline& path) {
    if (path.empty()) throw Error(ErrorKind::InvalidInput, "empty path");
    for (const auto& l : d.lines) {
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (!detail::near_ray(l, path[i]) || !l.contains(path[i])) continue;
            if (i == 0 || i + 1 == path.size()) {
                throw Error(ErrorKind::EndpointOnLine, "path endpoint lies on line " + std::to_string(l.id));
            }
            throw Error(ErrorKind::PathThroughVertex, "path corner lies on line " + std::to_string(l.id));
        }
    }
    std::vector<Crossing> out;
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        const RatVec2 P = path[s], D = path[s + 1] - path[s];
        if (D[0].is_zero() && D[1].is_zero()) continue;
        std::vector<Crossing> here;
        for (const auto& l : d.lines) {
            const RatVec2 al = l.heading();
            const Rational den = detail::cross(D, al);
            const RatVec2 bp = l.base - P;
            if (den.is_zero()) {
                if (!detail::cross(bp, D).is_zero()) continue;
                // collinear: reject if the ray meets the segment
                Rational lo = detail::pair(l.alpha, P - l.base), hi = detail::pair(l.alpha, path[s + 1] - l.base);
                if (lo.sign() >= 0 || hi.sign() >= 0) {
                    throw Error(ErrorKind::PathThroughVertex, "path runs along line " + std::to_string(l.id));
                }
                continue;
            }
            const Rational u = detail::cross(bp, al) / den;
            const Rational sray = detail::cross(bp, D) / den;
            if (u.sign() < 0 || u > Rational(1) || sray.sign() < 0) continue;
            if (sray.is_zero()) {
                throw Error(ErrorKind::PathThroughVertex, "path passes through the start of line " + std::to_string(l.id));
            }
            Crossing c;
            c.line = l.id;
            c.segment = s;
            c.u = u;
            c.point = {P[0] + u * D[0], P[1] + u * D[1]};
            c.positive = detail::cross(al, D).sign() > 0;
            here.push_back(std::move(c));
        }
        std::sort(here.begin(), here.end(), [](const Crossing& x, const Crossing& y) { return x.u < y.u; });
        for (std::size_t i = 1; i < here.size(); ++i) {
            if (here[i].u == here[i - 1].u) {
                throw Error(ErrorKind::PathThroughVertex, "path passes through a collision point");
            }
        }
        out.insert(out.end(), here.begin(), here.end());
    }
    return out;
}

/// Walls are evaluated t-adically in coordinates centered at `point`: the wall
/// of line l becomes f(t^{ord_l(point)} z). `denominator` N makes every
/// exponent integral (the ring variable is t^{1/N}).
struct TAdicFrame {
    RatVec2 point{Rational(0), Rational(0)};
    long denominator = 1;
};

inline GradingPtr tadic_grading() {
    static const GradingPtr g = make_grading(Grading::unbounded());
    return g;
}

/// An evaluation point where every crossed wall is small, chosen among path
/// corners and crossing points to maximize the smallest order.
inline TAdicFrame choose_frame(const Diagram& d, const std::vector<Polyline>& paths) {
    std::set<long> crossed;
    std::vector<RatVec2> candidates;
    for (const auto& p : paths) {
        for (const auto& c : path_crossings(d, p)) {
            crossed.insert(c.line);
            candidates.push_back(c.point);
        }
        candidates.insert(candidates.end(), p.begin(), p.end());
    }
    if (crossed.empty()) return {paths.empty() || paths[0].empty() ? RatVec2{} : paths[0][0], 1};
    std::optional<Rational> best;
    RatVec2 best_point;
    for (const auto& x : candidates) {
        std::optional<Rational> worst;
        for (long id : crossed) {
            Rational o = d.line(id).ord_at(x);
            if (!worst || o < *worst) worst = o;
        }
        if (!best || *worst > *best) {
            best = worst;
            best_point = x;
        }
    }
    if (best->sign() <= 0) {
        throw Error(ErrorKind::InvalidInput, "no evaluation point makes every crossed wall small");
    }
    long N = 1;
    for (long id : crossed) N = lcm_long(N, d.line(id).ord_at(best_point).den().get_si());
    return {best_point, N};
}

/// The wall of line l as an automorphism over ValuedScalar in the given frame,
/// truncated at t^k, inverted when `positive` is false.
inline SympAuto<ValuedScalar> tadic_wall(const Line& l, const TAdicFrame& frame, long k, bool positive) {
    const Rational o = l.ord_at(frame.point);
    if (o.sign() <= 0) {
        throw Error(ErrorKind::InvalidInput, "wall of line " + std::to_string(l.id) + " is not small at the frame point");
    }
    const Rational scaled = o * Rational(frame.denominator);
    if (!scaled.is_integer()) throw Error(ErrorKind::InvalidInput, "frame denominator does not clear the orders");
    const long order = frame.denominator * k;
    const long e = scaled.to_long();
    // z^j survives only while j e < order
    const std::size_t len = static_cast<std::size_t>((order + e - 1) / e) + 1;
    std::vector<ValuedScalar> c;
    for (std::size_t j = 1; j < len; ++j) c.emplace_back(l.wall.coeff(j), order);
    WallFunction<ValuedScalar> f(c);
    if (!positive) {
        auto h = detail::poly_pow(f, -1, len);
        f = WallFunction<ValuedScalar>(std::vector<ValuedScalar>(h.begin() + 1, h.end()));
    }
    return direction_auto(l.alpha.a, l.alpha.b, f, tadic_grading(), ValuedScalar::t(e, order));
}

/// Product c_1 o c_2 o ... o c_n of the crossed walls, phi for a crossing with
/// alpha ^ direction > 0 and phi^-1 otherwise. With this order transport of a
/// concatenated path is the composite of the transports.
inline SympAuto<ValuedScalar> transport(const Diagram& d, const Polyline& path, const TAdicFrame& frame) {
    if (!d.walls_attached) throw Error(ErrorKind::InvalidInput, "attach walls before transporting");
    const long k = d.series_order;
    auto acc = SympAuto<ValuedScalar>::identity(tadic_grading());
    for (const auto& c : path_crossings(d, path)) {
        const Line& l = d.line(c.line);
        if (l.wall.is_trivial()) continue;
        acc = compose(acc, tadic_wall(l, frame, k, c.positive));
    }
    return acc;
}

inline SympAuto<ValuedScalar> transport(const Diagram& d, const Polyline& path) {
    return transport(d, path, choose_frame(d, {path}));
}

// ---------------------------------------------------------------------------
// homotopic path pairs around single events

struct PathPair {
    long event = 0;
    Polyline first, second;  // same endpoints, opposite ways around the event
    TAdicFrame frame;
};

namespace detail {

/// Does the ray meet the closed box [lo, hi]?
inline bool ray_meets_box(const Line& l, const RatVec2& lo, const RatVec2& hi) {
    // Liang-Barsky on s >= 0 with point base + s heading
    std::optional<Rational> smin = Rational(0), smax;
    const RatVec2 dir = l.heading();
    for (int i = 0; i < 2; ++i) {
        if (dir[i].is_zero()) {
            if (l.base[i] < lo[i] || l.base[i] > hi[i]) return false;
            continue;
        }
        Rational a = (lo[i] - l.base[i]) / dir[i], b = (hi[i] - l.base[i]) / dir[i];
        if (a > b) std::swap(a, b);
        if (a > *smin) smin = a;
        if (!smax || b < *smax) smax = b;
    }
    return !smax || *smin <= *smax;
}

struct Box {
    RatVec2 center;
    Rational hx, hy;
    RatVec2 lo() const { return {center[0] - hx, center[1] - hy}; }
    RatVec2 hi() const { return {center[0] + hx, center[1] + hy}; }
    RatVec2 corner(long i) const {
        const RatVec2 c[4] = {{center[0] + hx, center[1] - hy}, {center[0] + hx, center[1] + hy},
                              {center[0] - hx, center[1] + hy}, {center[0] - hx, center[1] - hy}};
        return c[((i % 4) + 4) % 4];
    }
    /// perimeter parameter u in [0, 4), counterclockwise from the lower right corner
    RatVec2 at(const Rational& u) const {
        long i = u.floor();
        Rational f = u - Rational(i);
        const RatVec2 a = corner(i), b = corner(i + 1);
        return {a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])};
    }
};

} // namespace detail

/// Largest box (halving from size 1) around the event met only by the lines
/// through it, with the parents' bases outside and no corner on a line.
inline std::optional<detail::Box> isolating_box(const Diagram& d, const CollisionEvent& e) {
    std::set<long> through{e.line1, e.line2};
    through.insert(e.newborn.begin(), e.newborn.end());
    const Rational aspects[] = {Rational(1), Rational(7, 9), Rational(9, 13), Rational(11, 17), Rational(13, 19)};
    Rational h(1);
    for (int iter = 0; iter < 40; ++iter, h = h / Rational(2)) {
        for (const auto& asp : aspects) {
            detail::Box box{e.point, h, h * asp};
            const RatVec2 lo = box.lo(), hi = box.hi();
            bool ok = true;
            for (const auto& l : d.lines) {
                if (through.count(l.id)) {
                    const auto& b = l.base;
                    if ((l.id == e.line1 || l.id == e.line2) && b[0] >= lo[0] && b[0] <= hi[0] && b[1] >= lo[1] &&
                        b[1] <= hi[1]) {
                        ok = false;
                    }
                    for (long i = 0; i < 4 && ok; ++i) ok = !l.contains(box.corner(i));
                } else if (detail::ray_meets_box(l, lo, hi)) {
                    ok = false;
                }
                if (!ok) break;
            }
            if (ok) return box;
        }
    }
    return std::nullopt;
}

inline std::vector<PathPair> sample_event_path_pairs(const Diagram& d, std::size_t count, std::uint64_t seed) {
    std::vector<long> pool, nontrivial;
    for (std::size_t i = 0; i < d.events.size(); ++i) {
        const auto& e = d.events[i];
        pool.push_back(static_cast<long>(i));
        if (!d.line(e.line1).wall.is_trivial() && !d.line(e.line2).wall.is_trivial()) {
            nontrivial.push_back(static_cast<long>(i));
        }
    }
    if (!nontrivial.empty()) pool = nontrivial;
    std::vector<PathPair> out;
    if (pool.empty()) return out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<long> upos(0, 4 * 97 - 1);
    for (std::size_t attempt = 0; out.size() < count && attempt < 50 * count; ++attempt) {
        const long ei = pool[pick(rng)];
        const auto& e = d.events[static_cast<std::size_t>(ei)];
        auto box = isolating_box(d, e);
        if (!box) continue;
        Rational ux(upos(rng), 97), uy(upos(rng), 97);
        if (ux == uy) continue;
        RatVec2 x = box->at(ux), y = box->at(uy);
        bool on_line = false;
        for (const auto& l : d.lines) on_line = on_line || l.contains(x) || l.contains(y);
        if (on_line) continue;
        Polyline ccw{x}, cw{x};
        // corners strictly between the two perimeter positions, each way round
        Rational hi = uy > ux ? uy : uy + Rational(4);
        for (long i = ux.floor() + 1; Rational(i) < hi; ++i) ccw.push_back(box->corner(i));
        ccw.push_back(y);
        Rational lo = uy < ux ? uy : uy - Rational(4);
        for (long i = ux.ceil() - 1; Rational(i) > lo; --i) {
            cw.push_back(box->corner(i));
        }
        cw.push_back(y);
        PathPair pp{ei, ccw, cw, {e.point, 1}};
        long N = 1;
        for (const auto* path : {&ccw, &cw}) {
            for (const auto& c : path_crossings(d, *path)) {
                N = lcm_long(N, d.line(c.line).ord_at(e.point).den().get_si());
            }
        }
        pp.frame.denominator = N;
        out.push_back(std::move(pp));
    }
    return out;
}

} // namespace affscat
