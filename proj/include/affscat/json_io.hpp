#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "affscat/affine.hpp"
#include "affscat/factorize.hpp"
#include "affscat/scatter.hpp"
#include "affscat/svg.hpp"
#include "affscat/tropical.hpp"

namespace affscat {

using Json = nlohmann::ordered_json;

/// Parse errors become InvalidInput with the parser's position message.
inline Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
}

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline long to_long(const Json& j) {
    if (!j.is_number_integer()) bad("expected an integer, got " + j.dump());
    return j.get<long>();
}

} // namespace detail

// rationals travel as strings so nothing is rounded
inline Json to_json(const Rational& q) { return q.str(); }

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    detail::bad("expected a rational (string or integer), got " + j.dump());
}

inline Json to_json(const RatVec2& p) { return Json::array({to_json(p[0]), to_json(p[1])}); }

inline RatVec2 point_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) detail::bad("expected a point [x, y], got " + j.dump());
    return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline Json to_json(Covector a) { return Json::array({a.a, a.b}); }

inline Covector covector_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) detail::bad("expected a covector [a, b], got " + j.dump());
    return {detail::to_long(j[0]), detail::to_long(j[1])};
}

/// [c_1, c_2, ...] for 1 + c_1 z + c_2 z^2 + ...
inline Json to_json(const WallFunction<Rational>& f) {
    Json out = Json::array();
    for (const auto& c : f.coeffs()) out.push_back(to_json(c));
    return out;
}

inline WallFunction<Rational> wall_from_json(const Json& j) {
    if (!j.is_array()) detail::bad("expected a coefficient list, got " + j.dump());
    std::vector<Rational> c;
    for (const auto& x : j) c.push_back(rational_from_json(x));
    return WallFunction<Rational>(std::move(c));
}

/// Either [x, y] (covector dy) or {"point": [x, y], "alpha": [a, b]}.
inline std::vector<SingularPoint> singular_points_from_json(const Json& j) {
    if (!j.is_array()) detail::bad("singular points must be a list");
    std::vector<SingularPoint> out;
    for (const auto& s : j) {
        if (s.is_array()) {
            out.push_back({point_from_json(s), {0, 1}});
        } else {
            SingularPoint p{point_from_json(detail::field(s, "point")), {0, 1}};
            if (s.contains("alpha")) p.alpha = covector_from_json(s.at("alpha"));
            out.push_back(p);
        }
    }
    return out;
}

inline Json to_json(const Diagram& d) {
    Json out;
    out["order_cutoff"] = to_json(d.order_cutoff);
    out["series_order"] = d.series_order;
    if (d.window) {
        out["window"] = Json::array(
            {to_json(d.window->xmin), to_json(d.window->ymin), to_json(d.window->xmax), to_json(d.window->ymax)});
    } else {
        out["window"] = nullptr;
    }
    out["walls_attached"] = d.walls_attached;
    Json pts = Json::array();
    for (const auto& s : d.singular_points) pts.push_back({{"point", to_json(s.point)}, {"alpha", to_json(s.alpha)}});
    out["singular_points"] = pts;
    Json lines = Json::array();
    for (const auto& l : d.lines) {
        Json jl;
        jl["id"] = l.id;
        jl["base"] = to_json(l.base);
        jl["alpha"] = to_json(l.alpha);
        jl["ord0"] = to_json(l.ord0);
        if (l.parents) {
            jl["parents"] = {{"left", l.parents->left}, {"right", l.parents->right}, {"n1", l.parents->n1},
                             {"n2", l.parents->n2}};
        } else {
            jl["parents"] = nullptr;
        }
        jl["generation"] = l.generation;
        jl["wall"] = to_json(l.wall);
        lines.push_back(jl);
    }
    out["lines"] = lines;
    Json events = Json::array();
    for (const auto& e : d.events) {
        events.push_back({{"point", to_json(e.point)},
                          {"line1", e.line1},
                          {"t1", to_json(e.t1)},
                          {"line2", e.line2},
                          {"t2", to_json(e.t2)},
                          {"newborn", e.newborn}});
    }
    out["events"] = events;
    return out;
}

inline Diagram diagram_from_json(const Json& j) {
    using detail::field;
    Diagram d;
    d.order_cutoff = rational_from_json(field(j, "order_cutoff"));
    d.series_order = detail::to_long(field(j, "series_order"));
    if (j.contains("window") && !j.at("window").is_null()) {
        const Json& w = j.at("window");
        if (!w.is_array() || w.size() != 4) detail::bad("window must be [xmin, ymin, xmax, ymax]");
        d.window = Window{rational_from_json(w[0]), rational_from_json(w[1]), rational_from_json(w[2]),
                          rational_from_json(w[3])};
    }
    if (j.contains("walls_attached")) d.walls_attached = j.at("walls_attached").get<bool>();
    d.singular_points = singular_points_from_json(field(j, "singular_points"));
    for (const auto& jl : field(j, "lines")) {
        Line l;
        l.id = detail::to_long(field(jl, "id"));
        if (l.id != static_cast<long>(d.lines.size())) detail::bad("line ids must be 0..n-1 in order");
        l.base = point_from_json(field(jl, "base"));
        l.alpha = covector_from_json(field(jl, "alpha"));
        l.ord0 = rational_from_json(field(jl, "ord0"));
        if (jl.contains("parents") && !jl.at("parents").is_null()) {
            const Json& p = jl.at("parents");
            l.parents = Parents{detail::to_long(field(p, "left")), detail::to_long(field(p, "right")),
                                detail::to_long(field(p, "n1")), detail::to_long(field(p, "n2"))};
        }
        if (jl.contains("generation")) l.generation = detail::to_long(jl.at("generation"));
        if (jl.contains("wall")) l.wall = wall_from_json(jl.at("wall"));
        d.lines.push_back(std::move(l));
    }
    const long n = static_cast<long>(d.lines.size());
    auto check_id = [n](long id) {
        if (id < 0 || id >= n) detail::bad("line id " + std::to_string(id) + " out of range");
        return id;
    };
    for (const auto& l : d.lines) {
        if (l.parents) {
            check_id(l.parents->left);
            check_id(l.parents->right);
        }
    }
    if (j.contains("events")) {
        for (const auto& je : j.at("events")) {
            CollisionEvent e;
            e.point = point_from_json(field(je, "point"));
            e.line1 = check_id(detail::to_long(field(je, "line1")));
            e.t1 = rational_from_json(field(je, "t1"));
            e.line2 = check_id(detail::to_long(field(je, "line2")));
            e.t2 = rational_from_json(field(je, "t2"));
            for (const auto& id : field(je, "newborn")) e.newborn.push_back(check_id(detail::to_long(id)));
            d.events.push_back(std::move(e));
        }
    }
    return d;
}

/// "json" or "svg".
inline std::string export_diagram(const Diagram& d, const std::string& format) {
    if (format == "json") return to_json(d).dump(2) + "\n";
    if (format == "svg") return diagram_svg(d);
    throw Error(ErrorKind::UnsupportedFormat, "unknown export format '" + format + "'");
}

inline Diagram import_diagram(const std::string& text) { return diagram_from_json(parse_json(text)); }

inline Json to_json(const SlopeFactorization<Rational>& sf) {
    Json out = Json::array();
    for (const auto& [s, f] : sf.factors) out.push_back({{"slope", Json::array({s.n1, s.n2})}, {"wall", to_json(f)}});
    return out;
}

/// A rational constant, {"t": e, "c": q} for c t^e, or a list of those.
inline ValuedScalar valued_scalar_from_json(const Json& j, long order = ValuedScalar::kDefaultOrder) {
    if (j.is_string() || j.is_number_integer()) return ValuedScalar(rational_from_json(j), order);
    if (j.is_object()) {
        return ValuedScalar::monomial(rational_from_json(detail::field(j, "c")), detail::to_long(detail::field(j, "t")),
                                      order);
    }
    if (j.is_array()) {
        ValuedScalar s(Rational(0), order);
        for (const auto& x : j) s += valued_scalar_from_json(x, order);
        return s;
    }
    detail::bad("expected a coefficient, got " + j.dump());
}

/// {"variables": 1 | 2, "terms": [{"exponent": [...], "coeff": ...}, ...]}
inline LaurentPoly laurent_from_json(const Json& j) {
    const long dim = detail::to_long(detail::field(j, "variables"));
    if (dim < 1 || dim > 2) detail::bad("variables must be 1 or 2");
    LaurentPoly f(static_cast<std::size_t>(dim));
    for (const auto& t : detail::field(j, "terms")) {
        IntVec I;
        for (const auto& e : detail::field(t, "exponent")) I.push_back(detail::to_long(e));
        f.add_term(I, valued_scalar_from_json(detail::field(t, "coeff")));
    }
    return f;
}

inline Json to_json(const PLFunction& u) {
    Json pieces = Json::array();
    for (const auto& p : u.pieces()) pieces.push_back({{"exponent", p.I}, {"value", to_json(p.q)}});
    return {{"variables", u.dim()}, {"pieces", pieces}, {"formula", u.str()}};
}

/// [[a, b], [c, d]]
inline Mat2 matrix_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
        j[1].size() != 2) {
        detail::bad("expected a 2x2 integer matrix, got " + j.dump());
    }
    return {detail::to_long(j[0][0]), detail::to_long(j[0][1]), detail::to_long(j[1][0]), detail::to_long(j[1][1])};
}

inline Json to_json(const Mat2& m) { return Json::array({Json::array({m.a, m.b}), Json::array({m.c, m.d})}); }

/// A matrix, or {"A": matrix, "b": [x, y]}.
inline AffineTransform affine_from_json(const Json& j) {
    if (j.is_array()) return AffineTransform(matrix_from_json(j));
    RatVec2 b{Rational(0), Rational(0)};
    if (j.contains("b")) b = point_from_json(j.at("b"));
    return AffineTransform(matrix_from_json(detail::field(j, "A")), b);
}

inline Json to_json(const AffineTransform& t) { return {{"A", to_json(t.A)}, {"b", to_json(t.b)}}; }

} // namespace affscat
