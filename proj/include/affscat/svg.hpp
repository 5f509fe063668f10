#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "affscat/scatter.hpp"
#include "affscat/tropical.hpp"

namespace affscat {

namespace detail {

inline const char* generation_color(long gen) {
    static const char* palette[] = {"#1f3b73", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#148f77", "#7f8c8d"};
    return palette[std::min<long>(gen, 6)];
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

struct Frame2 {
    double xmin, ymin, xmax, ymax;
    double size = 600;
    double sx(double x) const { return (x - xmin) / (xmax - xmin) * size; }
    double sy(double y) const { return (ymax - y) / (ymax - ymin) * size; }
};

/// Clips base + s v, s >= 0, to the frame. False when the ray misses it.
inline bool clip_ray(const Frame2& f, double bx, double by, double vx, double vy, double& s0, double& s1) {
    s0 = 0;
    s1 = 1e300;
    const double b[2] = {bx, by}, v[2] = {vx, vy}, lo[2] = {f.xmin, f.ymin}, hi[2] = {f.xmax, f.ymax};
    for (int i = 0; i < 2; ++i) {
        if (v[i] == 0) {
            if (b[i] < lo[i] || b[i] > hi[i]) return false;
            continue;
        }
        double a = (lo[i] - b[i]) / v[i], c = (hi[i] - b[i]) / v[i];
        if (a > c) std::swap(a, c);
        s0 = std::max(s0, a);
        s1 = std::min(s1, c);
    }
    return s0 <= s1;
}

} // namespace detail

/// Lines colored by generation, singular points as crosses, events as dots.
inline std::string diagram_svg(const Diagram& d) {
    detail::Frame2 f{-1, -1, 1, 1};
    if (d.window) {
        f = {d.window->xmin.to_double(), d.window->ymin.to_double(), d.window->xmax.to_double(),
             d.window->ymax.to_double()};
    } else {
        std::vector<RatVec2> pts;
        for (const auto& s : d.singular_points) pts.push_back(s.point);
        for (const auto& l : d.lines) pts.push_back(l.base);
        for (const auto& e : d.events) pts.push_back(e.point);
        if (!pts.empty()) {
            f = {1e300, 1e300, -1e300, -1e300};
            for (const auto& p : pts) {
                f.xmin = std::min(f.xmin, p[0].to_double());
                f.xmax = std::max(f.xmax, p[0].to_double());
                f.ymin = std::min(f.ymin, p[1].to_double());
                f.ymax = std::max(f.ymax, p[1].to_double());
            }
        }
        // square, with a margin
        const double cx = (f.xmin + f.xmax) / 2, cy = (f.ymin + f.ymax) / 2;
        const double h = std::max({f.xmax - f.xmin, f.ymax - f.ymin, 1.0}) * 0.65;
        f = {cx - h, cy - h, cx + h, cy + h};
    }
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.size << "\" height=\"" << f.size
       << "\" viewBox=\"0 0 " << f.size << " " << f.size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& l : d.lines) {
        const double bx = l.base[0].to_double(), by = l.base[1].to_double();
        const double vx = static_cast<double>(l.alpha.a), vy = static_cast<double>(l.alpha.b);
        double s0, s1;
        if (!detail::clip_ray(f, bx, by, vx, vy, s0, s1)) continue;
        const bool trivial = l.wall.is_trivial();
        os << "<line x1=\"" << detail::fmt(f.sx(bx + s0 * vx)) << "\" y1=\"" << detail::fmt(f.sy(by + s0 * vy))
           << "\" x2=\"" << detail::fmt(f.sx(bx + s1 * vx)) << "\" y2=\"" << detail::fmt(f.sy(by + s1 * vy))
           << "\" stroke=\"" << detail::generation_color(l.generation) << "\" stroke-width=\""
           << (trivial && d.walls_attached ? "0.5" : "1.5") << "\""
           << (trivial && d.walls_attached ? " stroke-dasharray=\"3,3\"" : "") << "><title>line " << l.id
           << " alpha=(" << l.alpha.a << "," << l.alpha.b << ") ord0=" << l.ord0.str() << "</title></line>\n";
    }
    for (const auto& e : d.events) {
        os << "<circle cx=\"" << detail::fmt(f.sx(e.point[0].to_double())) << "\" cy=\""
           << detail::fmt(f.sy(e.point[1].to_double())) << "\" r=\"2.5\" fill=\"black\"/>\n";
    }
    for (const auto& s : d.singular_points) {
        const double x = f.sx(s.point[0].to_double()), y = f.sy(s.point[1].to_double());
        os << "<path d=\"M" << detail::fmt(x - 5) << " " << detail::fmt(y - 5) << "L" << detail::fmt(x + 5) << " "
           << detail::fmt(y + 5) << "M" << detail::fmt(x - 5) << " " << detail::fmt(y + 5) << "L"
           << detail::fmt(x + 5) << " " << detail::fmt(y - 5) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// One variable: the graph of u over [lo, hi]. Two variables: the square
/// [lo, hi]^2 shaded by which piece attains the minimum.
inline std::string pl_function_svg(const PLFunction& u, double lo = -5, double hi = 5) {
    if (!(lo < hi)) throw Error(ErrorKind::InvalidInput, "empty plotting range");
    std::ostringstream os;
    const double size = 600;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (u.dim() == 1) {
        auto at = [&](double x) {
            double best = 1e300;
            for (const auto& p : u.pieces()) best = std::min(best, p.q.to_double() - static_cast<double>(p.I[0]) * x);
            return best;
        };
        std::vector<double> xs{lo, hi};
        const auto& ps = u.pieces();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                if (ps[i].I[0] == ps[j].I[0]) continue;
                double x = (ps[j].q - ps[i].q).to_double() / static_cast<double>(ps[j].I[0] - ps[i].I[0]);
                if (x > lo && x < hi) xs.push_back(x);
            }
        }
        std::sort(xs.begin(), xs.end());
        double ymin = 1e300, ymax = -1e300;
        for (double x : xs) {
            ymin = std::min(ymin, at(x));
            ymax = std::max(ymax, at(x));
        }
        if (ymax - ymin < 1e-9) {
            ymin -= 1;
            ymax += 1;
        }
        const double pad = (ymax - ymin) * 0.1;
        detail::Frame2 f{lo, ymin - pad, hi, ymax + pad, size};
        os << "<polyline fill=\"none\" stroke=\"#1f3b73\" stroke-width=\"2\" points=\"";
        for (double x : xs) os << detail::fmt(f.sx(x)) << "," << detail::fmt(f.sy(at(x))) << " ";
        os << "\"/>\n";
    } else {
        const int n = 200;
        const double cell = size / n;
        auto argmin = [&](double x, double y) {
            std::size_t arg = 0;
            double best = 1e300;
            for (std::size_t k = 0; k < u.pieces().size(); ++k) {
                const auto& p = u.pieces()[k];
                double v = p.q.to_double() - static_cast<double>(p.I[0]) * x - static_cast<double>(p.I[1]) * y;
                if (v < best) {
                    best = v;
                    arg = k;
                }
            }
            return arg;
        };
        // one rectangle per run of equal pieces along a row
        for (int j = 0; j < n; ++j) {
            const double y = hi - (j + 0.5) * (hi - lo) / n;
            int start = 0;
            std::size_t cur = argmin(lo + 0.5 * (hi - lo) / n, y);
            for (int i = 1; i <= n; ++i) {
                std::size_t next = i < n ? argmin(lo + (i + 0.5) * (hi - lo) / n, y) : cur + 1;
                if (next == cur) continue;
                os << "<rect x=\"" << detail::fmt(start * cell) << "\" y=\"" << detail::fmt(j * cell)
                   << "\" width=\"" << detail::fmt((i - start) * cell) << "\" height=\"" << detail::fmt(cell)
                   << "\" fill=\"" << detail::generation_color(static_cast<long>(cur % 7)) << "\"/>\n";
                start = i;
                cur = next;
            }
        }
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace affscat
