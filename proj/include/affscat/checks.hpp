#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "affscat/affine.hpp"
#include "affscat/factorize.hpp"
#include "affscat/scatter.hpp"
#include "affscat/symp.hpp"
#include "affscat/tropical.hpp"

namespace affscat::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

namespace detail {

inline CheckResult timed(int id, std::string name, const std::function<bool(std::ostringstream&)>& body) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    std::ostringstream os;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.passed = body(os);
    } catch (const Error& e) {
        r.passed = false;
        os << "error: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.detail = os.str();
    return r;
}

inline SlopeFactorization<Rational> random_factorization(const GradingPtr& g, std::mt19937_64& rng, long k) {
    std::uniform_int_distribution<long> coef(-5, 5), nslopes(1, 5), comp(0, k - 1);
    SlopeFactorization<Rational> sf(g);
    const long target = nslopes(rng);
    while (static_cast<long>(sf.factors.size()) < target) {
        long n1 = comp(rng), n2 = comp(rng);
        if (n1 + n2 == 0 || n1 + n2 >= k || gcd_long(n1, n2) != 1) continue;
        std::vector<Rational> c;
        for (long j = 1; j * (n1 + n2) < k; ++j) c.emplace_back(coef(rng));
        WallFunction<Rational> f(c);
        if (!f.is_trivial()) sf.set(Slope(n1, n2), f);
    }
    return sf;
}

inline WallFunction<Rational> random_integer_wall(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> coef(-3, 3), len(1, 3);
    for (;;) {
        std::vector<Rational> c;
        for (long j = len(rng); j > 0; --j) c.emplace_back(coef(rng));
        WallFunction<Rational> f(c);
        if (!f.is_trivial()) return f;
    }
}

// terms in the cone n1, n2 >= 0 with n1 + n2 >= min_deg
inline TruncSeries2<Rational> random_series(const GradingPtr& g, std::mt19937_64& rng, long min_deg, long k) {
    std::uniform_int_distribution<long> coef(-3, 3);
    TruncSeries2<Rational> s(g);
    for (long n1 = 0; n1 < k; ++n1) {
        for (long n2 = 0; n1 + n2 < k; ++n2) {
            if (n1 + n2 < min_deg || coef(rng) == 0) continue;
            s.add_term({-n1, -n2}, Rational(coef(rng)));
        }
    }
    return s;
}

inline LaurentPoly random_laurent(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_int_distribution<long> ex(-3, 3), tp(0, 4), co(-3, 3), nterms(1, 5);
    LaurentPoly f(dim);
    const long n = nterms(rng);
    while (static_cast<long>(f.terms().size()) < n) {
        IntVec I(dim);
        for (auto& i : I) i = ex(rng);
        const long c = co(rng);
        if (c == 0) continue;
        f.add_term(I, ValuedScalar::monomial(Rational(c), tp(rng)) + ValuedScalar::t(5));
    }
    return f;
}

inline RatPoint random_point(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 7);
    RatPoint x(dim);
    for (auto& v : x) v = Rational(num(rng), den(rng));
    return x;
}

} // namespace detail

/// Four focus-focus points in general position; scale shrinks the picture,
/// which makes more lines collide below the order cutoff.
inline std::vector<SingularPoint> sample_singular_points(const Rational& scale = Rational(1)) {
    std::vector<SingularPoint> pts{{{Rational(0), Rational(0)}, {0, 1}},
                                   {{Rational(31, 10), Rational(9, 7)}, {1, 0}},
                                   {{Rational(11, 13), Rational(-23, 11)}, {1, 1}},
                                   {{Rational(-17, 9), Rational(41, 10)}, {1, -1}}};
    for (auto& p : pts) {
        p.point[0] *= scale;
        p.point[1] *= scale;
    }
    return pts;
}

inline CheckResult factorization_round_trip(std::uint64_t seed) {
    return detail::timed(1, "factorization round-trip", [&](std::ostringstream& os) {
        const long k = 8;
        auto g = make_grading(Grading::standard(k));
        std::mt19937_64 rng(seed);
        const auto start = std::chrono::steady_clock::now();
        for (int i = 0; i < 200; ++i) {
            auto sf = detail::random_factorization(g, rng, k);
            if (!(factorize(ordered_product(sf)) == sf)) {
                os << "sample " << i << " does not round-trip";
                return false;
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        os << "200/200 at k=8";
        if (secs >= 30.0) os << "; over the 30s budget";
        return secs < 30.0;
    });
}

inline CheckResult pentagon() {
    return detail::timed(2, "pentagon configuration", [](std::ostringstream& os) {
        const long k = 12;
        auto g = make_grading(Grading::standard(k));
        const auto lin = WallFunction<Rational>::linear();
        auto F0 = slope_auto(Slope(1, 0), lin, g);
        auto Finf = slope_auto(Slope(0, 1), lin, g);
        auto sf = factorize(compose(Finf, F0));
        bool ok = sf.factors.size() == 3 && sf.at(Slope(1, 0)) == lin && sf.at(Slope(1, 1)) == lin &&
                  sf.at(Slope(0, 1)) == lin;
        // direct composition oracle
        auto F11 = slope_auto(Slope(1, 1), lin, g);
        const bool oracle = compose(F0, compose(F11, Finf)) == compose(Finf, F0);
        os << sf.factors.size() << " nontrivial slopes at k=12; direct composition "
           << (oracle ? "agrees" : "disagrees");
        return ok && oracle;
    });
}

inline CheckResult integrality(std::uint64_t seed) {
    return detail::timed(3, "integrality", [&](std::ostringstream& os) {
        std::mt19937_64 rng(seed + 1);
        long coefficients = 0;
        for (int i = 0; i < 50; ++i) {
            auto f0 = detail::random_integer_wall(rng), finf = detail::random_integer_wall(rng);
            auto r = integrality_probe(f0, finf, 8);
            if (!r.integral) {
                os << "pair " << i << ": " << r.counterexample;
                return false;
            }
            for (const auto& row : r.table) coefficients += static_cast<long>(row.second.size());
        }
        os << "50 pairs at k=8, " << coefficients << " coefficients, all integers";
        return true;
    });
}

inline CheckResult gauss_bonnet() {
    return detail::timed(4, "Gauss-Bonnet checksums", [](std::ostringstream& os) {
        auto sphere = gauss_bonnet_check(std::vector<LiftedWord>(24, focus_focus_lift()), 0);
        auto six = gauss_bonnet_check(std::vector<LiftedWord>(6, focus_focus_lift().pow(4)), 0);
        auto torus = gauss_bonnet_check({}, 1);
        os << "24 x 1/12 = " << sphere.sum << ", 6 x 1/3 = " << six.sum << ", torus " << torus.sum;
        return sphere.passed && sphere.sum == Rational(2) && six.passed && six.sum == Rational(2) && torus.passed &&
               torus.sum == Rational(0);
    });
}

inline CheckResult tropical(std::uint64_t seed) {
    return detail::timed(5, "tropical suite", [&](std::ostringstream& os) {
        std::mt19937_64 rng(seed + 2);
        for (int i = 0; i < 100; ++i) {
            const std::size_t dim = 1 + i % 2;
            auto f = detail::random_laurent(rng, dim), g = detail::random_laurent(rng, dim);
            if (!(val_function(f * g) == pl_add(val_function(f), val_function(g)))) {
                os << "additivity fails on pair " << i;
                return false;
            }
        }
        for (int i = 0; i < 1000; ++i) {
            const std::size_t dim = 1 + i % 2;
            PLFunction u = val_function(detail::random_laurent(rng, dim));
            RatPoint p = detail::random_point(rng, dim), q = detail::random_point(rng, dim), m(dim);
            for (std::size_t d = 0; d < dim; ++d) m[d] = (p[d] + q[d]) / Rational(2);
            if (u(m) < (u(p) + u(q)) / Rational(2)) {
                os << "concavity fails at pair " << i;
                return false;
            }
        }
        // f = c t^v z^I (1 + t z) and its inverse mod t^T: affine on x < 1, kinked across 1
        std::uniform_int_distribution<long> e(-3, 3), v(0, 3), c(1, 4);
        const long T = 40;
        for (int i = 0; i < 20; ++i) {
            const long I = e(rng), vv = v(rng);
            const Rational cc(c(rng));
            LaurentPoly f(1), g(1);
            f.add_term({I}, ValuedScalar::monomial(cc, vv, T));
            f.add_term({I + 1}, ValuedScalar::monomial(cc, vv + 1, T));
            for (long j = 0; j < T - 2 * vv; ++j) {
                g.add_term({j - I}, ValuedScalar::monomial((j % 2 ? Rational(-1) : Rational(1)) / cc, j - vv, T));
            }
            const std::vector<RatPoint> inside{{Rational(-5, 2)}, {Rational(1, 2)}}, across{{Rational(0)}, {Rational(2)}};
            if (!is_affine_on(val_function(f), inside) || !is_affine_on(val_function(g), inside) ||
                is_affine_on(val_function(f), across)) {
                os << "affine detection fails on pair " << i;
                return false;
            }
        }
        os << "100 additivity pairs, 1000 concavity pairs, 20 unit/inverse pairs";
        return true;
    });
}

inline CheckResult scattering(std::uint64_t seed, long k = 6) {
    return detail::timed(6, "scattering consistency", [&](std::ostringstream& os) {
        const auto all = sample_singular_points();
        std::vector<std::vector<SingularPoint>> configs;
        for (std::size_t n = 1; n <= all.size(); ++n) configs.emplace_back(all.begin(), all.begin() + n);
        configs.push_back(sample_singular_points(Rational(1, 2)));
        long events = 0, pairs = 0, walls = 0;
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t ci = 0; ci < configs.size(); ++ci) {
            Diagram d = build_diagram(configs[ci], Rational(k), k);
            for (const auto& e : d.events) {
                if (!vertex_consistency(event_vertex(d, e))) {
                    os << "config " << ci << ": vertex at (" << e.point[0] << "," << e.point[1] << ") inconsistent";
                    return false;
                }
                ++events;
            }
            for (const auto& pp : sample_event_path_pairs(d, 20, seed + ci)) {
                if (!(transport(d, pp.first, pp.frame) == transport(d, pp.second, pp.frame))) {
                    os << "config " << ci << ": transports around event " << pp.event << " differ";
                    return false;
                }
                ++pairs;
            }
            for (const auto& l : d.lines) {
                if (!kaffine_invariance_check(l, k)) {
                    os << "config " << ci << ": wall of line " << l.id << " has p_omega != 1";
                    return false;
                }
                ++walls;
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        os << configs.size() << " diagrams at C=k=" << k << ": " << events << " vertices, " << pairs
           << " path pairs, " << walls << " walls";
        if (secs >= 60.0) os << "; over the 60s budget";
        return pairs >= 20 && secs < 60.0;
    });
}

inline CheckResult poisson_kernel(std::uint64_t seed, long k = 6) {
    return detail::timed(7, "Poisson kernel", [&](std::ostringstream& os) {
        auto g = make_grading(Grading::standard(k));
        std::mt19937_64 rng(seed + 3);
        for (int i = 0; i < 100; ++i) {
            auto f = detail::random_series(g, rng, 0, k), h = detail::random_series(g, rng, 0, k),
                 u = detail::random_series(g, rng, 0, k);
            auto jac = poisson_bracket(f, poisson_bracket(h, u)) + poisson_bracket(h, poisson_bracket(u, f)) +
                       poisson_bracket(u, poisson_bracket(f, h));
            auto leib = poisson_bracket(f, h * u) - (poisson_bracket(f, h) * u + h * poisson_bracket(f, u));
            if (!jac.is_zero() || !leib.is_zero()) {
                os << "Jacobi/Leibniz fails on triple " << i;
                return false;
            }
        }
        long autos = 0;
        for (int i = 0; i < 20; ++i) {
            auto F = detail::random_series(g, rng, 1, k);
            auto phi = exp_ham(F), back = exp_ham(-F), inv = inverse(phi);
            if (!compose(phi, back).is_identity() || !(inv == back) || !compose(inv, phi).is_identity()) {
                os << "exp_ham/inverse round-trip fails on sample " << i;
                return false;
            }
            for (const auto* a : {&phi, &back, &inv}) {
                if (!preserves_omega(*a)) {
                    os << "sample " << i << " does not preserve omega";
                    return false;
                }
                ++autos;
            }
        }
        os << "100 triples at k=" << k << ", 20 round-trips, " << autos << " automorphisms preserve omega";
        return true;
    });
}

inline CheckResult fixed_vectors() {
    return detail::timed(8, "fixed-vector solver", [](std::ostringstream& os) {
        const Mat2 T{1, 1, 0, 1};
        const std::array<ValuedScalar, 2> one{ValuedScalar(1), ValuedScalar(1)};
        KAffineTransform ff{T, one};
        auto fam = k_fixed_vectors(ff);
        if (fam.size() != 1 || fam[0].free_dims() != 1) {
            os << "lambda = (1,1): expected one 1-parameter family, got " << fam.size();
            return false;
        }
        for (long e = -3; e <= 3; ++e) {
            auto v = fam[0].evaluate({ValuedScalar::t(e) + ValuedScalar(2), ValuedScalar::t(e) + ValuedScalar(2)});
            auto w = ff(v);
            if (!(w[0] == v[0]) || !(w[1] == v[1])) {
                os << "family member at parameter t^" << e << " is not fixed";
                return false;
            }
        }
        KAffineTransform shifted{T, {ValuedScalar(1), ValuedScalar::t(1)}};
        if (!k_fixed_vectors(shifted).empty()) {
            os << "lambda = (1,t): expected no solutions";
            return false;
        }
        auto real = fixed_points(ff.real_part());
        if (!real || !(val_span(fam[0]) == *real)) {
            os << "val of the family differs from the real fixed axis";
            return false;
        }
        if (fixed_points(shifted.real_part())) {
            os << "real part of lambda = (1,t) has a fixed point";
            return false;
        }
        os << "lambda=(1,1): one family, val = fixed axis; lambda=(1,t): empty";
        return true;
    });
}

inline std::vector<CheckResult> run_all(std::uint64_t seed, long k = 6) {
    return {factorization_round_trip(seed), pentagon(),           integrality(seed),       gauss_bonnet(),
            tropical(seed),                 scattering(seed, k), poisson_kernel(seed, k), fixed_vectors()};
}

} // namespace affscat::checks
