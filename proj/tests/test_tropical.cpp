#include <random>

#include <gtest/gtest.h>

#include "affscat/tropical.hpp"

using namespace affscat;

namespace {

LaurentPoly poly1(std::initializer_list<std::pair<long, std::pair<long, long>>> terms) {
    // exponent -> (coefficient, t-power)
    LaurentPoly f(1);
    for (const auto& [e, ct] : terms) f.add_term({e}, ValuedScalar::monomial(Rational(ct.first), ct.second));
    return f;
}

LaurentPoly random_poly(std::mt19937& rng, std::size_t dim) {
    std::uniform_int_distribution<long> ex(-3, 3), tp(0, 4), co(-3, 3), nterms(1, 5);
    LaurentPoly f(dim);
    long n = nterms(rng);
    while (static_cast<long>(f.terms().size()) < n) {
        IntVec I(dim);
        for (auto& i : I) i = ex(rng);
        long c = co(rng);
        if (c == 0) continue;
        // a second t-power makes some coefficients non-monomial
        ValuedScalar s = ValuedScalar::monomial(Rational(c), tp(rng)) + ValuedScalar::monomial(Rational(1), 5);
        f.add_term(I, s);
    }
    return f;
}

RatPoint random_point(std::mt19937& rng, std::size_t dim) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 7);
    RatPoint x(dim);
    for (auto& v : x) v = Rational(num(rng), den(rng));
    return x;
}

// brute-force Val straight from the definition, no pruning
Rational val_oracle(const LaurentPoly& f, const RatPoint& x) {
    std::optional<Rational> best;
    for (const auto& [I, c] : f.terms()) {
        Rational v(val(c).value());
        for (std::size_t i = 0; i < I.size(); ++i) v -= Rational(I[i]) * x[i];
        if (!best || v < *best) best = v;
    }
    return *best;
}

} // namespace

TEST(ValFunction, Examples) {
    auto mono = val_function(poly1({{3, {2, 1}}}));
    EXPECT_EQ(mono.pieces().size(), 1u);
    EXPECT_EQ(mono({Rational(2)}), Rational(1 - 6));

    auto lin = val_function(poly1({{0, {1, 0}}, {1, {1, 0}}}));
    EXPECT_EQ(lin, PLFunction(1, {{{0}, 0}, {{1}, 0}}));

    // t + z + z^2: min(1, -x, -2x), breakpoints at -1 and 0
    auto f = val_function(poly1({{0, {1, 1}}, {1, {1, 0}}, {2, {1, 0}}}));
    EXPECT_EQ(f.pieces().size(), 3u);
    EXPECT_EQ(f({Rational(-2)}), Rational(1));
    EXPECT_EQ(f({Rational(-1)}), Rational(1));
    EXPECT_EQ(f({Rational(-1, 2)}), Rational(1, 2));
    EXPECT_EQ(f({Rational(0)}), Rational(0));
    EXPECT_EQ(f({Rational(1)}), Rational(-2));

    EXPECT_THROW(val_function(LaurentPoly(1)), Error);
}

TEST(ValFunction, PruningDropsNonVertices) {
    // z has val 1 and lies above the segment between 1 and z^2: never minimal
    auto f = val_function(poly1({{0, {1, 0}}, {1, {1, 1}}, {2, {1, 0}}}));
    EXPECT_EQ(f, PLFunction(1, {{{0}, 0}, {{2}, 0}}));
    LaurentPoly g(2);
    for (IntVec I : {IntVec{0, 0}, IntVec{2, 0}, IntVec{0, 2}, IntVec{1, 1}, IntVec{1, 0}}) {
        g.add_term(I, ValuedScalar(Rational(1)));
    }
    // (1,1) sits on the edge from (2,0) to (0,2), (1,0) on the edge from (0,0) to (2,0)
    EXPECT_EQ(val_function(g).pieces().size(), 3u);
}

TEST(PLAdd, Examples) {
    PLFunction u(1, {{{0}, 0}, {{1}, 0}});
    EXPECT_EQ(pl_add(u, PLFunction(1, {{{0}, 0}})), u.pruned());
    // min(0, -x, -2x) as a function; the middle piece is never strictly minimal
    PLFunction full(1, {{{0}, 0}, {{1}, 0}, {{2}, 0}});
    PLFunction twice = pl_add(u, u);
    EXPECT_EQ(twice, full.pruned());
    EXPECT_EQ(twice, PLFunction(1, {{{0}, 0}, {{2}, 0}}));
    for (long s = -6; s <= 6; ++s) EXPECT_EQ(twice({Rational(s, 2)}), full({Rational(s, 2)}));
}

TEST(PLAdd, AdditivityRandom) {
    std::mt19937 rng(17);
    for (int i = 0; i < 100; ++i) {
        std::size_t dim = 1 + i % 2;
        LaurentPoly f = random_poly(rng, dim), g = random_poly(rng, dim);
        PLFunction sum = pl_add(val_function(f), val_function(g));
        EXPECT_EQ(val_function(f * g), sum) << i;
        for (int j = 0; j < 10; ++j) {
            RatPoint x = random_point(rng, dim);
            EXPECT_EQ(gauss_seminorm(f * g, x), gauss_seminorm(f, x) + gauss_seminorm(g, x));
            EXPECT_EQ(sum(x), val_oracle(f, x) + val_oracle(g, x));
        }
    }
}

TEST(PLFunction, Concavity) {
    std::mt19937 rng(19);
    for (int i = 0; i < 100; ++i) {
        std::size_t dim = 1 + i % 2;
        PLFunction u = val_function(random_poly(rng, dim));
        for (int j = 0; j < 10; ++j) {
            RatPoint p = random_point(rng, dim), q = random_point(rng, dim), m(dim);
            for (std::size_t d = 0; d < dim; ++d) m[d] = (p[d] + q[d]) / Rational(2);
            EXPECT_GE(u(m), (u(p) + u(q)) / Rational(2));
        }
    }
}

TEST(IsAffineOn, Examples) {
    RatPoint a{-1, -1}, b{1, -1}, c{1, 1}, d{-1, 1};
    LaurentPoly mono(2);
    mono.add_term({2, -1}, ValuedScalar::t(3));
    EXPECT_TRUE(is_affine_on(val_function(mono), {a, b, c, d}));
    PLFunction kink(2, {{{0, 0}, 0}, {{1, 0}, 0}});
    EXPECT_FALSE(is_affine_on(kink, {a, b, c, d}));
    EXPECT_TRUE(is_affine_on(kink, {RatPoint{1, 0}, RatPoint{2, 0}, RatPoint{2, 1}}));
    EXPECT_THROW(is_affine_on(kink, {}), Error);
    try {
        is_affine_on(kink, {a, c, b, d});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonConvexRegion);
    }
}

TEST(IsAffineOn, UnitInversePairs) {
    // f = c t^v z^I (1 + t z), g = its inverse expanded mod t^T; on x < 1 the
    // sum Val f + Val g vanishes and both are affine.
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> e(-3, 3), v(0, 3), c(1, 4);
    const long T = 40;
    for (int i = 0; i < 20; ++i) {
        long I = e(rng), vv = v(rng);
        Rational cc(c(rng));
        LaurentPoly f(1), g(1);
        f.add_term({I}, ValuedScalar::monomial(cc, vv, T));
        f.add_term({I + 1}, ValuedScalar::monomial(cc, vv + 1, T));
        for (long j = 0; j < T - 2 * vv; ++j) {
            g.add_term({j - I}, ValuedScalar::monomial((j % 2 ? Rational(-1) : Rational(1)) / cc, j - vv, T));
        }
        PLFunction vf = val_function(f), vg = val_function(g);
        std::vector<RatPoint> region{{Rational(-5, 2)}, {Rational(1, 2)}};
        for (long s = -10; s <= 2; ++s) {
            RatPoint x{Rational(s, 4)};
            EXPECT_EQ(vf(x) + vg(x), Rational(0));
        }
        EXPECT_TRUE(is_affine_on(vf, region));
        EXPECT_TRUE(is_affine_on(vg, region));
        // across the breakpoint x = 1 neither is affine
        std::vector<RatPoint> wide{{Rational(0)}, {Rational(2)}};
        EXPECT_FALSE(is_affine_on(vf, wide));
    }
}

TEST(GaussSeminorm, Examples) {
    LaurentPoly one(1);
    one.add_term({0}, ValuedScalar(Rational(1)));
    EXPECT_EQ(gauss_seminorm(one, {Rational(7)}), Rational(0));
    LaurentPoly z(1);
    z.add_term({1}, ValuedScalar(Rational(1)));
    EXPECT_EQ(gauss_seminorm(z, {Rational(3)}), Rational(-3));
}

TEST(TateDeck, Examples) {
    LaurentPoly z(2);
    z.add_term({0, 1}, ValuedScalar(Rational(1)));
    EXPECT_EQ(tate_deck_transform(z, 0), z);
    LaurentPoly q2z(2);
    q2z.add_term({2, 1}, ValuedScalar(Rational(1)));
    EXPECT_EQ(tate_deck_transform(z, 2), q2z);

    // f = 1 + z + q z^2
    LaurentPoly f(2);
    f.add_term({0, 0}, ValuedScalar(Rational(1)));
    f.add_term({0, 1}, ValuedScalar(Rational(1)));
    f.add_term({1, 2}, ValuedScalar(Rational(1)));
    for (long k = -3; k <= 3; ++k) {
        for (long s = -12; s <= 12; ++s) {
            Rational x(s, 3);
            EXPECT_EQ(tate_functional(tate_deck_transform(f, k), x), tate_functional(f, x + Rational(k)));
        }
    }
}
