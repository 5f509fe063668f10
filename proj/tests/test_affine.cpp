#include <random>

#include <gtest/gtest.h>

#include "affscat/affine.hpp"

using namespace affscat;

namespace {

const Mat2 T{1, 1, 0, 1};
const Mat2 swap_xy{0, 1, 1, 0};

Mat2 random_sl2(std::mt19937& rng) {
    std::uniform_int_distribution<int> pick(0, 3), len(0, 6);
    const Mat2 gens[4] = {T, T.inverse(), Mat2{0, -1, 1, 0}, Mat2{0, 1, -1, 0}};
    Mat2 m;
    for (int i = len(rng); i > 0; --i) m = m * gens[pick(rng)];
    return m;
}

AffineTransform random_affine(std::mt19937& rng) {
    std::uniform_int_distribution<long> tr(-5, 5);
    return AffineTransform(random_sl2(rng), {Rational(tr(rng), 2), Rational(tr(rng), 3)});
}

// developing map: push every step back into the first chart, then pair
RatVec2 develop(const ChainWithCovector& c) {
    Mat2 L;
    RatVec2 end{Rational(0), Rational(0)};
    for (const auto& s : c.segments) {
        end = end + L * s.displacement;
        L = L * s.transition.A.inverse();
    }
    return end;
}

// loop around the focus-focus point: square with corners (+-1, +-1), starting
// at (-1,-1) in the standard chart, passing through the modified chart
// (x + max(y,0), y) on the right side
ChainWithCovector focus_focus_square(std::array<long, 2> alpha) {
    AffineTransform id;
    AffineTransform back(Mat2{1, -1, 0, 1});  // modified -> standard above the ray
    return {alpha,
            {{{Rational(2), Rational(0)}, id},
             {{Rational(1), Rational(2)}, back},
             {{Rational(-2), Rational(0)}, id},
             {{Rational(0), Rational(-2)}, id}}};
}

std::array<ValuedScalar, 2> vs(const ValuedScalar& a, const ValuedScalar& b) { return {a, b}; }

} // namespace

TEST(Monodromy, Examples) {
    EXPECT_EQ(monodromy({}), AffineTransform());
    EXPECT_EQ(monodromy({focus_focus_transition()}).A, T);
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        LoopWord w{random_affine(rng), random_affine(rng)}, w2{random_affine(rng), random_affine(rng), random_affine(rng)};
        LoopWord ww = w;
        ww.insert(ww.end(), w2.begin(), w2.end());
        EXPECT_EQ(monodromy(ww), monodromy(w).after(monodromy(w2)));
        RatVec2 x{Rational(1, 3), Rational(-2)};
        EXPECT_EQ(monodromy(ww)(x), monodromy(w)(monodromy(w2)(x)));
        EXPECT_EQ(monodromy(w).after(monodromy(w).inverse()), AffineTransform());
    }
}

TEST(Monodromy, FourParallelSingularities) {
    // four focus-focus points with a common invariant direction, seen from a
    // conjugated chart: conjugate to [[1,4],[0,1]]
    std::mt19937 rng(8);
    for (int i = 0; i < 20; ++i) {
        AffineTransform g(random_sl2(rng), {Rational(i), Rational(1, 2)});
        LoopWord w{g};
        for (int j = 0; j < 4; ++j) w.push_back(focus_focus_transition());
        w.push_back(g.inverse());
        Mat2 M = monodromy(w).A;
        EXPECT_EQ(unipotent_class(M), std::optional<long>(4)) << M.str();
    }
    EXPECT_EQ(unipotent_class(T), std::optional<long>(1));
    EXPECT_EQ(unipotent_class(T.inverse()), std::optional<long>(-1));
    EXPECT_EQ(unipotent_class(Mat2{}), std::nullopt);
}

TEST(FocusFocusChart, Examples) {
    EXPECT_EQ(focus_focus_chart({Rational(3), Rational(-2)}), (RatVec2{Rational(-2), Rational(3)}));
    EXPECT_EQ(focus_focus_chart({Rational(1), Rational(2)}), (RatVec2{Rational(2), Rational(3)}));
    try {
        focus_focus_chart({Rational(0), Rational(0)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::AtSingularPoint);
    }
}

TEST(FocusFocusChart, LoopAccumulatesShear) {
    // Transitions read off the chart itself. Standard chart s(p) = (y, x) and
    // modified chart m(p): they agree below the ray, and above it m = F(s)
    // for an affine F recovered from three points.
    auto s = [](const RatVec2& p) { return RatVec2{p[1], p[0]}; };
    std::vector<RatVec2> above{{Rational(1), Rational(1)}, {Rational(2), Rational(1)}, {Rational(1), Rational(3)}};
    RatVec2 s0 = s(above[0]), m0 = focus_focus_chart(above[0]);
    // columns of F from the two difference vectors, which here are e2 and 2 e1 in s-coordinates
    RatVec2 ds1 = s(above[1]) - s0, dm1 = focus_focus_chart(above[1]) - m0;
    RatVec2 ds2 = s(above[2]) - s0, dm2 = focus_focus_chart(above[2]) - m0;
    ASSERT_EQ(ds1, (RatVec2{Rational(0), Rational(1)}));
    ASSERT_EQ(ds2, (RatVec2{Rational(2), Rational(0)}));
    Mat2 F{(dm2[0] / Rational(2)).to_long(), dm1[0].to_long(), (dm2[1] / Rational(2)).to_long(), dm1[1].to_long()};
    RatVec2 b = m0 - F * s0;
    // below the ray the two charts agree
    RatVec2 below{Rational(1), Rational(-1)};
    ASSERT_EQ(s(below), focus_focus_chart(below));
    LoopWord loop{AffineTransform(), AffineTransform(F, b)};
    AffineTransform mono = monodromy(loop);
    EXPECT_EQ(swap_xy * mono.A * swap_xy, T);
    EXPECT_EQ(mono.b, (RatVec2{Rational(0), Rational(0)}));
}

TEST(RhoPairing, Examples) {
    EXPECT_EQ(rho_pairing({{0, 1}, {}}), Rational(0));
    EXPECT_EQ(rho_pairing({{1, 0}, {{{Rational(0), Rational(0)}, AffineTransform()}}}), Rational(0));

    // flat torus: a straight loop v pairs to <alpha, v>
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int i = 0; i < 20; ++i) {
        std::array<long, 2> alpha{d(rng), d(rng)};
        RatVec2 v{Rational(d(rng)), Rational(d(rng))};
        EXPECT_EQ(rho_pairing({alpha, {{v, AffineTransform(Mat2{}, {Rational(1), Rational(2)})}}}),
                  Rational(alpha[0]) * v[0] + Rational(alpha[1]) * v[1]);
    }

    auto sq = focus_focus_square({0, 1});
    RatVec2 dev = develop(sq);
    EXPECT_EQ(dev, (RatVec2{Rational(-1), Rational(0)}));
    EXPECT_EQ(rho_pairing(sq), dev[1]);

    try {
        rho_pairing(focus_focus_square({1, 0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotClosed);
    }
}

TEST(RhoPairing, AdditiveAndVanishesOnTriangles) {
    std::mt19937 rng(4);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int i = 0; i < 30; ++i) {
        // triangle inside one chart
        RatVec2 a{Rational(d(rng), 3), Rational(d(rng))}, b{Rational(d(rng)), Rational(d(rng), 2)};
        RatVec2 c{-(a[0] + b[0]), -(a[1] + b[1])};
        std::array<long, 2> alpha{d(rng), d(rng)};
        ChainWithCovector tri{alpha, {{a, {}}, {b, {}}, {c, {}}}};
        EXPECT_EQ(rho_pairing(tri), Rational(0));

        // concatenation of closed chains with a shear-invariant covector
        auto sq = focus_focus_square({0, alpha[1]});
        ChainWithCovector extra{{0, alpha[1]}, {{a, AffineTransform(T.pow(d(rng)))}}};
        ChainWithCovector both = sq;
        both.segments.insert(both.segments.end(), extra.segments.begin(), extra.segments.end());
        EXPECT_EQ(rho_pairing(both), rho_pairing(sq) + rho_pairing(extra));
        Rational oracle = Rational(alpha[1]) * develop(both)[1];
        EXPECT_EQ(rho_pairing(both), oracle);
    }
}

TEST(LiftedWord, ParseAndPrint) {
    EXPECT_EQ(LiftedWord::parse("u"), LiftedWord::power(LiftedWord::A3, 6));
    EXPECT_EQ(LiftedWord::parse("a3^-1 a2").str(), "a3^-1 a2");
    EXPECT_EQ(LiftedWord::parse("a2*a2 a3^2").str(), "a2^2 a3^2");
    EXPECT_TRUE(LiftedWord::parse("").letters.empty());
    EXPECT_THROW(LiftedWord::parse("a4"), Error);
    EXPECT_THROW(LiftedWord::parse("a2^"), Error);
}

TEST(IHomomorphism, Examples) {
    EXPECT_EQ(i_homomorphism(LiftedWord::u()), Rational(1));
    EXPECT_EQ(i_homomorphism(focus_focus_lift()), Rational(1, 12));
    EXPECT_EQ(i_homomorphism(focus_focus_lift().pow(4)), Rational(1, 3));
    EXPECT_EQ(project(focus_focus_lift()), T);
    EXPECT_EQ(project(LiftedWord::parse("a2^2")), -Mat2{});
    EXPECT_EQ(project(LiftedWord::parse("a3^3")), -Mat2{});
    EXPECT_EQ(project(LiftedWord::u()), Mat2{});
}

TEST(IHomomorphism, InvariantUnderRelations) {
    std::mt19937 rng(6);
    std::uniform_int_distribution<int> letter(0, 3), len(0, 10);
    const LiftedWord rel1 = LiftedWord::parse("a2^2 a3^-3");
    const LiftedWord rel2 = LiftedWord::parse("a2^4 a3^-6");
    for (int i = 0; i < 50; ++i) {
        LiftedWord w;
        for (int j = len(rng); j > 0; --j) w.letters.push_back(static_cast<LiftedWord::Letter>(letter(rng)));
        std::uniform_int_distribution<std::size_t> at(0, w.letters.size());
        LiftedWord v = w;
        const auto& rel = i % 2 ? rel1 : rel2;
        v.letters.insert(v.letters.begin() + static_cast<long>(at(rng)), rel.letters.begin(), rel.letters.end());
        EXPECT_EQ(i_homomorphism(v), i_homomorphism(w));
        EXPECT_EQ(i_homomorphism(w * v), i_homomorphism(w) + i_homomorphism(v));
    }
}

TEST(GaussBonnet, Examples) {
    std::vector<LiftedWord> k3(24, focus_focus_lift());
    auto r = gauss_bonnet_check(k3, 0);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.sum, Rational(2));
    EXPECT_EQ(r.euler_characteristic, Rational(2));

    EXPECT_TRUE(gauss_bonnet_check({}, 1).passed);

    std::vector<LiftedWord> six(6, focus_focus_lift().pow(4));
    EXPECT_TRUE(gauss_bonnet_check(six, 0).passed);

    k3.pop_back();
    auto bad = gauss_bonnet_check(k3, 0);
    EXPECT_FALSE(bad.passed);
    EXPECT_EQ(bad.sum, Rational(23, 12));
}

TEST(MatrixToLift, Examples) {
    EXPECT_TRUE(matrix_to_lift(Mat2{}, 0).letters.empty());
    EXPECT_EQ(matrix_to_lift(Mat2{}, 1), LiftedWord::parse("a3^6"));
    auto ff = matrix_to_lift(T, 0);
    EXPECT_EQ(i_homomorphism(ff), Rational(1, 12));
    EXPECT_EQ(project(ff), T);
    EXPECT_THROW(matrix_to_lift(Mat2{1, 0, 0, -1}, 0), Error);
}

TEST(MatrixToLift, ProjectsBack) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> wind(-3, 3);
    for (int i = 0; i < 100; ++i) {
        Mat2 M = random_sl2(rng);
        long n = wind(rng);
        auto w = matrix_to_lift(M, n);
        EXPECT_EQ(project(w), M) << M.str();
        EXPECT_EQ(i_homomorphism(w) - i_homomorphism(matrix_to_lift(M, 0)), Rational(n));
    }
}

TEST(KFixedVectors, Examples) {
    KAffineTransform id{Mat2{}, vs(1, 1)};
    auto all = k_fixed_vectors(id);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].free_dims(), 2);

    KAffineTransform ff{T, vs(1, 1)};
    auto fam = k_fixed_vectors(ff);
    ASSERT_EQ(fam.size(), 1u);
    EXPECT_EQ(fam[0].free_dims(), 1);
    for (const ValuedScalar& s : {ValuedScalar(3) + ValuedScalar::t(1), ValuedScalar::t(-2), ValuedScalar(Rational(-5, 7))}) {
        auto v = fam[0].evaluate({s, s});
        // direct solve: v1 v2 = v1 forces v2 = 1, v1 free
        EXPECT_EQ(v[1], ValuedScalar(1));
        EXPECT_EQ(ff(v)[0], v[0]);
        EXPECT_EQ(ff(v)[1], v[1]);
    }
    EXPECT_TRUE(k_fixed_vectors(KAffineTransform{T, vs(1, ValuedScalar::t(1))}).empty());
}

TEST(KFixedVectors, DirectSubstitution) {
    struct Case {
        Mat2 A;
        ValuedScalar l1, l2;
        std::size_t branches;
    };
    std::vector<Case> cases{
        {{2, 1, 1, 1}, ValuedScalar::t(2), ValuedScalar(3) * ValuedScalar::t(1), 1},
        {{-1, 0, 0, -1}, ValuedScalar(4), ValuedScalar::t(2), 4},
        // v2^2 = 2 (1 + t): no rational square root of 2
        {{0, -1, 1, 0}, ValuedScalar(2), ValuedScalar(1) + ValuedScalar::t(1), 0},
        // v2^2 = 4 (1 + t)
        {{0, -1, 1, 0}, ValuedScalar(2), ValuedScalar(2) + ValuedScalar(2) * ValuedScalar::t(1), 2},
        {{-1, 0, 0, -1}, ValuedScalar(2), ValuedScalar(1), 0},
        // v2^2 = (1 + t^2)^-1
        {{1, 2, 0, 1}, ValuedScalar(1) + ValuedScalar::t(2), ValuedScalar(1), 2},
        {{1, 2, 0, 1}, ValuedScalar(1), ValuedScalar::t(1), 0},
        {{1, 2, 0, 1}, ValuedScalar(1), ValuedScalar(1), 2},
    };
    for (const auto& c : cases) {
        KAffineTransform m{c.A, vs(c.l1, c.l2)};
        auto sols = k_fixed_vectors(m);
        EXPECT_EQ(sols.size(), c.branches) << c.A.str();
        for (const auto& f : sols) {
            auto v = f.evaluate({ValuedScalar(2) + ValuedScalar::t(1), ValuedScalar::t(3)});
            auto mv = m(v);
            EXPECT_EQ(mv[0], v[0]) << c.A.str();
            EXPECT_EQ(mv[1], v[1]) << c.A.str();
        }
    }
}

TEST(KFixedVectors, ValSpanIsRealFixedSet) {
    KAffineTransform ff{T, vs(1, 1)};
    auto fam = k_fixed_vectors(ff);
    ASSERT_EQ(fam.size(), 1u);
    auto real = fixed_points(ff.real_part());
    ASSERT_TRUE(real.has_value());
    // the invariant axis y = 0
    EXPECT_EQ(*real, (AffineSubspace{{Rational(0), Rational(0)}, {RatVec2{Rational(1), Rational(0)}}}));
    EXPECT_EQ(val_span(fam[0]), *real);
    for (long e = -3; e <= 3; ++e) {
        auto v = fam[0].evaluate({ValuedScalar::t(e), ValuedScalar(1)});
        EXPECT_TRUE(real->contains({Rational(val(v[0]).value()), Rational(val(v[1]).value())}));
    }

    KAffineTransform hyp{{2, 1, 1, 1}, vs(ValuedScalar::t(2), ValuedScalar::t(1))};
    auto h = k_fixed_vectors(hyp);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(val_span(h[0]), *fixed_points(hyp.real_part()));

    KAffineTransform none{T, vs(1, ValuedScalar::t(1))};
    EXPECT_FALSE(fixed_points(none.real_part()).has_value());
    EXPECT_EQ(none.real_part().b, (RatVec2{Rational(0), Rational(1)}));
}
