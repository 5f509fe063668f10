#include <functional>
#include <optional>
#include <random>

#include <gtest/gtest.h>

#include "affscat/scatter.hpp"

using namespace affscat;

namespace {

std::optional<ErrorKind> kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

RatVec2 P(long x, long y) { return {Rational(x), Rational(y)}; }

std::vector<SingularPoint> four_points(const Rational& scale = Rational(1)) {
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

// two unit-distance rays meeting at the origin with orders ord there
Diagram corner(const Rational& C, long k, const Rational& ord = Rational(1)) {
    Diagram d = make_diagram({}, C, k);
    add_ray(d, {-ord, Rational(0)}, {1, 0}, Rational(0));
    add_ray(d, {Rational(0), -ord}, {0, 1}, Rational(0));
    return d;
}

const Diagram& generic() {
    static const Diagram d = build_diagram(four_points(), Rational(6), 6);
    return d;
}

} // namespace

TEST(InitialLines, OnePoint) {
    auto ls = initial_lines({{P(0, 0), {0, 1}}});
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0].alpha, (Covector{0, 1}));
    EXPECT_EQ(ls[1].alpha, (Covector{0, -1}));
    EXPECT_EQ(ls[0].direction(), P(0, 1));
    EXPECT_EQ(ls[1].direction(), P(0, -1));
    for (const auto& l : ls) {
        EXPECT_EQ(l.kind(), LineKind::Initial);
        EXPECT_EQ(l.wall, WallFunction<Rational>::linear());
        EXPECT_EQ(l.ord0, Rational(0));
    }

    // as automorphisms, evaluated at distance 1 along each line
    const long k = 6;
    auto up = tadic_wall(ls[0], {P(0, 1), 1}, k, true);
    EXPECT_EQ(up.xi_multiplier().coeff({0, -1}), ValuedScalar::t(1, k));
    EXPECT_EQ(up.xi_multiplier().size(), 2u);
    EXPECT_TRUE(up.eta_multiplier() == TruncSeries2<ValuedScalar>::one(up.grading_ptr()));
    // crossing l_- against its orientation gives xi -> xi (1 + t eta)
    auto down = tadic_wall(ls[1], {P(0, -1), 1}, k, false);
    EXPECT_EQ(down.xi_multiplier().coeff({0, 1}), ValuedScalar::t(1, k));
    EXPECT_EQ(down.xi_multiplier().size(), 2u);
    auto down_inv = tadic_wall(ls[1], {P(0, -1), 1}, k, true);
    EXPECT_EQ(down_inv.xi_multiplier().coeff({0, 2}), ValuedScalar::t(2, k));
    EXPECT_EQ(down_inv.xi_multiplier().coeff({0, 1}), ValuedScalar::monomial(Rational(-1), 1, k));
}

TEST(InitialLines, Examples) {
    EXPECT_TRUE(initial_lines({}).empty());
    auto ls = initial_lines({{P(0, 0), {0, 1}}, {P(2, 1), {1, 0}}});
    ASSERT_EQ(ls.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(ls[i].id, static_cast<long>(i));
    EXPECT_EQ(ls[2].base, P(2, 1));
    EXPECT_EQ(ls[3].alpha, (Covector{-1, 0}));
    EXPECT_EQ(ls, initial_lines({{P(0, 0), {0, 1}}, {P(2, 1), {1, 0}}}));
    EXPECT_EQ(kind_of([] { initial_lines({{P(1, 1), {0, 1}}, {P(1, 1), {1, 0}}}); }),
              ErrorKind::DuplicateSingularPoint);
}

TEST(Evolve, CornerNewborns) {
    Diagram d = evolve(corner(Rational(3), 3));
    ASSERT_EQ(d.events.size(), 1u);
    const auto& e = d.events[0];
    EXPECT_EQ(e.point, P(0, 0));
    EXPECT_EQ(e.line1, 0);
    EXPECT_EQ(e.t1, Rational(1));
    std::vector<std::pair<long, long>> got;
    for (long id : e.newborn) {
        const Line& l = d.line(id);
        got.emplace_back(l.parents->n1, l.parents->n2);
        EXPECT_EQ(l.alpha, (Covector{l.parents->n1, l.parents->n2}));
        EXPECT_EQ(l.ord0, Rational(l.parents->n1 + l.parents->n2));
        EXPECT_EQ(l.generation, 1);
        EXPECT_EQ(l.base, e.point);
    }
    EXPECT_EQ(got, (std::vector<std::pair<long, long>>{{2, 1}, {1, 1}, {1, 2}}));
    EXPECT_EQ(d.lines.size(), 5u);
}

TEST(Evolve, NoComposites) {
    Diagram par = make_diagram({}, Rational(6), 3);
    add_ray(par, P(0, 0), {1, 0}, Rational(0));
    add_ray(par, P(0, 1), {1, 0}, Rational(0));
    add_ray(par, P(5, 2), {-1, 0}, Rational(0));
    Diagram d = evolve(par);
    EXPECT_TRUE(d.events.empty());
    EXPECT_EQ(d.lines.size(), 3u);

    Diagram low = evolve(corner(Rational(3, 2), 3));
    EXPECT_EQ(low.events.size(), 1u);
    EXPECT_TRUE(low.events[0].newborn.empty());
    EXPECT_EQ(low.lines.size(), 2u);

    // outside the window nothing happens
    Diagram w = corner(Rational(3), 3);
    w.window = Window{Rational(1), Rational(1), Rational(2), Rational(2)};
    EXPECT_TRUE(evolve(w).events.empty());
}

TEST(Evolve, Errors) {
    Diagram tri = corner(Rational(1, 2), 3);
    add_ray(tri, P(-1, -1), {1, 1}, Rational(0));
    EXPECT_EQ(kind_of([&] { evolve(tri); }), ErrorKind::TripleCollision);

    Diagram through = make_diagram({{P(0, 0), {0, 1}}}, Rational(3), 3);
    add_ray(through, P(-1, 0), {1, 0}, Rational(0));
    EXPECT_EQ(kind_of([&] { evolve(through); }), ErrorKind::DegenerateConfiguration);

    Diagram overlap = make_diagram({}, Rational(3), 3);
    add_ray(overlap, P(0, 0), {1, 0}, Rational(0));
    add_ray(overlap, P(1, 0), {1, 0}, Rational(0));
    EXPECT_EQ(kind_of([&] { evolve(overlap); }), ErrorKind::DegenerateConfiguration);

    EXPECT_EQ(kind_of([] { evolve(evolve(corner(Rational(3), 3))); }), ErrorKind::InvalidInput);
}

TEST(Evolve, OrdersAndOrientation) {
    const Diagram& d = generic();
    EXPECT_GT(d.events.size(), 0u);
    for (const auto& l : d.lines) {
        for (long s : {1, 3, 7}) EXPECT_EQ(l.ord_at(l.at(Rational(s, 2))), l.ord0 + Rational(s, 2));
    }
    for (const auto& e : d.events) {
        const Line& l1 = d.line(e.line1);
        const Line& l2 = d.line(e.line2);
        EXPECT_GT(wedge(l1.alpha, l2.alpha), 0);
        EXPECT_EQ(l1.at(e.t1), e.point);
        EXPECT_EQ(l2.at(e.t2), e.point);
        const Rational o1 = l1.ord0 + e.t1, o2 = l2.ord0 + e.t2;
        for (long id : e.newborn) {
            const Line& l = d.line(id);
            EXPECT_GT(l.ord0, o1);
            EXPECT_GT(l.ord0, o2);
            EXPECT_LE(l.ord0, d.order_cutoff);
            EXPECT_EQ(l.alpha, l.parents->n1 * l1.alpha + l.parents->n2 * l2.alpha);
            EXPECT_EQ(gcd_long(l.parents->n1, l.parents->n2), 1);
        }
    }
}

TEST(Evolve, RandomConfigurations) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> num(-60, 60), den(7, 13);
    const Covector covs[] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}, {2, 1}};
    int built = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<SingularPoint> pts;
        for (int i = 0; i < 3; ++i) {
            pts.push_back({{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))}, covs[(trial + i) % 5]});
        }
        Diagram d;
        try {
            d = build_diagram(pts, Rational(4), 4);
        } catch (const Error& e) {
            EXPECT_TRUE(e.kind() == ErrorKind::TripleCollision || e.kind() == ErrorKind::DegenerateConfiguration);
            continue;
        }
        ++built;
        for (const auto& e : d.events) {
            EXPECT_TRUE(event_consistent(d, e)) << trial;
            for (long id : e.newborn) EXPECT_GT(d.line(id).ord0, d.line(e.line1).ord0 + e.t1);
        }
        for (const auto& l : d.lines) EXPECT_TRUE(kaffine_invariance_check(l, 4));
    }
    EXPECT_GE(built, 10);
}

TEST(AttachWalls, Pentagon) {
    Diagram d = attach_walls(evolve(corner(Rational(2), 6)));
    ASSERT_EQ(d.lines.size(), 3u);
    ASSERT_EQ(d.events.size(), 1u);
    EXPECT_EQ(d.line(2).alpha, (Covector{1, 1}));
    EXPECT_EQ(d.line(2).wall, WallFunction<Rational>::linear());
    EXPECT_TRUE(event_consistent(d, d.events[0]));
    EXPECT_TRUE(vertex_consistency(event_vertex(d, d.events[0])));

    // larger cutoff: the extra newborns stay trivial
    Diagram big = attach_walls(evolve(corner(Rational(5), 6)));
    for (long id : big.events[0].newborn) {
        const Line& l = big.line(id);
        bool middle = l.parents->n1 == 1 && l.parents->n2 == 1;
        EXPECT_EQ(l.wall, middle ? WallFunction<Rational>::linear() : WallFunction<Rational>()) << l.parents->n1;
    }
}

TEST(AttachWalls, NoCollisions) {
    Diagram d = evolve(make_diagram({{P(0, 0), {0, 1}}, {P(1, 0), {0, 1}}}, Rational(6), 6));
    EXPECT_TRUE(d.events.empty());
    Diagram w = attach_walls(d);
    EXPECT_TRUE(w.walls_attached);
    for (std::size_t i = 0; i < d.lines.size(); ++i) EXPECT_EQ(w.lines[i].wall, d.lines[i].wall);
}

TEST(AttachWalls, EveryVertexConsistent) {
    const Diagram& d = generic();
    long checked = 0;
    for (const auto& e : d.events) {
        EXPECT_TRUE(event_consistent(d, e));
        // the generic cyclic product on a few events
        if (checked < 3 && !e.newborn.empty()) {
            EXPECT_TRUE(vertex_consistency(event_vertex(d, e)));
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(AttachWalls, TamperedWallIsCaught) {
    Diagram d = generic();
    bool tampered = false;
    for (const auto& e : d.events) {
        for (long id : e.newborn) {
            Line& l = d.lines[static_cast<std::size_t>(id)];
            if (l.wall.is_trivial()) continue;
            auto c = l.wall.coeffs();
            c[0] += Rational(1);
            l.wall = WallFunction<Rational>(c);
            EXPECT_FALSE(event_consistent(d, e));
            EXPECT_FALSE(vertex_consistency(event_vertex(d, e)));
            tampered = true;
            break;
        }
        if (tampered) break;
    }
    EXPECT_TRUE(tampered);
}

TEST(KAffineInvariance, Examples) {
    EXPECT_TRUE(kaffine_invariance_check(WallFunction<Rational>::linear(), 1, 6));
    WallFunction<Rational> f(std::vector<Rational>{Rational(3), Rational(1)});
    EXPECT_TRUE(kaffine_invariance_check(f, 1, 6));
    EXPECT_TRUE(kaffine_invariance_check(f, 2, 6));
    EXPECT_FALSE(kaffine_invariance_check(f, 1, 6, Rational(1, 2)));
    for (const auto& l : generic().lines) EXPECT_TRUE(kaffine_invariance_check(l, 6)) << l.id;
}

TEST(Transport, NoCrossingsIsIdentity) {
    const Diagram& d = generic();
    Polyline p{P(-40, -40), P(-39, -40)};
    EXPECT_TRUE(path_crossings(d, p).empty());
    EXPECT_TRUE(transport(d, p).is_identity());
}

TEST(Transport, HomotopicPairsAgree) {
    const Diagram& d = generic();
    auto pairs = sample_event_path_pairs(d, 20, 1);
    EXPECT_EQ(pairs.size(), 20u);
    for (const auto& pp : pairs) {
        EXPECT_EQ(pp.first.front(), pp.second.front());
        EXPECT_EQ(pp.first.back(), pp.second.back());
        auto a = transport(d, pp.first, pp.frame);
        auto b = transport(d, pp.second, pp.frame);
        EXPECT_TRUE(a == b) << pp.event;
    }
}

TEST(Transport, AroundThePentagon) {
    Diagram d = attach_walls(evolve(corner(Rational(2), 6)));
    const RatVec2 x{Rational(1, 2), Rational(-1, 3)}, y{Rational(-1, 2), Rational(1, 3)};
    Polyline below{x, {Rational(-1, 2), Rational(-1, 3)}, y};
    Polyline above{x, {Rational(1, 2), Rational(1, 3)}, y};
    EXPECT_EQ(path_crossings(d, below).size(), 2u);
    EXPECT_EQ(path_crossings(d, above).size(), 3u);
    TAdicFrame frame{P(0, 0), 1};
    EXPECT_TRUE(transport(d, below, frame) == transport(d, above, frame));
    // without the middle wall the two sides disagree
    Diagram broken = d;
    broken.lines[2].wall = WallFunction<Rational>();
    EXPECT_FALSE(transport(broken, below, frame) == transport(broken, above, frame));
}

TEST(Transport, Composition) {
    const Diagram& d = generic();
    auto pairs = sample_event_path_pairs(d, 10, 7);
    int tested = 0;
    for (const auto& pp : pairs) {
        for (const auto* path : {&pp.first, &pp.second}) {
            if (path->size() < 3) continue;
            Polyline p1(path->begin(), path->begin() + 2), p2(path->begin() + 1, path->end());
            auto whole = transport(d, *path, pp.frame);
            EXPECT_TRUE(whole == compose(transport(d, p1, pp.frame), transport(d, p2, pp.frame)));
            Polyline back(path->rbegin(), path->rend());
            EXPECT_TRUE(compose(whole, transport(d, back, pp.frame)).is_identity());
            ++tested;
        }
    }
    EXPECT_GT(tested, 0);
}

TEST(Transport, Errors) {
    Diagram d = attach_walls(evolve(corner(Rational(2), 6)));
    EXPECT_EQ(kind_of([&] { path_crossings(d, {d.line(0).at(Rational(1, 2)), P(3, 3)}); }), ErrorKind::EndpointOnLine);
    EXPECT_EQ(kind_of([&] { path_crossings(d, {P(1, -1), P(-1, 1)}); }), ErrorKind::PathThroughVertex);
    EXPECT_EQ(kind_of([&] { path_crossings(d, {P(1, -1), P(1, 1), P(2, 3)}); }), ErrorKind::PathThroughVertex);
    // behind a ray's start: no crossing
    EXPECT_TRUE(path_crossings(d, {P(-3, 0), P(-2, 0)}).empty());
    EXPECT_TRUE(path_crossings(d, {P(-3, 1), P(-3, -1)}).empty());
    Diagram bare = evolve(corner(Rational(2), 6));
    EXPECT_EQ(kind_of([&] { transport(bare, {P(1, -1), {Rational(1), Rational(1, 2)}}); }), ErrorKind::InvalidInput);
}
