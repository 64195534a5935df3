#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bene/geometry.hpp"
#include "bene/rng.hpp"

using namespace bene;

namespace {
BenedicksDomain segment_domain() {
    return BenedicksDomain(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{-1}, {1}}}}, "segment");
}
}  // namespace

TEST_CASE("hyperplane point classification") {
    auto dom = segment_domain();
    CHECK(dom.classify(std::vector<double>{0.5}) == SiteClass::InHoles);
    // closed-set boundary tie-break
    CHECK(dom.classify(std::vector<double>{1.0}) == SiteClass::InHoles);
    CHECK(dom.classify(std::vector<double>{1.0001}) == SiteClass::InD);

    BenedicksDomain win(2, HoleSpec{HoleVariant::FiniteWindows, {Box{{-1}, {1}}}}, "gap");
    CHECK(win.classify(std::vector<double>{0.5}) == SiteClass::InD);
    CHECK(win.classify(std::vector<double>{1.0}) == SiteClass::InHoles);  // window edge
    CHECK(win.classify(std::vector<double>{2.0}) == SiteClass::InHoles);

    CHECK_THROWS(dom.classify(std::vector<double>{1.0, 2.0}));  // dimension mismatch
}

TEST_CASE("holes and windows describing the same set agree on box interiors") {
    // D = (-2,-1) u (1,2) described both ways (holes truncated to [-5,5]).
    BenedicksDomain holes(
        2, HoleSpec{HoleVariant::FiniteHoles, {Box{{-5}, {-2}}, Box{{-1}, {1}}, Box{{2}, {5}}}},
        "h");
    BenedicksDomain windows(
        2, HoleSpec{HoleVariant::FiniteWindows, {Box{{-2}, {-1}}, Box{{1}, {2}}}}, "w");
    for (double xi : {-1.9, -1.5, -1.1, 1.1, 1.7, 0.0, 0.5, -0.5, 2.5, 3.0}) {
        std::vector<double> p{xi};
        CHECK(holes.classify(p) == windows.classify(p));
    }
}

TEST_CASE("mirror is an involution and flips x_d") {
    Point p{2, -3};
    Point m = mirror_across_hyperplane(p);
    CHECK(m.c[0] == 2);
    CHECK(m.c[1] == 3);
    CHECK(mirror_across_hyperplane(m).c == p.c);
    Point origin{0, 0};
    CHECK(mirror_across_hyperplane(origin).c == origin.c);
    Point q{1.5, 2, -0.25};
    Point mq = mirror_across_hyperplane(q);
    CHECK(mq.c == std::vector<double>{1.5, 2, 0.25});
}

TEST_CASE("oblique reflections match the hand-worked frame") {
    ReflectionFrame frame(Point{0, 5}, {1.0});
    auto [sp, sm] = oblique_reflections(frame, Point{3, 1});
    CHECK(sp.c[0] == doctest::Approx(1));
    CHECK(sp.c[1] == doctest::Approx(3));
    CHECK(sm.c[0] == doctest::Approx(-1));
    CHECK(sm.c[1] == doctest::Approx(-3));
    // involution
    auto [spp, smm] = oblique_reflections(frame, sp);
    CHECK(spp.c[0] == doctest::Approx(3));
    CHECK(spp.c[1] == doctest::Approx(1));
    (void)smm;
}

TEST_CASE("fixed hyperplane of S+ and membership in Omega+") {
    ReflectionFrame frame(Point{0, 5}, {1.0});
    // x_d = (xvec - yvec).n => S+(x) = x
    Point fixed{2, 2};
    auto [sp, sm] = oblique_reflections(frame, fixed);
    CHECK(sp.c[0] == doctest::Approx(2));
    CHECK(sp.c[1] == doctest::Approx(2));
    (void)sm;
    CHECK(in_omega_plus(frame, Point{3, 1}));
    CHECK_FALSE(in_omega_plus(frame, Point{0.5, 1}));
    CHECK(in_omega_plus(frame, Point{2, -2}));
}

TEST_CASE("reflections are isometries and involutions (randomized)") {
    Rng rng(7, 0);
    for (int d : {2, 3, 4}) {
        std::vector<double> n(d - 1, 0.0);
        double nn = 0;
        for (double& v : n) {
            v = rng.gaussian();
            nn += v * v;
        }
        for (double& v : n) v /= std::sqrt(nn);
        Point y(std::vector<double>(d, 0.0));
        for (int k = 0; k < d; ++k) y.c[k] = rng.gaussian();
        if (y.xd() == 0) y.xd() = 1;
        ReflectionFrame frame(y, n);
        for (int trial = 0; trial < 50; ++trial) {
            Point a(std::vector<double>(d, 0.0)), b(std::vector<double>(d, 0.0));
            for (int k = 0; k < d; ++k) {
                a.c[k] = 3 * rng.gaussian();
                b.c[k] = 3 * rng.gaussian();
            }
            auto [sa_p, sa_m] = oblique_reflections(frame, a);
            auto [sb_p, sb_m] = oblique_reflections(frame, b);
            CHECK(sa_p.dist(sb_p) == doctest::Approx(a.dist(b)).epsilon(1e-12));
            CHECK(sa_m.dist(sb_m) == doctest::Approx(a.dist(b)).epsilon(1e-12));
            auto [roundtrip, unused] = oblique_reflections(frame, sa_p);
            for (int k = 0; k < d; ++k) CHECK(roundtrip.c[k] == doctest::Approx(a.c[k]));
            (void)unused;
        }
    }
}

TEST_CASE("domain validation") {
    auto ok = validate_holes(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{-1}, {1}}}});
    CHECK(ok.valid);
    auto degenerate = validate_holes(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{0}, {0}}}});
    CHECK_FALSE(degenerate.valid);
    auto empty = validate_holes(2, HoleSpec{HoleVariant::FiniteWindows, {}});
    CHECK_FALSE(empty.valid);
    CHECK_THROWS(BenedicksDomain(1, HoleSpec{HoleVariant::FiniteHoles, {Box{{}, {}}}}, "1d"));
}

TEST_CASE("canonical merging of overlapping boxes") {
    auto merged = merge_boxes({Box{{0}, {2}}, Box{{1}, {3}}, Box{{5}, {6}}, Box{{5.5}, {5.7}}});
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].lo[0] == 0);
    CHECK(merged[0].hi[0] == 3);
    CHECK(merged[1].lo[0] == 5);
    CHECK(merged[1].hi[0] == 6);
    // touching windows merge, so the shared edge is interior
    BenedicksDomain win(2, HoleSpec{HoleVariant::FiniteWindows, {Box{{-1}, {0}}, Box{{0}, {1}}}},
                        "touching");
    CHECK(win.classify(std::vector<double>{0.0}) == SiteClass::InD);
}

TEST_CASE("hole distance lower bounds") {
    auto dom = segment_domain();
    CHECK(dom.hole_distance(std::vector<double>{3.0}) == doctest::Approx(2.0));
    CHECK(dom.hole_distance(std::vector<double>{0.0}) == 0.0);
    BenedicksDomain win(2, HoleSpec{HoleVariant::FiniteWindows, {Box{{-1}, {1}}}}, "gap");
    CHECK(win.hole_distance(std::vector<double>{0.25}) == doctest::Approx(0.75));
    CHECK(win.hole_distance(std::vector<double>{2.0}) == 0.0);
}
