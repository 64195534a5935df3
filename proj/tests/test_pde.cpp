#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bene/analytic.hpp"
#include "bene/lab.hpp"

using namespace bene;

namespace {

BenedicksDomain two_halfspace() {
    return BenedicksDomain(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{-1e7}, {1e7}}}},
                           "two half-spaces");
}

BenedicksDomain segment_domain() {
    return BenedicksDomain(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{-1}, {1}}}}, "segment");
}

BenedicksDomain slit_domain() {
    return BenedicksDomain(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{0}, {1e7}}}}, "slit");
}

PdeParams quick_params() {
    PdeParams p;
    p.dt = 0.01;
    p.dt_ramp = 1.02;
    p.dt_max = 0.5;
    return p;
}

}  // namespace

TEST_CASE("grid construction and masks") {
    auto seg = segment_domain();
    Grid g = build_grid(seg, 2.0, 0.05);
    CHECK(g.n == 81);
    CHECK(g.j0 == 40);
    CHECK(g.coord(g.j0) == doctest::Approx(0.0));
    int masked_line = 0;
    for (int i = 1; i < g.n - 1; ++i)
        if (g.mask[g.idx(i, g.j0)]) masked_line++;
    CHECK(masked_line == 41);  // [-1, 1] at dx = 0.05, endpoints included
    CHECK(static_cast<int>(g.line_d_nodes.size()) == g.n - 2 - masked_line);

    CHECK_THROWS(build_grid(seg, 2.0, 0.3));  // dx does not divide L
    BenedicksDomain narrow(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{0}, {0.01}}}}, "narrow");
    CHECK_THROWS(build_grid(narrow, 2.0, 0.05));  // hole narrower than dx
    BenedicksDomain d3(3, HoleSpec{HoleVariant::FiniteHoles, {Box{{-1, -1}, {1, 1}}}}, "3d");
    CHECK_THROWS(build_grid(d3, 2.0, 0.05));

    Grid h = build_grid(two_halfspace(), 2.0, 0.05);
    CHECK(h.line_d_nodes.empty());  // entire line is hole
}

TEST_CASE("heat evolution reproduces the free kernel far from any hole") {
    BenedicksDomain far(2, HoleSpec{HoleVariant::FiniteHoles, {Box{{6.9}, {7.4}}}}, "remote");
    Grid g = build_grid(far, 8.0, 0.05);
    Point x{0, 1};
    auto snaps = lab_kernel(far, g, x, {0.25, 0.5}, quick_params());
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0].t == doctest::Approx(0.25).epsilon(1e-9));
    for (const Point& y : {Point{0, 1}, Point{0.7, 0.2}, Point{-1.3, 1.8}, Point{0, -0.6}}) {
        CHECK(field_at(g, snaps[0], y) == doctest::Approx(free_kernel(0.25, x, y)).epsilon(0.01));
        CHECK(field_at(g, snaps[1], y) == doctest::Approx(free_kernel(0.5, x, y)).epsilon(0.01));
    }
}

TEST_CASE("two-half-space kernel matches the closed form within 1%") {
    auto dom = two_halfspace();
    Grid g = build_grid(dom, 8.0, 0.05);
    Point x{0, 1};
    auto snaps = lab_kernel(dom, g, x, {0.5, 1.0, 2.0}, quick_params());
    std::vector<double> ts{0.5, 1.0, 2.0};
    for (size_t i = 0; i < ts.size(); ++i) {
        for (const Point& y : {Point{0, 1}, Point{0.5, 1.5}, Point{-1, 0.4}}) {
            double exact = halfspace_kernel(ts[i], x, y);
            CHECK(field_at(g, snaps[i], y) == doctest::Approx(exact).epsilon(0.01));
        }
        // only the (tiny) free-kernel tail of the init lives below the line
        CHECK(std::abs(field_at(g, snaps[i], Point{0, -1})) < 1e-6);
    }
}

TEST_CASE("two-half-space survival matches the error function within 1%") {
    auto dom = two_halfspace();
    Grid g = build_grid(dom, 8.0, 0.05);
    auto snaps = lab_survival(g, {0.5, 1.0, 2.0}, quick_params());
    std::vector<double> ts{0.5, 1.0, 2.0};
    for (size_t i = 0; i < ts.size(); ++i)
        for (double xd : {0.5, 1.0, 2.0})
            CHECK(field_at(g, snaps[i], Point{0, xd}) ==
                  doctest::Approx(halfspace_survival(ts[i], xd)).epsilon(0.01));
}

TEST_CASE("solver input validation") {
    auto dom = two_halfspace();
    Grid g = build_grid(dom, 2.0, 0.05);
    Field bad;
    bad.t = 0;
    bad.v.assign(g.mask.size(), 1.0);  // nonzero on the mask
    CHECK_THROWS(heat_solve(g, bad, {1.0}, heat_options(quick_params())));
    Field wrong;
    wrong.v.assign(3, 0.0);
    CHECK_THROWS(heat_solve(g, wrong, {1.0}, heat_options(quick_params())));
    // zero data stays zero
    Field zero;
    zero.t = 0;
    zero.v.assign(g.mask.size(), 0.0);
    auto snaps = heat_solve(g, zero, {0.5}, heat_options(quick_params()));
    for (double v : snaps[0].v) CHECK(v == 0.0);
    // t0 window: too close to the Dirichlet set
    CHECK_THROWS(pick_kernel_t0(dom, g, Point{0, 0.1}));
    CHECK_THROWS(kernel_field(dom, g, Point{0, 1}, 1e-6, {1.0}, heat_options(quick_params())));
}

TEST_CASE("kernel mass decreases in time") {
    auto dom = segment_domain();
    Grid g = build_grid(dom, 6.0, 0.05);
    auto snaps = lab_kernel(dom, g, Point{0, 1}, {0.5, 1.0, 2.0}, quick_params());
    double m0 = field_mass(g, snaps[0]);
    double m1 = field_mass(g, snaps[1]);
    double m2 = field_mass(g, snaps[2]);
    CHECK(m0 <= 1.0 + 1e-6);
    CHECK(m1 <= m0);
    CHECK(m2 <= m1);
    CHECK(m2 > 0.1);
}

TEST_CASE("harmonic solve is exact for the two-half-space profile") {
    auto dom = two_halfspace();
    Grid g = build_grid(dom, 2.0, 0.05);
    Field u = laplace_harmonic(g, FarField::AbsXd);
    for (const Point& p : {Point{0.3, 0.7}, Point{-1.1, -0.4}, Point{0, 1.9}})
        CHECK(field_at(g, u, p) == doctest::Approx(std::abs(p.c[1])).epsilon(1e-8));
}

TEST_CASE("harmonic profiles: superposition and mirror symmetry") {
    auto dom = segment_domain();
    Grid g = build_grid(dom, 4.0, 0.05);
    auto prof = harmonic_profiles(g);
    // far-field |x2| = max(x2,0) + max(-x2,0), so v_s = u1 + u2 by linearity
    for (const Point& p : {Point{1.5, 0.5}, Point{-2, 1}, Point{0, -2.5}, Point{3, 3}})
        CHECK(field_at(g, prof.v_s, p) ==
              doctest::Approx(field_at(g, prof.u1, p) + field_at(g, prof.u2, p)).epsilon(1e-6));
    // the domain is symmetric under x2 -> -x2, which swaps u1 and u2
    for (const Point& p : {Point{1.5, 0.5}, Point{-2, 1}, Point{0.2, 2.5}})
        CHECK(field_at(g, prof.u1, p) ==
              doctest::Approx(field_at(g, prof.u2, Point{p.c[0], -p.c[1]})).epsilon(1e-6));
    // zero on the hole; dominates |x2| off it since |x2| is subharmonic
    CHECK(std::abs(field_at(g, prof.v_s, Point{0, 0})) < 1e-10);
    CHECK(field_at(g, prof.v_s, Point{2, 1}) >= 1.0);
    CHECK(field_at(g, prof.v_s, Point{2, 0}) > 0);
}

TEST_CASE("slit-plane harmonic matches the closed form") {
    auto dom = slit_domain();
    Grid g = build_grid(dom, 4.0, 0.05);
    LaplaceOptions opt;
    opt.custom = [](double x1, double x2) { return slit_harmonic(Point{x1, x2}); };
    Field u = laplace_harmonic(g, FarField::Custom, opt);
    for (const Point& p :
         {Point{-1, 0}, Point{-2, 1}, Point{0, 1.5}, Point{1, -1}, Point{2, 0.5}})
        CHECK(field_at(g, u, p) == doctest::Approx(slit_harmonic(p)).epsilon(0.02));
    // vanishes on the slit
    CHECK(std::abs(field_at(g, u, Point{2, 0})) < 1e-3);
    // closed form facts
    CHECK(slit_harmonic(Point{-1, 0}) == doctest::Approx(1.0));
    CHECK(slit_harmonic(Point{0, 1}) == doctest::Approx(std::sin(M_PI / 4)));
    CHECK(slit_harmonic(Point{0, -1}) == doctest::Approx(std::sin(3 * M_PI / 4)));
}

TEST_CASE("reflection rows on the segment domain") {
    auto dom = segment_domain();
    Grid g = build_grid(dom, 8.0, 0.05);
    Point x{0, 1}, y{0.5, 1.5};
    auto rows = reflection_rows(dom, g, quick_params(), x, y, {1.0, 2.0});
    for (const auto& r : rows) {
        double resid = std::abs(r.p_xy - r.p_half - r.p_xystar) / r.p_xy;
        CHECK(resid < 0.02);
        CHECK(r.p_xy > r.p_half);  // holes let mass through, so p > p^H
    }
}

TEST_CASE("Duhamel rows collapse to the half-space kernel when there is no window") {
    auto dom = two_halfspace();
    Grid g = build_grid(dom, 8.0, 0.05);
    Point x{0.5, 1.2}, y{0, 1};
    auto rows = duhamel_rows(dom, g, quick_params(), x, y, {1.0, 2.0});
    for (const auto& r : rows) {
        CHECK(r.rhs == doctest::Approx(halfspace_kernel(r.t, x, y)).epsilon(1e-12));
        CHECK(r.p_pde == doctest::Approx(r.rhs).epsilon(0.01));
    }
}

TEST_CASE("Duhamel rows close on the segment domain") {
    auto dom = segment_domain();
    Grid g = build_grid(dom, 8.0, 0.05);
    Point x{-0.4, 0.8}, y{0.3, 1.1};
    auto rows = duhamel_rows(dom, g, quick_params(), x, y, {1.0, 2.0});
    for (const auto& r : rows) {
        CHECK(std::abs(r.p_pde - r.rhs) / r.p_pde < 0.05);
        // the boundary term is strictly positive here
        CHECK(r.rhs > halfspace_kernel(r.t, x, y));
    }
}

TEST_CASE("oblique bound samples on the segment domain") {
    auto dom = segment_domain();
    Grid g = build_grid(dom, 8.0, 0.05);
    ReflectionFrame frame(Point{0, 2}, {1.0});
    std::vector<Point> xs{{3, 1}, {2.5, 0.5}, {2, -1}, {0.5, 1}, {4, 2}};
    auto samples = oblique_samples(dom, g, quick_params(), frame, xs, 2.0);
    int used = 0;
    for (const auto& s : samples) {
        if (!s.in_omega_plus) continue;
        ++used;
        CHECK(s.p_x <= s.p_sp + s.p_sm + 0.01 * std::max({s.p_x, s.p_sp, s.p_sm}));
    }
    CHECK(used >= 3);
}
