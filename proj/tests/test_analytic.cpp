#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bene/analytic.hpp"
#include "bene/rng.hpp"

using namespace bene;

TEST_CASE("free kernel reference values") {
    CHECK(free_kernel(1.0, Point{0, 0}, Point{0, 0}) == doctest::Approx(0.15915494309189535));
    CHECK(free_kernel(2.0, Point{0.0}, Point{2.0}) ==
          doctest::Approx(0.10377687435514868).epsilon(1e-12));
    CHECK(free_kernel(1.0, Point{0, 0}, Point{0, 60}) < 1e-300);
    CHECK_THROWS_AS(free_kernel(0.0, Point{0, 0}, Point{0, 0}), std::domain_error);
}

TEST_CASE("half-space kernel reference values") {
    CHECK(halfspace_kernel(1.0, Point{1.0}, Point{1.0}) ==
          doctest::Approx(0.34495131388824463).epsilon(1e-12));
    CHECK(halfspace_kernel(1.0, Point{0.0}, Point{1.0}) == 0.0);
    CHECK(halfspace_kernel(1.0, Point{1.0}, Point{-1.0}) == 0.0);
    CHECK_THROWS_AS(halfspace_kernel(-1.0, Point{1.0}, Point{1.0}), std::domain_error);
}

TEST_CASE("half-space survival against the normal CDF oracle") {
    CHECK(halfspace_survival(1.0, 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-12));
    CHECK(halfspace_survival(4.0, 0.0) == 0.0);
    CHECK(halfspace_survival(1.0, 0.1) == doctest::Approx(0.07965567455405798).epsilon(1e-12));
    // leading term 2 x_d / sqrt(2 pi t)
    CHECK(halfspace_survival(1.0, 0.1) ==
          doctest::Approx(2 * 0.1 / std::sqrt(2 * M_PI)).epsilon(2e-3));
}

TEST_CASE("kernel limit values") {
    CHECK(halfspace_kernel_limit(Point{0, 1}, Point{0, 2}) ==
          doctest::Approx(4.0 / (2 * M_PI)).epsilon(1e-14));
    CHECK(halfspace_kernel_limit(Point{0, 1}, Point{0, 1}) == doctest::Approx(1.0 / M_PI));
    CHECK(halfspace_kernel_limit(Point{0, 1e-12}, Point{0, 1}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(halfspace_kernel_limit(Point{0, -1}, Point{0, 1}), std::domain_error);
}

TEST_CASE("survival lower bound") {
    CHECK(halfspace_survival_lower_bound(1.0, 2.0) == doctest::Approx(0.94600903).epsilon(1e-6));
    CHECK(halfspace_survival_lower_bound(1.0, 1.0) == doctest::Approx(0.51605855).epsilon(1e-6));
    // bound never exceeds the exact survival
    Rng rng(3, 0);
    for (int i = 0; i < 200; ++i) {
        double s = 0.05 + 5 * rng.uniform();
        double xd = 0.05 + 5 * rng.uniform();
        CHECK(halfspace_survival_lower_bound(s, xd) <= halfspace_survival(s, xd) + 1e-14);
    }
    CHECK(halfspace_survival_lower_bound(1.0, 50.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("method-of-images identity, symmetry, domination") {
    Rng rng(11, 0);
    for (int i = 0; i < 300; ++i) {
        int d = 2 + static_cast<int>(rng.uniform() * 2.999);
        double t = 0.1 + 4 * rng.uniform();
        Point x(std::vector<double>(d, 0.0)), y(std::vector<double>(d, 0.0));
        for (int k = 0; k < d; ++k) {
            x.c[k] = 3 * rng.gaussian();
            y.c[k] = 3 * rng.gaussian();
        }
        double ph = halfspace_kernel(t, x, y);
        CHECK(ph == doctest::Approx(halfspace_kernel(t, y, x)).epsilon(1e-13));
        CHECK(ph <= free_kernel(t, x, y) * (1 + 1e-13));
        if (x.xd() * y.xd() > 0) {
            double images = free_kernel(t, x, y) - free_kernel(t, x, mirror_across_hyperplane(y));
            CHECK(ph == doctest::Approx(images).epsilon(1e-12));
        }
    }
}

TEST_CASE("small-argument sinh stability") {
    // x_d y_d / t = 1e-10: the images difference cancels catastrophically if
    // evaluated naively; the expm1 form keeps full relative precision.
    Point x{0.0, 1e-5}, y{0.0, 1e-5};
    double t = 1.0;
    double got = halfspace_kernel(t, x, y);
    double expected = free_kernel(t, x, y) * 2e-10;  // 1 - e^{-2e-10} to leading order
    CHECK(got == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("Chapman-Kolmogorov on a d=1 quadrature grid") {
    const double t = 2.0, s = 0.7;
    const double dz = 0.005, zmax = 14.0;
    for (double xv : {0.4, 1.0, 2.5}) {
        Point x{xv}, y{1.3};
        double sum = 0;
        for (double z = dz; z < zmax; z += dz) {
            Point pz{z};
            sum += halfspace_kernel(s, x, pz) * halfspace_kernel(t - s, pz, y) * dz;
        }
        CHECK(sum == doctest::Approx(halfspace_kernel(t, x, y)).epsilon(1e-5));
    }
}

TEST_CASE("convergence of t^{1+d/2} p^H to the limit") {
    Point x{0, 1}, y{0.5, 2};
    double limit = halfspace_kernel_limit(x, y);
    double prev = 0;
    for (double t : {10.0, 40.0, 160.0, 640.0}) {
        double scaled = std::pow(t, 2.0) * halfspace_kernel(t, x, y);
        CHECK(scaled <= limit * (1 + 1e-12));
        CHECK(scaled >= prev);  // monotone approach from below at large t
        prev = scaled;
    }
    // relative gap < 1% once x_d^2 + y_d^2 < 0.02 t
    double t = (1.0 + 4.0) / 0.02;
    CHECK(std::pow(t, 2.0) * halfspace_kernel(t, x, y) == doctest::Approx(limit).epsilon(0.01));
}

TEST_CASE("survival monotonicity and the plateau prefactor in the half-space") {
    for (double xd : {0.3, 1.0, 2.0}) {
        CHECK(halfspace_survival(1.0, xd) > halfspace_survival(2.0, xd));
        CHECK(halfspace_survival(2.0, xd) > halfspace_survival(8.0, xd));
    }
    CHECK(halfspace_survival(1.0, 0.5) < halfspace_survival(1.0, 1.5));
    double xd = 1.0;
    double scaled = std::sqrt(4096.0) * halfspace_survival(4096.0, xd);
    CHECK(scaled == doctest::Approx(std::sqrt(2 / M_PI) * xd).epsilon(1e-4));
}
