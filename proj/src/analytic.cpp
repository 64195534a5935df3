#include "bene/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace bene {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_positive_time(double t) {
    if (!(t > 0)) throw std::domain_error("time must be positive");
}

double sq_dist(const Point& x, const Point& y) {
    double s = 0;
    for (size_t i = 0; i < x.c.size(); ++i) {
        double d = x.c[i] - y.c[i];
        s += d * d;
    }
    return s;
}
}  // namespace

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double free_kernel(double t, const Point& x, const Point& y) {
    require_positive_time(t);
    const int d = x.dim();
    return std::pow(kTwoPi * t, -0.5 * d) * std::exp(-sq_dist(x, y) / (2.0 * t));
}

double halfspace_kernel(double t, const Point& x, const Point& y) {
    require_positive_time(t);
    const double prod = x.xd() * y.xd();
    if (prod <= 0) return 0.0;
    // Images form p^H = g(x,y) - g(x,y*) written as g(x,y) * (1 - e^{-2 x_d y_d / t});
    // -expm1 keeps full precision when x_d y_d / t is tiny.
    return free_kernel(t, x, y) * (-std::expm1(-2.0 * prod / t));
}

double halfspace_survival(double t, double xd) {
    require_positive_time(t);
    const double z = std::abs(xd) / std::sqrt(t);
    return norm_cdf(z) - norm_cdf(-z);
}

double halfspace_kernel_limit(const Point& x, const Point& y) {
    if (!(x.xd() > 0) || !(y.xd() > 0))
        throw std::domain_error("limit requires x_d > 0 and y_d > 0");
    const int d = x.dim();
    return 2.0 * x.xd() * y.xd() * std::pow(kTwoPi, -0.5 * d);
}

double halfspace_survival_lower_bound(double s, double xd) {
    require_positive_time(s);
    if (!(xd > 0)) throw std::domain_error("height must be positive");
    return 1.0 - (2.0 / std::sqrt(kTwoPi)) * (std::sqrt(s) / xd) * std::exp(-xd * xd / (2.0 * s));
}

}  // namespace bene
