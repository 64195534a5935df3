#pragma once

#include "bene/geometry.hpp"

namespace bene {

// Standard normal CDF, |error| < 1e-15.
double norm_cdf(double z);

// Free transition density (2 pi t)^{-d/2} exp(-|x-y|^2 / 2t) of Brownian
// motion with generator Laplacian/2.
double free_kernel(double t, const Point& x, const Point& y);

// Dirichlet heat kernel of the half space x_d > 0 (and by symmetry x_d < 0);
// zero whenever x_d y_d <= 0. Equivalently the kernel of R^d minus the whole
// hyperplane.
double halfspace_kernel(double t, const Point& x, const Point& y);

// Survival probability of the d-th coordinate: P(no hit of 0 by time t)
// starting from x_d. Equals Phi(|x_d|/sqrt(t)) - Phi(-|x_d|/sqrt(t)).
double halfspace_survival(double t, double xd);

// lim_{t->inf} t^{1+d/2} p_t^H(x,y) = 2 x_d y_d / (2 pi)^{d/2}, for
// x_d, y_d > 0.
double halfspace_kernel_limit(const Point& x, const Point& y);

// Lower bound 1 - (2/sqrt(2 pi)) (sqrt(s)/x_d) exp(-x_d^2/2s) for the
// half-space survival at time s from height x_d > 0.
double halfspace_survival_lower_bound(double s, double xd);

}  // namespace bene
