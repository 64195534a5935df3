#pragma once

#include <vector>

#include "bene/asymptotics.hpp"
#include "bene/pde.hpp"
#include "bene/verify.hpp"

namespace bene {

struct PdeParams {
    double L = 20;
    double dx = 0.05;
    double dt = 0.01;
    double dt_ramp = 1.02;  // A-stable stepping; grow dt once transients decay
    double dt_max = 0.5;
    double t0 = 0;          // kernel start time; 0 = pick automatically
};

HeatOptions heat_options(const PdeParams& p);

// Kernel snapshots p_t(x, .) at the requested times.
std::vector<Field> lab_kernel(const BenedicksDomain& dom, const Grid& grid, const Point& x,
                              const std::vector<double>& t_grid, const PdeParams& p);

// Kernel snapshots plus the line trace needed by the Duhamel quadrature.
std::vector<Field> lab_kernel_traced(const BenedicksDomain& dom, const Grid& grid,
                                     const Point& x, const std::vector<double>& t_grid,
                                     const PdeParams& p, LineTrace& trace);

std::vector<Field> lab_survival(const Grid& grid, const std::vector<double>& t_grid,
                                const PdeParams& p);

// Inventory for the kernel-vs-survival inequality: p_{3t}(x, y_i) from one
// kernel solve, survivals from one survival solve.
std::vector<ProductBoundTriple> product_bound_inventory(const BenedicksDomain& dom, const Grid& grid,
                                           const PdeParams& p, const Point& x,
                                           const std::vector<Point>& ys,
                                           const std::vector<double>& ts);

std::vector<ReflectionRow> reflection_rows(const BenedicksDomain& dom, const Grid& grid,
                                           const PdeParams& p, const Point& x, const Point& y,
                                           const std::vector<double>& ts);

std::vector<DuhamelRow> duhamel_rows(const BenedicksDomain& dom, const Grid& grid,
                                     const PdeParams& p, const Point& x, const Point& y,
                                     const std::vector<double>& ts);

std::vector<ObliqueSample> oblique_samples(const BenedicksDomain& dom, const Grid& grid,
                                         const PdeParams& p, const ReflectionFrame& frame,
                                         const std::vector<Point>& xs, double t);

// Im sqrt(z) with the branch cut along the slit [0, inf) x {0}:
// r^{1/2} sin(theta/2), theta in (0, 2 pi). The closed-form element of the
// cone for the slit plane.
double slit_harmonic(const Point& x);

// Survival series from PDE snapshots at one start point.
std::vector<SeriesRow> survival_series_at(const Grid& grid, const std::vector<Field>& snaps,
                                          const Point& x);

// t^{1+d/2} p_t(x,y) series from kernel snapshots.
std::vector<SeriesRow> kernel_limit_series(const Grid& grid, const std::vector<Field>& snaps,
                                           const Point& y, int d);

}  // namespace bene
